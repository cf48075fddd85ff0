#include "toeplab/cli.hpp"
#include "toeplab/applications.hpp"
#include "toeplab/asympt.hpp"
#include "toeplab/eigen.hpp"
#include "toeplab/errors.hpp"
#include "toeplab/exactdet.hpp"
#include "toeplab/ising.hpp"
#include "toeplab/scaling.hpp"
#include "toeplab/symbols.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

namespace toeplab::cli {

namespace {

using json = nlohmann::ordered_json;

struct RunRecord {
    std::string task;
    std::vector<std::pair<std::string, std::string>> params;
    std::optional<int> n;
    std::optional<LogDet> exact;
    std::optional<AsymptoticPrediction> predicted;
    std::optional<double> abs_err, rel_err;
    json values = json::object();
    double wall_time_ms = 0.0;
};

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string fmt_complex(cplx z) {
    if (z.imag() == 0.0) return fmt_double(z.real());
    std::ostringstream os;
    os.precision(17);
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    return os.str();
}

json complex_json(cplx z) { return z.imag() == 0.0 ? json(z.real()) : json(fmt_complex(z)); }

json to_json(const RunRecord& r) {
    json j;
    j["task"] = r.task;
    json p = json::object();
    for (const auto& [k, v] : r.params) p[k] = v;
    j["params"] = p;
    if (r.n) j["n"] = *r.n;
    if (r.exact) {
        json e = json::object();
        if (r.exact->exact_zero) {
            e["zero"] = true;
        } else {
            e["logmod"] = r.exact->log_modulus;
            e["phase"] = r.exact->phase;
        }
        j["exact"] = e;
    }
    if (r.predicted) {
        json terms = json::array();
        for (const auto& t : r.predicted->terms) {
            json tj = json::object();
            if (t.quad != cplx(0.0)) tj["q"] = complex_json(t.quad);
            if (t.linear_known) tj["a"] = complex_json(t.a);
            tj["p"] = complex_json(t.p);
            if (t.constant_known) tj["c"] = complex_json(t.c);
            terms.push_back(tj);
        }
        j["predicted"] = terms;
    }
    if (r.abs_err) j["abs_err"] = *r.abs_err;
    if (r.rel_err) j["rel_err"] = *r.rel_err;
    if (!r.values.empty()) j["values"] = r.values;
    j["wall_time_ms"] = r.wall_time_ms;
    return j;
}

// Flattened columns in schema order.
std::vector<std::pair<std::string, std::string>> flatten(const RunRecord& r) {
    std::vector<std::pair<std::string, std::string>> cols;
    std::string params;
    for (const auto& [k, v] : r.params) params += (params.empty() ? "" : ";") + k + "=" + v;
    cols.emplace_back("task", r.task);
    cols.emplace_back("params", params);
    cols.emplace_back("n", r.n ? std::to_string(*r.n) : "");
    cols.emplace_back("exact_logmod", r.exact && !r.exact->exact_zero ? fmt_double(r.exact->log_modulus) : "");
    cols.emplace_back("exact_phase", r.exact && !r.exact->exact_zero ? fmt_double(r.exact->phase) : "");
    std::string pred;
    if (r.predicted)
        for (const auto& t : r.predicted->terms)
            pred += (pred.empty() ? "" : "|") + (t.linear_known ? fmt_complex(t.a) : "?") + ":" + fmt_complex(t.p) +
                    ":" + (t.constant_known ? fmt_complex(t.c) : "?");
    cols.emplace_back("predicted", pred);
    cols.emplace_back("abs_err", r.abs_err ? fmt_double(*r.abs_err) : "");
    cols.emplace_back("rel_err", r.rel_err ? fmt_double(*r.rel_err) : "");
    for (const auto& [k, v] : r.values.items()) {
        if (v.is_array()) continue;
        cols.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
    }
    cols.emplace_back("wall_time_ms", fmt_double(r.wall_time_ms));
    return cols;
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

enum class OutputMode { Json, Csv, Plot };

void emit(const std::vector<RunRecord>& recs, OutputMode mode, std::ostream& out) {
    if (mode == OutputMode::Json) {
        for (const auto& r : recs) out << to_json(r).dump() << "\n";
        return;
    }
    if (mode == OutputMode::Plot) {
        for (const auto& r : recs) {
            std::optional<double> x, y;
            if (r.n) x = *r.n;
            if (r.exact && !r.exact->exact_zero) y = r.exact->log_modulus;
            if (!y && r.values.contains("value") && r.values["value"].is_number()) y = r.values["value"].get<double>();
            for (const auto& [k, v] : r.values.items()) {
                if (!v.is_number() || k == "value") continue;
                if (!x) x = v.get<double>();
                else if (!y) y = v.get<double>();
            }
            if (x && y) out << fmt_double(*x) << " " << fmt_double(*y) << "\n";
        }
        return;
    }
    std::vector<std::string> header;
    std::vector<std::map<std::string, std::string>> rows;
    for (const auto& r : recs) {
        std::map<std::string, std::string> row;
        for (const auto& [k, v] : flatten(r)) {
            if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
            row[k] = v;
        }
        rows.push_back(std::move(row));
    }
    // keep wall_time_ms last
    auto it = std::find(header.begin(), header.end(), "wall_time_ms");
    if (it != header.end()) {
        header.erase(it);
        header.push_back("wall_time_ms");
    }
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            auto f = row.find(header[i]);
            out << (i ? "," : "") << csv_cell(f == row.end() ? "" : f->second);
        }
        out << "\n";
    }
}

// Runs fn over items on `jobs` threads; results keep the input order.
template <class T, class F>
std::vector<RunRecord> sweep(const std::vector<T>& items, int jobs, F fn) {
    std::vector<RunRecord> out(items.size());
    std::vector<std::exception_ptr> errs(items.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < items.size(); i = next++) {
            const auto t0 = std::chrono::steady_clock::now();
            try {
                out[i] = fn(items[i]);
            } catch (...) {
                errs[i] = std::current_exception();
            }
            out[i].wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        }
    };
    const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(items.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

// Relative error of `pred` against `exact`, from the difference of logs.
void fill_errors(RunRecord& r, const LogDet& exact, const LogDet& pred) {
    if (exact.exact_zero || pred.exact_zero) {
        if (exact.exact_zero && pred.exact_zero) r.abs_err = 0.0;
        else r.abs_err = std::abs(exact.value() - pred.value());
        return;
    }
    const cplx d = pred.log() - exact.log();
    const double rel = std::abs(std::expm1(d.real()) * std::polar(1.0, d.imag()) + (std::polar(1.0, d.imag()) - 1.0));
    r.rel_err = rel;
    r.abs_err = std::exp(exact.log_modulus) * rel;
}

// ---- option groups -------------------------------------------------------------

struct Common {
    bool csv = false, plot = false;
    std::string precision = "double";
    int jobs = 1;
    std::string config;

    Precision prec() const { return precision == "extended" ? Precision::Extended : Precision::Double; }
    OutputMode mode() const { return csv ? OutputMode::Csv : (plot ? OutputMode::Plot : OutputMode::Json); }
};

void add_common(CLI::App* app, Common& c) {
    auto* csv = app->add_flag("--csv", c.csv, "Emit CSV with a header instead of JSON lines");
    app->add_flag("--plot-data", c.plot, "Emit two-column (n, value) text")->excludes(csv);
    app->add_option("--precision", c.precision,
                    "Arithmetic for determinants: double or extended (extended is needed for the\n"
                    "characteristic-interval sweep, whose determinants decay like e^{-c n^2})")
        ->check(CLI::IsMember({"double", "extended"}));
    app->add_option("--jobs", c.jobs, "Worker threads for sweeps over n")->check(CLI::PositiveNumber);
    app->add_option("--config", c.config, "key=value file; command-line flags take precedence");
}

struct SymbolOpts {
    std::string name;
    std::string file;
    std::vector<std::string> params;
    std::map<std::string, std::string> shortcuts;
};

void add_symbol(CLI::App* app, SymbolOpts& s) {
    auto* name = app->add_option("--symbol", s.name, "Builtin symbol name");
    auto* file = app->add_option("--symbol-file", s.file, "Symbol description file")->check(CLI::ExistingFile);
    name->excludes(file);
    app->add_option("--param", s.params, "Builtin parameter key=value (repeatable)");
    for (const char* key : {"k-ons", "gamma1", "gamma2", "mu", "t", "alpha", "beta", "theta", "lambda", "a", "c"}) {
        app->add_option_function<std::string>(
            std::string("--") + key, [&s, key](const std::string& v) { s.shortcuts[key] = v; },
            std::string("Shortcut for --param ") + key);
    }
}

CircleSymbol build_symbol(const SymbolOpts& o, std::vector<std::pair<std::string, std::string>>& params) {
    if (!o.file.empty()) {
        params.emplace_back("symbol_file", o.file);
        return load_symbol_file(o.file);
    }
    if (o.name.empty()) throw InputError("a symbol is required (--symbol or --symbol-file)");
    params.emplace_back("symbol", o.name);
    SymbolParams sp;
    auto put = [&](std::string k, const std::string& v) {
        std::replace(k.begin(), k.end(), '-', '_');
        sp[k] = parse_complex(v);
        params.emplace_back(k, v);
    };
    for (const auto& kv : o.shortcuts) put(kv.first, kv.second);
    for (const auto& p : o.params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw InputError("--param expects key=value, got '" + p + "'");
        put(p.substr(0, eq), p.substr(eq + 1));
    }
    return builtin(o.name, sp);
}

struct NRange {
    std::vector<int> n;
    int from = 0, to = 0;
    std::string step = "all";
};

void add_nrange(CLI::App* app, NRange& r) {
    app->add_option("--n", r.n, "Matrix sizes");
    app->add_option("--n-from", r.from, "First size of a range");
    app->add_option("--n-to", r.to, "Last size of a range");
    app->add_option("--step", r.step, "Range step: all, even, odd or a stride");
}

std::vector<int> expand(const NRange& r, bool required = true) {
    std::vector<int> out = r.n;
    if (r.from > 0 || r.to > 0) {
        if (r.from < 1 || r.to < r.from) throw InputError("need 1 <= --n-from <= --n-to");
        int stride = 1;
        if (r.step != "all" && r.step != "even" && r.step != "odd") {
            try {
                stride = std::stoi(r.step);
            } catch (const std::exception&) {
                throw InputError("--step must be all, even, odd or a positive integer");
            }
            if (stride < 1) throw InputError("--step must be positive");
        }
        for (int n = r.from; n <= r.to; n += stride) {
            if (r.step == "even" && n % 2) continue;
            if (r.step == "odd" && n % 2 == 0) continue;
            out.push_back(n);
        }
    }
    if (required && out.empty()) throw InputError("no matrix sizes given (--n or --n-from/--n-to)");
    for (int n : out)
        if (n < 0) throw InputError("matrix sizes must be non-negative");
    return out;
}

LogDet value_as_logdet(double v) { return v == 0.0 ? LogDet::zero() : LogDet::from_value(v); }

// key=value lines for options that were not given on the command line.
std::vector<std::string> config_args(const std::string& path, const std::vector<std::string>& given) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file '" + path + "'");
    std::vector<std::string> extra;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        line = line.substr(b, line.find_last_not_of(" \t\r") + 1 - b);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError("config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        val.erase(0, val.find_first_not_of(" \t"));
        const std::string flag = "--" + key;
        bool present = false;
        for (const auto& g : given)
            if (g == flag || g.rfind(flag + "=", 0) == 0) present = true;
        if (present) continue;
        if (val == "true") {
            extra.push_back(flag);
        } else if (val != "false") {
            std::istringstream vs(val);
            std::string tok;
            extra.push_back(flag);
            while (vs >> tok) extra.push_back(tok);
        }
    }
    return extra;
}

} // namespace

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args = args_in;
    // --config is expanded before parsing so that explicit flags win.
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
        if (path.empty()) continue;
        try {
            auto extra = config_args(path, args);
            args.insert(args.end(), extra.begin(), extra.end());
        } catch (const InputError& e) {
            err << "error: " << e.what() << "\n";
            return kInputError;
        }
        break;
    }

    CLI::App app{"Toeplitz determinants: exact values, asymptotics and applications", "toeplab"};
    app.require_subcommand(1);

    Common common;
    SymbolOpts sym;
    NRange nr;

    // det
    std::string structured = "toeplitz", det_route = "lu";
    int truncation = 60;
    auto* det = app.add_subcommand("det", "Exact determinants");
    add_common(det, common);
    add_symbol(det, sym);
    add_nrange(det, nr);
    det->add_option("--structured", structured,
                    "toeplitz, hankel, th_plus_0, th_minus_2, th_plus_1 or th_minus_1");
    det->add_option("--route", det_route, "lu, heine (n <= 3) or bo (Borodin-Okounkov)")
        ->check(CLI::IsMember({"lu", "heine", "bo"}));
    det->add_option("--truncation", truncation, "Fredholm truncation for --route bo");

    // predict / compare
    std::string method = "auto";
    auto* predict = app.add_subcommand("predict", "Asymptotic predictions");
    auto* compare = app.add_subcommand("compare", "Exact determinants against asymptotics");
    for (auto* sc : {predict, compare}) {
        add_common(sc, common);
        add_symbol(sc, sym);
        add_nrange(sc, nr);
        sc->add_option("--method", method, "auto, szego, bt or th_plus_0")
            ->check(CLI::IsMember({"auto", "szego", "bt", "th_plus_0"}));
    }

    // ising
    double chi1 = 0.0, chi2 = 0.0;
    std::string kind = "diag", route = "toeplitz";
    bool free_energy_flag = false;
    auto* ising = app.add_subcommand("ising", "Two-dimensional Ising correlations");
    add_common(ising, common);
    add_nrange(ising, nr);
    ising->add_option("--chi1", chi1, "J_1 / k_B T")->required();
    ising->add_option("--chi2", chi2, "J_2 / k_B T")->required();
    ising->add_option("--kind", kind, "row or diag")->check(CLI::IsMember({"row", "diag"}));
    ising->add_option("--route", route, "toeplitz or gamma (critical diagonal only)")
        ->check(CLI::IsMember({"toeplitz", "gamma"}));
    ising->add_flag("--free-energy", free_energy_flag, "Report the free energy (needs chi1 = chi2)");

    // eigen
    std::vector<double> xs;
    auto* eig = app.add_subcommand("eigen", "Spectra of Hermitian Toeplitz matrices");
    add_common(eig, common);
    add_symbol(eig, sym);
    add_nrange(eig, nr);
    eig->add_option("--x", xs, "Bulk positions in (0, 1) for the unimodal prediction");

    // scale
    std::string what;
    std::vector<double> rs, xgrid, sgrid;
    double lam = 1.0 / MathConstants::pi, mu = 0.6;
    std::string sign = "minus";
    int nodes = 64;
    auto* scale = app.add_subcommand("scale", "Scaling functions and gap probabilities");
    add_common(scale, common);
    add_nrange(scale, nr);
    scale->add_option("--what", what, "p3, p5, sine, dyson or widom")
        ->required()
        ->check(CLI::IsMember({"p3", "p5", "sine", "dyson", "widom"}));
    scale->add_option("--r", rs, "r values (p3, p5)");
    scale->add_option("--lambda", lam, "Painleve III family parameter");
    scale->add_option("--sign", sign, "plus or minus")->check(CLI::IsMember({"plus", "minus"}));
    scale->add_option("--x", xgrid, "x values for sigma (p5)");
    scale->add_option("--s", sgrid, "s values (sine, dyson)");
    scale->add_option("--nodes", nodes, "Nystrom nodes");
    scale->add_option("--mu", mu, "Interval parameter (widom)");

    // gap
    double th1 = 0.0, th2 = 2.0 * MathConstants::pi / 3.0, gam = 0.2, eps = -1.0;
    int q = 0;
    auto* gap = app.add_subcommand("gap", "Eigenvalues inside the gap of a two-level symbol");
    add_common(gap, common);
    add_nrange(gap, nr);
    gap->add_option("--theta1", th1, "Start of the raised arc");
    gap->add_option("--theta2", th2, "End of the raised arc");
    gap->add_option("--gamma", gam, "Raised level is e^{2 pi gamma}");
    gap->add_option("--epsilon", eps, "Margin; default 0.05 (e^{2 pi gamma} - 1)");
    gap->add_option("--q", q, "Denominator q for the pairing distance");

    // boson
    std::vector<int> Ns;
    std::vector<double> ts;
    bool condensate = false;
    auto* boson = app.add_subcommand("boson", "Impenetrable boson density and condensate fraction");
    add_common(boson, common);
    boson->add_option("--N", Ns, "Particle numbers")->required();
    boson->add_option("--t", ts, "t values in [0.05, pi]");
    boson->add_flag("--condensate", condensate, "Report lambda_max / N");

    // lis
    double lis_lambda = 1.0;
    int nmax = 7;
    auto* lis = app.add_subcommand("lis", "Poissonized longest increasing subsequence identity");
    add_common(lis, common);
    add_nrange(lis, nr);
    lis->add_option("--lambda", lis_lambda, "Poisson parameter");
    lis->add_option("--n-max", nmax, "Largest enumerated permutation size (<= 8)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    std::vector<RunRecord> recs;
    try {
        const Precision prec = common.prec();
        const int jobs = common.jobs;
        if (det->parsed()) {
            std::vector<std::pair<std::string, std::string>> params;
            const CircleSymbol s = build_symbol(sym, params);
            params.emplace_back("precision", common.precision);
            if (structured != "toeplitz") params.emplace_back("structured", structured);
            if (det_route != "lu") params.emplace_back("route", det_route);
            std::optional<StructuredKind> sk;
            if (structured != "toeplitz") sk = parse_structured_kind(structured);
            recs = sweep(expand(nr), jobs, [&](int n) {
                RunRecord r;
                r.task = "det";
                r.params = params;
                r.n = n;
                if (sk) {
                    if (*sk == StructuredKind::Hankel)
                        r.exact = hankel_det(hankel_weight_from_even_symbol(s), n);
                    else
                        r.exact = toeplitz_plus_hankel_det(*sk, s, n);
                } else if (det_route == "heine") {
                    const HeineResult h = heine_oracle(s, n);
                    r.exact = LogDet::from_value(h.value);
                    r.values["error_estimate"] = h.error_estimate;
                } else if (det_route == "bo") {
                    const BorodinOkounkov b = bo_rhs(s, n, truncation);
                    r.exact = LogDet::from_value(b.value);
                    r.values["tail_bound"] = b.tail_bound;
                } else {
                    r.exact = toeplitz_det(s, n, prec);
                }
                return r;
            });
        } else if (predict->parsed() || compare->parsed()) {
            const bool cmp = compare->parsed();
            std::vector<std::pair<std::string, std::string>> params;
            const CircleSymbol s = build_symbol(sym, params);
            params.emplace_back("method", method);
            if (cmp) params.emplace_back("precision", common.precision);
            AsymptoticPrediction pred;
            if (method == "szego") pred = szego_fh_predict(s);
            else if (method == "bt") pred = bt_predict(s);
            else if (method == "th_plus_0") pred = hankel_th_predict(StructuredKind::THPlus0, s);
            else pred = s.is_direct() ? throw InputError("symbol has no Fisher-Hartwig form to predict from")
                                      : bt_predict(s);
            const auto ns = expand(nr, cmp);
            if (ns.empty()) {
                RunRecord r;
                r.task = "predict";
                r.params = params;
                r.predicted = pred;
                r.values["error_order"] = pred.error_order;
                recs.push_back(r);
            } else {
                recs = sweep(ns, jobs, [&](int n) {
                    RunRecord r;
                    r.task = cmp ? "compare" : "predict";
                    r.params = params;
                    r.n = n;
                    r.predicted = pred;
                    r.values["error_order"] = pred.error_order;
                    std::optional<LogDet> p;
                    if (pred.fully_known() && n >= 1) {
                        p = pred.at(n);
                        r.values["predicted_logmod"] = p->exact_zero ? 0.0 : p->log_modulus;
                        r.values["predicted_phase"] = p->exact_zero ? 0.0 : p->phase;
                    }
                    if (cmp) {
                        r.exact = method == "th_plus_0" ? toeplitz_plus_hankel_det(StructuredKind::THPlus0, s, n)
                                                        : toeplitz_det(s, n, prec);
                        if (p) fill_errors(r, *r.exact, *p);
                    }
                    return r;
                });
            }
        } else if (ising->parsed()) {
            const IsingParams ip = ising_params(chi1, chi2);
            std::vector<std::pair<std::string, std::string>> params = {
                {"chi1", fmt_double(chi1)}, {"chi2", fmt_double(chi2)}, {"kind", kind}, {"route", route},
                {"precision", common.precision}};
            if (free_energy_flag) {
                RunRecord r;
                r.task = "ising_free_energy";
                r.params = params;
                r.values["regime"] = regime_name(ip.regime);
                r.values["free_energy_double"] = free_energy(ip, FreeEnergyForm::DoubleIntegral);
                r.values["free_energy_single"] = free_energy(ip, FreeEnergyForm::SingleIntegral);
                recs.push_back(r);
            }
            const auto ns = expand(nr, !free_energy_flag);
            const CorrelationKind ck = kind == "row" ? CorrelationKind::Row : CorrelationKind::Diag;
            const CorrelationRoute cr = route == "gamma" ? CorrelationRoute::GammaProduct : CorrelationRoute::Toeplitz;
            auto more = sweep(ns, jobs, [&](int n) {
                RunRecord r;
                r.task = "ising";
                r.params = params;
                r.n = n;
                const CorrelationResult c = correlation(ip, ck, n, cr, prec);
                r.exact = value_as_logdet(c.value);
                const double lead = wu_leading(ip, ck, n);
                r.values["regime"] = regime_name(ip.regime);
                r.values["k_ons"] = ip.k_ons;
                r.values["value"] = c.value;
                r.values["leading"] = lead;
                r.values["magnetization_sq"] = std::pow(magnetization(ip), 2);
                fill_errors(r, *r.exact, value_as_logdet(lead));
                return r;
            });
            recs.insert(recs.end(), more.begin(), more.end());
        } else if (eig->parsed()) {
            std::vector<std::pair<std::string, std::string>> params;
            const CircleSymbol s = build_symbol(sym, params);
            recs = sweep(expand(nr), jobs, [&](int n) {
                RunRecord r;
                r.task = "eigen";
                r.params = params;
                r.n = n;
                const SpectrumReport sp = toeplitz_eigenvalues(s, n);
                r.values["L"] = sp.L;
                r.values["M"] = sp.M;
                r.values["min"] = sp.eigenvalues.front();
                r.values["max"] = sp.eigenvalues.back();
                r.values["eigenvalues"] = sp.eigenvalues;
                if (!xs.empty()) {
                    json bulk = json::array();
                    for (double x : xs) {
                        const BulkPrediction b = bulk_prediction(s, x, n);
                        int k = static_cast<int>(std::lround(x * (n + 1)));
                        k = std::clamp(k, 1, n);
                        bulk.push_back({{"x", x},
                                        {"lambda_x", b.lambda_x},
                                        {"spacing", b.spacing},
                                        {"psi_derivative", b.psi_derivative},
                                        {"k", k},
                                        {"lambda_k", sp.eigenvalues[k - 1]}});
                    }
                    r.values["bulk"] = bulk;
                }
                return r;
            });
        } else if (scale->parsed()) {
            if (what == "p3") {
                if (rs.empty()) throw InputError("scale p3 needs --r");
                recs = sweep(rs, jobs, [&](double r0) {
                    RunRecord r;
                    r.task = "scale_p3";
                    r.params = {{"lambda", fmt_double(lam)}, {"sign", sign}};
                    const P3Scaling p = p3_scaling(r0, lam, sign == "plus" ? ScalingSign::Plus : ScalingSign::Minus);
                    r.values["r"] = r0;
                    r.values["value"] = p.G;
                    r.values["eta_at_half_r"] = p.eta_at_half_r;
                    return r;
                });
            } else if (what == "p5") {
                if (rs.empty() && xgrid.empty()) throw InputError("scale p5 needs --r or --x");
                auto a = sweep(xgrid, jobs, [&](double x) {
                    RunRecord r;
                    r.task = "scale_p5_sigma";
                    r.values["x"] = x;
                    r.values["value"] = p5_sigma(x);
                    return r;
                });
                auto b = sweep(rs, jobs, [&](double r0) {
                    RunRecord r;
                    r.task = "scale_p5_g_minus";
                    r.values["r"] = r0;
                    r.values["value"] = g_minus_p5(r0);
                    return r;
                });
                recs = a;
                recs.insert(recs.end(), b.begin(), b.end());
            } else if (what == "sine") {
                if (sgrid.empty()) throw InputError("scale sine needs --s");
                recs = sweep(sgrid, jobs, [&](double s) {
                    RunRecord r;
                    r.task = "scale_sine";
                    r.params = {{"nodes", std::to_string(nodes)}};
                    const FredholmGap g = sine_gap(s, nodes);
                    r.values["s"] = s;
                    r.values["value"] = g.p_s.value().real();
                    r.values["log_p"] = g.p_s.log_modulus;
                    r.values["log_d_plus"] = g.d_plus.log_modulus;
                    r.values["log_d_minus"] = g.d_minus.log_modulus;
                    return r;
                });
            } else if (what == "dyson") {
                const std::vector<double> grid = sgrid.empty() ? std::vector<double>{6, 8, 10, 12} : sgrid;
                RunRecord r;
                r.task = "scale_dyson";
                std::string g;
                for (double s : grid) g += (g.empty() ? "" : " ") + fmt_double(s);
                r.params = {{"s_grid", g}};
                const DysonEstimate d = dyson_asymptote(grid);
                r.values["a0_estimate"] = d.a0_estimate;
                r.values["c0"] = d.c0;
                r.abs_err = std::abs(d.a0_estimate - d.c0);
                recs.push_back(r);
            } else {
                recs = sweep(expand(nr), jobs, [&](int n) {
                    RunRecord r;
                    r.task = "scale_widom";
                    r.params = {{"mu", fmt_double(mu)}, {"precision", common.precision}};
                    r.n = n;
                    const double est = widom_constant_estimate(mu, n, prec);
                    r.values["value"] = est;
                    r.values["c0"] = widom_dyson_constant();
                    r.abs_err = std::abs(est - widom_dyson_constant());
                    return r;
                });
            }
        } else if (gap->parsed()) {
            std::vector<std::pair<std::string, std::string>> params = {
                {"theta1", fmt_double(th1)}, {"theta2", fmt_double(th2)}, {"gamma", fmt_double(gam)}};
            if (q > 0) params.emplace_back("q", std::to_string(q));
            recs = sweep(expand(nr), jobs, [&](int n) {
                RunRecord r;
                r.task = "gap";
                r.params = params;
                r.n = n;
                const GapStats g = gap_spectrum_stats(th1, th2, gam, n, eps, q > 0 ? std::optional<int>(q) : std::nullopt);
                r.values["value"] = g.gap_count;
                r.values["epsilon"] = g.epsilon;
                r.values["count_over_log_n"] = g.gap_count / std::log(static_cast<double>(n));
                if (g.pairing_distance) {
                    r.values["pairing_distance"] = *g.pairing_distance;
                    r.values["pairing_times_n_log_n"] = *g.pairing_distance * n * std::log(static_cast<double>(n));
                }
                r.values["gap_eigenvalues"] = g.gap_eigenvalues;
                return r;
            });
        } else if (boson->parsed()) {
            recs = sweep(Ns, jobs, [&](int N) {
                RunRecord r;
                r.task = "boson";
                r.n = N;
                if (condensate) {
                    const CondensateEstimate e = condensate_fraction(N);
                    r.values["value"] = e.value;
                    r.values["error_bar"] = e.error_bar;
                    r.values["times_sqrt_N"] = e.value * std::sqrt(static_cast<double>(N));
                    r.values["dyson_constant"] = condensate_constant();
                }
                if (!ts.empty()) {
                    const BosonDensityCurve c = boson_density(N, ts);
                    json samples = json::array();
                    for (const auto& s : c.samples) samples.push_back({{"t", s.t}, {"R", s.r}, {"bound", s.bound}});
                    r.values["samples"] = samples;
                }
                if (!condensate && ts.empty()) throw InputError("boson needs --t values or --condensate");
                return r;
            });
        } else if (lis->parsed()) {
            recs = sweep(expand(nr), jobs, [&](int n) {
                RunRecord r;
                r.task = "lis";
                r.params = {{"lambda", fmt_double(lis_lambda)}, {"n_max", std::to_string(nmax)}};
                r.n = n;
                const LisCheck c = lis_check(n, lis_lambda, nmax);
                r.values["lhs"] = c.lhs;
                r.values["rhs_truncated"] = c.rhs_truncated;
                r.values["tail_bound"] = c.tail_bound;
                r.abs_err = std::abs(c.lhs - c.rhs_truncated);
                return r;
            });
        }
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalError;
    }
    emit(recs, common.mode(), out);
    return kOk;
}

} // namespace toeplab::cli

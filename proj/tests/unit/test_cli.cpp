#include <doctest.h>

#include "toeplab/cli.hpp"
#include "toeplab/asympt.hpp"
#include "toeplab/exactdet.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

using json = nlohmann::ordered_json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = toeplab::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<json> records(const std::string& text) {
    std::vector<json> r;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) r.push_back(json::parse(line));
    return r;
}

// Schema: known keys, in the documented order, with the documented types.
void check_schema(const json& j) {
    static const std::vector<std::string> order = {"task", "params", "n", "exact", "predicted",
                                                   "abs_err", "rel_err", "values", "wall_time_ms"};
    std::size_t pos = 0;
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto f = std::find(order.begin() + pos, order.end(), it.key());
        REQUIRE(f != order.end());
        pos = f - order.begin() + 1;
    }
    CHECK(j.at("task").is_string());
    CHECK(j.at("params").is_object());
    for (auto& [k, v] : j.at("params").items()) CHECK(v.is_string());
    CHECK(j.at("wall_time_ms").is_number());
    if (j.contains("n")) CHECK(j["n"].is_number_integer());
    if (j.contains("exact")) {
        const json& e = j["exact"];
        CHECK((e.contains("zero") || (e["logmod"].is_number() && e["phase"].is_number())));
    }
    if (j.contains("predicted"))
        for (const auto& t : j["predicted"]) CHECK(t.contains("p"));
    if (j.contains("rel_err")) CHECK(j["rel_err"].is_number());
    if (j.contains("abs_err")) CHECK(j["abs_err"].is_number());
}

std::string strip_times(const std::string& s) {
    return std::regex_replace(s, std::regex("\"wall_time_ms\":[0-9.eE+-]+"), "\"wall_time_ms\":0");
}

std::string temp_file(const std::string& name, const std::string& body) {
    const std::string path = "/tmp/toeplab_test_" + name;
    std::ofstream(path) << body;
    return path;
}

} // namespace

TEST_CASE("det emits one record with the exact log-determinant") {
    const Result r = run({"det", "--symbol", "diag", "--k-ons", "0.5", "--n", "40"});
    REQUIRE(r.code == 0);
    const auto recs = records(r.out);
    REQUIRE(recs.size() == 1);
    check_schema(recs[0]);
    CHECK(recs[0]["task"] == "det");
    CHECK(recs[0]["n"] == 40);
    const double expect =
        toeplab::toeplitz_det(toeplab::builtin("diag", {{"k_ons", 0.5}}), 40).log_modulus;
    CHECK(recs[0]["exact"]["logmod"].get<double>() == doctest::Approx(expect).epsilon(1e-14));
    CHECK_FALSE(recs[0].contains("rel_err"));
}

TEST_CASE("compare shows the two-term Basor-Tracy agreement") {
    const Result r = run({"compare", "--symbol", "bt", "--n-from", "4", "--n-to", "64", "--step", "even"});
    REQUIRE(r.code == 0);
    const auto recs = records(r.out);
    REQUIRE(recs.size() == 31);
    int prev = 0;
    for (const auto& j : recs) {
        check_schema(j);
        CHECK(j["n"].get<int>() > prev);
        prev = j["n"].get<int>();
        CHECK(j["predicted"].size() == 2);
    }
    CHECK(recs.back()["rel_err"].get<double>() < 0.01);
    CHECK(recs.back()["rel_err"].get<double>() < recs.front()["rel_err"].get<double>());
}

TEST_CASE("input errors exit with 2 and emit no records") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"det", "--symbol", "diag", "--bogus", "1", "--n", "4"},
             {"det", "--n", "4"},
             {"det", "--symbol", "nope", "--n", "4"},
             {"frobnicate"},
             {},
             {"det", "--symbol-file", "/nonexistent", "--n", "3"},
             {"boson", "--N", "8", "--t", "0.01"},
             {"det", "--symbol", "diag", "--k-ons", "0.5", "--n", "4", "--precision", "quad"}}) {
        const Result r = run(args);
        CHECK(r.code == 2);
        CHECK(r.out.empty());
        CHECK_FALSE(r.err.empty());
    }
}

TEST_CASE("numerical failures exit with 3") {
    const Result r = run({"ising", "--chi1", "0.2", "--chi2", "0.2", "--kind", "diag", "--n", "90"});
    CHECK(r.code == 3);
    CHECK(r.out.empty());
    CHECK(r.err.find("numerical") != std::string::npos);
}

TEST_CASE("help exits with 0") {
    CHECK(run({"--help"}).code == 0);
    const Result r = run({"det", "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("--precision") != std::string::npos);
}

TEST_CASE("property: identical invocations give identical output, independent of --jobs") {
    const std::vector<std::string> base = {"compare", "--symbol", "onsager", "--gamma1", "0.2", "--gamma2", "0.6",
                                           "--n-from", "2", "--n-to", "30"};
    const Result a = run(base);
    auto with_jobs = base;
    with_jobs.insert(with_jobs.end(), {"--jobs", "4"});
    const Result b = run(with_jobs), c = run(with_jobs);
    REQUIRE(a.code == 0);
    CHECK(strip_times(b.out) == strip_times(c.out));
    // the params block records nothing about the thread count
    CHECK(strip_times(a.out) == strip_times(b.out));
}

TEST_CASE("CSV and plot output") {
    const Result r = run({"det", "--symbol", "exp_trig", "--t", "0.5", "--n", "3", "5", "--csv"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string header, row;
    std::getline(in, header);
    CHECK(header.rfind("task,params,n,exact_logmod,exact_phase", 0) == 0);
    CHECK(header.substr(header.size() - 12) == "wall_time_ms");
    int rows = 0;
    while (std::getline(in, row)) ++rows;
    CHECK(rows == 2);

    const Result p = run({"det", "--symbol", "exp_trig", "--t", "0.5", "--n", "3", "5", "--plot-data"});
    REQUIRE(p.code == 0);
    std::istringstream pin(p.out);
    double n, v;
    pin >> n >> v;
    CHECK(n == 3.0);
    CHECK(std::isfinite(v));
}

TEST_CASE("config file values yield to explicit flags") {
    const std::string cfg = temp_file("cfg.txt", "# sweep\nsymbol = diag\nk-ons = 0.5\nn = 7\n");
    const auto a = records(run({"det", "--config", cfg}).out);
    REQUIRE(a.size() == 1);
    CHECK(a[0]["n"] == 7);
    const auto b = records(run({"det", "--config", cfg, "--n", "9"}).out);
    REQUIRE(b.size() == 1);
    CHECK(b[0]["n"] == 9);
    CHECK(run({"det", "--config", "/nonexistent.cfg"}).code == 2);
}

TEST_CASE("symbol files") {
    const std::string path = temp_file("sym.txt", "kind=fh\nsing.0.theta=0\nsing.0.alpha=0.3\nsing.0.beta=0.1+0.2i\n");
    const auto recs = records(run({"compare", "--symbol-file", path, "--n", "10"}).out);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0]["rel_err"].get<double>() < 0.01);
    const double exact = toeplab::bs_exact({0.3, 0.0}, {0.1, 0.2}, 10).log_modulus;
    CHECK(recs[0]["exact"]["logmod"].get<double>() == doctest::Approx(exact).epsilon(1e-9));
    CHECK(run({"det", "--symbol-file", temp_file("bad.txt", "kind=fh\nwhat=1\n"), "--n", "3"}).code == 2);
}

TEST_CASE("other subcommands produce valid records") {
    const std::vector<std::vector<std::string>> cases = {
        {"predict", "--symbol", "diag", "--k-ons", "0.5"},
        {"ising", "--chi1", "0.5", "--chi2", "0.5", "--kind", "row", "--n", "5", "10"},
        {"ising", "--chi1", "0.5", "--chi2", "0.5", "--free-energy"},
        {"eigen", "--symbol", "cos_series", "--param", "a0=2", "--param", "a1=-2", "--n", "20", "--x", "0.5"},
        {"scale", "--what", "p3", "--r", "0.1", "1"},
        {"scale", "--what", "p5", "--x", "1", "--r", "1"},
        {"scale", "--what", "sine", "--s", "1", "2"},
        {"gap", "--n", "64", "--q", "3"},
        {"boson", "--N", "8", "--t", "1", "3"},
        {"lis", "--n", "1", "2", "3"},
        {"det", "--symbol", "exp_trig", "--t", "0.7", "--n", "6", "--route", "bo"},
        {"det", "--symbol", "exp_trig", "--t", "0.7", "--n", "2", "--route", "heine"},
        {"det", "--symbol", "exp_trig", "--t", "0.7", "--n", "4", "--structured", "th_plus_0"},
        {"det", "--symbol", "char_interval", "--mu", "0.6", "--n", "150", "--precision", "extended"},
    };
    for (const auto& args : cases) {
        CAPTURE(args[0]);
        const Result r = run(args);
        REQUIRE(r.code == 0);
        const auto recs = records(r.out);
        CHECK(!recs.empty());
        for (const auto& j : recs) check_schema(j);
    }
}

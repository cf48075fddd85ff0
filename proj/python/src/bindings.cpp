#include "toeplab/applications.hpp"
#include "toeplab/asympt.hpp"
#include "toeplab/eigen.hpp"
#include "toeplab/errors.hpp"
#include "toeplab/exactdet.hpp"
#include "toeplab/ising.hpp"
#include "toeplab/scaling.hpp"
#include "toeplab/symbols.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace toeplab;

namespace {

Precision precision_of(const std::string& p) {
    if (p == "double") return Precision::Double;
    if (p == "extended") return Precision::Extended;
    throw InputError("precision must be 'double' or 'extended'");
}

CorrelationKind kind_of(const std::string& k) {
    if (k == "row") return CorrelationKind::Row;
    if (k == "diag") return CorrelationKind::Diag;
    throw InputError("kind must be 'row' or 'diag'");
}

ScalingSign sign_of(const std::string& s) {
    if (s == "+" || s == "plus") return ScalingSign::Plus;
    if (s == "-" || s == "minus") return ScalingSign::Minus;
    throw InputError("sign must be '+' or '-'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Toeplitz determinants, their asymptotics and applications";

    static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
    static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InputError& e) {
            py::set_error(input_error, e.what());
        } catch (const NumericalError& e) {
            py::set_error(numerical_error, e.what());
        }
    });

    py::class_<LogDet>(m, "LogDet")
        .def_readonly("log_modulus", &LogDet::log_modulus)
        .def_readonly("phase", &LogDet::phase)
        .def_readonly("exact_zero", &LogDet::exact_zero)
        .def("value", &LogDet::value)
        .def("__repr__", [](const LogDet& d) {
            if (d.exact_zero) return std::string("LogDet(zero)");
            return "LogDet(log_modulus=" + std::to_string(d.log_modulus) + ", phase=" + std::to_string(d.phase) + ")";
        });

    py::class_<CircleSymbol>(m, "Symbol")
        .def_readonly("name", &CircleSymbol::name)
        .def("__call__", [](const CircleSymbol& s, double theta) { return evaluate(s, theta); })
        .def("coeffs", [](const CircleSymbol& s, int kmin, int kmax) { return fourier_coeffs(s, kmin, kmax).c; })
        .def("__repr__", [](const CircleSymbol& s) { return "Symbol('" + s.name + "')"; });

    m.def("symbol", &builtin, py::arg("name"), py::arg("params") = SymbolParams{},
          "Builtin symbol by name; params maps parameter names to numbers");
    m.def("builtin_names", &builtin_names);
    m.def("parse_symbol", &parse_symbol_text, py::arg("text"));
    m.def("load_symbol", &load_symbol_file, py::arg("path"));

    m.def("toeplitz_det", [](const CircleSymbol& s, int n, const std::string& prec) {
        return toeplitz_det(s, n, precision_of(prec));
    }, py::arg("symbol"), py::arg("n"), py::arg("precision") = "double");
    m.def("bs_exact", &bs_exact, py::arg("alpha"), py::arg("beta"), py::arg("n"));
    m.def("bo_rhs", [](const CircleSymbol& s, int n, int truncation) {
        const BorodinOkounkov b = bo_rhs(s, n, truncation);
        return py::dict(py::arg("value") = b.value, py::arg("prefactor") = b.prefactor,
                        py::arg("fredholm") = b.fredholm, py::arg("tail_bound") = b.tail_bound);
    }, py::arg("symbol"), py::arg("n"), py::arg("truncation") = 60);
    m.def("verblunsky", [](const CircleSymbol& s, int n) {
        const VerblunskyData v = verblunsky(s, n);
        return py::make_tuple(v.xi, v.chi);
    }, py::arg("symbol"), py::arg("n"));

    py::class_<AsymptoticPrediction>(m, "Prediction")
        .def("at", &AsymptoticPrediction::at, py::arg("n"))
        .def_readonly("error_order", &AsymptoticPrediction::error_order)
        .def_property_readonly("terms", [](const AsymptoticPrediction& p) {
            py::list out;
            for (const auto& t : p.terms)
                out.append(py::dict(py::arg("quad") = t.quad, py::arg("a") = t.a, py::arg("p") = t.p, py::arg("c") = t.c));
            return out;
        });
    m.def("predict", [](const CircleSymbol& s, const std::string& method) {
        if (method == "szego") return szego_fh_predict(s);
        if (method == "bt") return bt_predict(s);
        throw InputError("method must be 'szego' or 'bt'");
    }, py::arg("symbol"), py::arg("method") = "bt");

    m.def("correlation", [](double chi1, double chi2, const std::string& kind, int n, bool gamma_product,
                            const std::string& prec) {
        return correlation(ising_params(chi1, chi2), kind_of(kind), n,
                           gamma_product ? CorrelationRoute::GammaProduct : CorrelationRoute::Toeplitz,
                           precision_of(prec)).value;
    }, py::arg("chi1"), py::arg("chi2"), py::arg("kind"), py::arg("n"), py::arg("gamma_product") = false,
       py::arg("precision") = "double");
    m.def("regime", [](double chi1, double chi2) { return regime_name(ising_params(chi1, chi2).regime); });
    m.def("k_ons", [](double chi1, double chi2) { return ising_params(chi1, chi2).k_ons; });
    m.def("magnetization", [](double chi1, double chi2) { return magnetization(ising_params(chi1, chi2)); });
    m.def("free_energy", [](double chi1, double chi2, bool single) {
        return free_energy(ising_params(chi1, chi2), single ? FreeEnergyForm::SingleIntegral : FreeEnergyForm::DoubleIntegral);
    }, py::arg("chi1"), py::arg("chi2"), py::arg("single_integral") = false);

    m.def("eigenvalues", [](const CircleSymbol& s, int n) { return toeplitz_eigenvalues(s, n).eigenvalues; },
          py::arg("symbol"), py::arg("n"));
    m.def("gap_stats", [](double theta1, double theta2, double gamma, int n, std::optional<int> q) {
        const GapStats g = gap_spectrum_stats(theta1, theta2, gamma, n, -1.0, q);
        return py::dict(py::arg("gap_count") = g.gap_count, py::arg("gap_eigenvalues") = g.gap_eigenvalues,
                        py::arg("pairing_distance") = g.pairing_distance, py::arg("epsilon") = g.epsilon);
    }, py::arg("theta1"), py::arg("theta2"), py::arg("gamma"), py::arg("n"), py::arg("q") = py::none());

    m.def("p3_scaling", [](double r, double lambda, const std::string& sign) {
        const P3Scaling p = p3_scaling(r, lambda, sign_of(sign));
        return py::make_tuple(p.eta_at_half_r, p.G);
    }, py::arg("r"), py::arg("lam"), py::arg("sign") = "-");
    m.def("p5_sigma", &p5_sigma, py::arg("x"));
    m.def("g_minus_p5", &g_minus_p5, py::arg("r"));
    m.def("sine_gap", [](double s, int nodes) { return sine_gap(s, nodes).p_s.real_value(); },
          py::arg("s"), py::arg("nodes") = 64);
    m.def("widom_dyson_constant", &widom_dyson_constant);
    m.def("dyson_asymptote", [](const std::vector<double>& s) { return dyson_asymptote(s).a0_estimate; });

    m.def("boson_density", [](int N, const std::vector<double>& t) {
        std::vector<double> r;
        for (const auto& smp : boson_density(N, t).samples) r.push_back(smp.r);
        return r;
    }, py::arg("N"), py::arg("t"));
    m.def("condensate_fraction", [](int N) { return condensate_fraction(N).value; }, py::arg("N"));
    m.def("condensate_constant", &condensate_constant);
    m.def("lis", &longest_increasing_subsequence, py::arg("perm"));
    m.def("lis_check", [](int n, double lambda, int n_max) {
        const LisCheck c = lis_check(n, lambda, n_max);
        return py::dict(py::arg("lhs") = c.lhs, py::arg("rhs_truncated") = c.rhs_truncated,
                        py::arg("tail_bound") = c.tail_bound);
    }, py::arg("n"), py::arg("lam"), py::arg("N_max"));
}

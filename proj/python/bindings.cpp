#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "kerrpqd/errors.hpp"
#include "kerrpqd/fock_oracle.hpp"
#include "kerrpqd/negativity.hpp"
#include "kerrpqd/phase_space.hpp"
#include "kerrpqd/run.hpp"
#include "kerrpqd/simulability.hpp"
#include "kerrpqd/state_description.hpp"
#include "kerrpqd/states.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace kerrpqd;

namespace {

// Elementwise over any array shape; the GIL is released for the loop.
template <class F>
py::array_t<double> map_complex(const py::array_t<cplx, py::array::c_style | py::array::forcecast>& beta, F&& f) {
    py::array_t<double> out(beta.request().shape);
    const cplx* in = beta.data();
    double* res = out.mutable_data();
    const py::ssize_t n = beta.size();
    {
        py::gil_scoped_release release;
        for (py::ssize_t i = 0; i < n; ++i) res[i] = f(in[i]);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Phase-space quasiprobabilities and simulability thresholds for Kerr-evolved states";

    // Most specific first so pybind11 picks the leaf class.
    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    auto invalid = py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
    auto numerical = py::register_exception<NumericalError>(m, "NumericalError", error.ptr());
    py::register_exception<NotIntegrable>(m, "NotIntegrable", numerical.ptr());
    py::register_exception<OrderingTooHigh>(m, "OrderingTooHigh", numerical.ptr());
    py::register_exception<OrderingTooLow>(m, "OrderingTooLow", numerical.ptr());
    py::register_exception<CutoffTooSmall>(m, "CutoffTooSmall", numerical.ptr());
    py::register_exception<TailBoundExceeded>(m, "TailBoundExceeded", numerical.ptr());
    py::register_exception<PreconditionViolated>(m, "PreconditionViolated", numerical.ptr());
    (void)invalid;

    py::class_<SqueezeParam>(m, "SqueezeParam")
        .def(py::init<>())
        .def(py::init<double, double>(), "r"_a, "phi"_a = 0.0)
        .def_static("from_complex", &SqueezeParam::from_complex)
        .def_static("from_zeta", &SqueezeParam::from_zeta)
        .def_property_readonly("r", &SqueezeParam::r)
        .def_property_readonly("phi", &SqueezeParam::phi)
        .def_property_readonly("xi", &SqueezeParam::xi)
        .def_property_readonly("zeta", &SqueezeParam::zeta)
        .def("inverse", &SqueezeParam::inverse)
        .def("__repr__", [](const SqueezeParam& s) {
            std::ostringstream os;
            os.precision(17);
            os << "SqueezeParam(r=" << s.r() << ", phi=" << s.phi() << ")";
            return os.str();
        });

    py::class_<KerrOrder>(m, "KerrOrder")
        .def(py::init<int>(), "m"_a)
        .def_property_readonly("m", &KerrOrder::m)
        .def_property_readonly("chi", &KerrOrder::chi);
    py::implicitly_convertible<int, KerrOrder>();

    py::class_<Branch>(m, "Branch")
        .def(py::init([](cplx coeff, cplx alpha, SqueezeParam squeeze) { return Branch{coeff, alpha, squeeze}; }),
             "coeff"_a = cplx(1.0), "alpha"_a = cplx(0.0), "squeeze"_a = SqueezeParam())
        .def_readonly("coeff", &Branch::coeff)
        .def_readonly("alpha", &Branch::alpha)
        .def_readonly("squeeze", &Branch::squeeze);

    py::class_<SuperpositionState>(m, "SuperpositionState")
        .def(py::init<std::vector<Branch>>(), "branches"_a)
        .def_property_readonly("branches", &SuperpositionState::branches)
        .def("norm_squared", &SuperpositionState::norm_squared)
        .def("__len__", &SuperpositionState::size);

    m.def("branch_overlap", &branch_overlap, "bra"_a, "ket"_a);
    m.def("kerr_coefficients", &kerr_coefficients, "m"_a);
    m.def("kerr_coherent_state", &kerr_coherent_state, "m"_a, "alpha"_a);
    m.def("squeeze_then_kerr_state", &squeeze_then_kerr_state, "m"_a, "alpha"_a, "squeeze"_a);
    m.def("kerr_squeezed_vacuum", &kerr_squeezed_vacuum, "m"_a, "r"_a);
    m.def("compose_squeezing", [](SqueezeParam a, SqueezeParam b) {
        const SqueezeComposition c = compose_squeezing(a, b);
        return py::make_tuple(c.xi3, c.Phi);
    }, "xi1"_a, "xi2"_a);
    m.def("su11_matrix", &su11_matrix, "xi"_a);

    py::class_<StateDescription>(m, "StateDescription")
        .def_static("parse", &StateDescription::parse, "text"_a)
        .def("to_string", &StateDescription::to_string)
        .def("to_superposition", &StateDescription::to_superposition)
        .def("__str__", &StateDescription::to_string);

    py::class_<PqdFunction>(m, "PqdFunction")
        .def_property_readonly("ordering", &PqdFunction::ordering)
        .def("integral", &PqdFunction::integral)
        .def("__call__", [](const PqdFunction& w, cplx beta) { return w.real(beta); }, "beta"_a)
        .def("evaluate", [](const PqdFunction& w, const py::array_t<cplx, py::array::c_style | py::array::forcecast>& beta) {
            return map_complex(beta, [&](cplx b) { return w.real(b); });
        }, "beta"_a);

    m.def("superposition_pqd", &superposition_pqd, "state"_a, "t"_a);
    m.def("max_integrable_ordering", &max_integrable_ordering, "state"_a);
    m.def("default_window", &default_window, "state"_a);

    py::class_<QuadratureSpec>(m, "QuadratureSpec")
        .def(py::init<>())
        .def_readwrite("half_width", &QuadratureSpec::half_width)
        .def_readwrite("base_resolution", &QuadratureSpec::base_resolution)
        .def_readwrite("refinement_depth", &QuadratureSpec::refinement_depth)
        .def_readwrite("abs_tol", &QuadratureSpec::abs_tol)
        .def_readwrite("threads", &QuadratureSpec::threads);

    py::class_<NegativityResult>(m, "NegativityResult")
        .def_readonly("value", &NegativityResult::value)
        .def_readonly("err", &NegativityResult::err)
        .def_readonly("tail_bound", &NegativityResult::tail_bound)
        .def_readonly("norm_residual", &NegativityResult::norm_residual);

    m.def("negativity_volume",
          py::overload_cast<const SuperpositionState&, double, const QuadratureSpec&>(&negativity_volume),
          "state"_a, "t"_a, "spec"_a = QuadratureSpec{}, py::call_guard<py::gil_scoped_release>());
    m.def("negativity_curve", [](const SuperpositionState& s, double t_min, double t_max, int n, const QuadratureSpec& spec) {
        NegativityCurve c;
        {
            py::gil_scoped_release release;
            c = negativity_curve(s, t_min, t_max, n, spec);
        }
        std::vector<std::tuple<double, double, double>> rows;
        for (const auto& p : c.points) rows.emplace_back(p.t, p.negativity, p.err);
        return rows;
    }, "state"_a, "t_min"_a, "t_max"_a, "n_points"_a, "spec"_a = QuadratureSpec{});

    py::class_<ThresholdOptions>(m, "ThresholdOptions")
        .def(py::init<>())
        .def_readwrite("eps_neg", &ThresholdOptions::eps_neg)
        .def_readwrite("tol_t", &ThresholdOptions::tol_t)
        .def_readwrite("sup_margin", &ThresholdOptions::sup_margin);
    py::class_<ThresholdResult>(m, "ThresholdResult")
        .def_readonly("t_bar", &ThresholdResult::t_bar)
        .def_readonly("t_sup", &ThresholdResult::t_sup)
        .def_readonly("evaluations", &ThresholdResult::evaluations);
    m.def("find_threshold", &find_threshold, "state"_a, "opts"_a = ThresholdOptions{}, "spec"_a = QuadratureSpec{},
          py::call_guard<py::gil_scoped_release>());

    py::class_<NoiseParams>(m, "NoiseParams")
        .def(py::init([](double eta_L, double eta_D, double p_D, double nbar) {
            NoiseParams n;
            n.eta_L = eta_L;
            n.eta_D = eta_D;
            n.p_D = p_D;
            n.nbar = nbar;
            n.validate();
            return n;
        }), "eta_L"_a = 1.0, "eta_D"_a = 1.0, "p_D"_a = 0.0, "nbar"_a = 0.0)
        .def_readonly("eta_L", &NoiseParams::eta_L)
        .def_readonly("eta_D", &NoiseParams::eta_D)
        .def_readonly("p_D", &NoiseParams::p_D)
        .def_readonly("nbar", &NoiseParams::nbar)
        .def("__repr__", &NoiseParams::describe);

    py::class_<Verdict>(m, "Verdict")
        .def_readonly("simulable", &Verdict::simulable)
        .def_readonly("margin", &Verdict::margin)
        .def_readonly("inequality", &Verdict::inequality)
        .def_readonly("always_simulable", &Verdict::always_simulable)
        .def("report", &Verdict::report, "params"_a = "");

    m.def("detector_order_threshold", &detector_order_threshold, "noise"_a);
    m.def("transition_condition", [](const Eigen::MatrixXcd& L, const std::vector<double>& s, const std::vector<double>& t) {
        return transition_condition(TransferMatrix(L), s, t);
    }, "L"_a, "s"_a, "t"_a);
    m.def("uniform_threshold_verdict", &uniform_threshold_verdict, "noise"_a, "t_bar"_a);
    m.def("gbs_qi_verdict", &gbs_qi_verdict, "noise"_a, "r"_a, "modes"_a, "eps"_a);
    m.def("thermal_lambda", &thermal_lambda, "noise"_a);
    m.def("thermal_transition_condition", &thermal_transition_condition, "noise"_a, "s"_a, "t"_a);
    m.def("thermal_threshold_verdict", &thermal_threshold_verdict, "noise"_a);

    py::class_<ClickEstimate>(m, "ClickEstimate")
        .def_readonly("p_off", &ClickEstimate::p_off)
        .def_readonly("std_error", &ClickEstimate::std_error)
        .def_readonly("samples", &ClickEstimate::samples)
        .def_readonly("acceptance", &ClickEstimate::acceptance);
    m.def("estimate_click_probability", [](const SuperpositionState& s, const NoiseParams& noise, double t, double sd,
                                           std::size_t samples, std::uint64_t seed, int threads) {
        EstimatorOptions o;
        o.samples = samples;
        o.seed = seed;
        o.threads = threads;
        py::gil_scoped_release release;
        return estimate_click_probability(s, noise, t, sd, o);
    }, "state"_a, "noise"_a, "t"_a, "s"_a, "samples"_a = 100000, "seed"_a = 1, "threads"_a = 1);

    auto fock = m.def_submodule("fock", "Truncated number-basis reference computations");
    fock.def("build_state", [](const StateDescription& d, int cutoff) { return fock::build_state(d, cutoff).amplitudes; },
             "desc"_a, "cutoff"_a);
    fock.def("oracle_char", py::overload_cast<const fock::Vector&, const fock::Vector&, cplx, double>(&fock::oracle_char),
             "ket"_a, "bra"_a, "xi"_a, "t"_a);
    fock.def("oracle_husimi", py::overload_cast<const fock::Vector&, cplx>(&fock::oracle_husimi), "psi"_a, "beta"_a);
    fock.def("verify_kerr_bch", &fock::verify_kerr_bch, "chi"_a, "cutoff"_a);
    fock.def("verify_u2_squeeze", &fock::verify_u2_squeeze, "r"_a, "cutoff"_a);

    m.def("run", [](const std::map<std::string, std::string>& kv) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = run(kv, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, "config"_a);
    m.def("verification_suite", [] {
        std::vector<std::tuple<std::string, double, double>> rows;
        for (const auto& c : verification_suite()) rows.emplace_back(c.name, c.deviation, c.tolerance);
        return rows;
    });
}

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pulseforge/perturbation.hpp"
#include "pulseforge/propagator.hpp"
#include "pulseforge/pulse_io.hpp"
#include "pulseforge/solver.hpp"
#include "pulseforge/trajectory.hpp"

namespace py = pybind11;
using namespace pulseforge;

namespace {

PhaseParameterization make_phase(const std::string& family,
                                 const std::vector<double>& coeffs) {
    return PhaseParameterization(family_from_string(family), coeffs);
}

}  // namespace

PYBIND11_MODULE(_pulseforge, m) {
    m.doc() = "shaped-pulse design and verification for robust two-level "
              "population inversion";

    py::register_exception<ValidationError>(m, "ValidationError",
                                            PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<IterationLimitError>(m, "IterationLimitError",
                                                PyExc_RuntimeError);

    py::class_<PhaseParameterization>(m, "PhaseParameterization")
        .def(py::init(&make_phase), py::arg("family"),
             py::arg("coefficients") = std::vector<double>{})
        .def_property_readonly(
            "family",
            [](const PhaseParameterization& p) { return to_string(p.family()); })
        .def_property_readonly("coefficients",
                               &PhaseParameterization::coefficients)
        .def("phase", &PhaseParameterization::phase, py::arg("theta"))
        .def("phase_derivative", &PhaseParameterization::phase_derivative,
             py::arg("theta"));

    py::class_<ThetaSchedule>(m, "ThetaSchedule")
        .def(py::init<double, double>(), py::arg("T") = 1.0,
             py::arg("t_max") = 0.0)
        .def_readonly("T", &ThetaSchedule::duration_scale)
        .def_readonly("t_max", &ThetaSchedule::t_max)
        .def("theta", &ThetaSchedule::theta, py::arg("t"))
        .def("theta_dot", &ThetaSchedule::theta_dot, py::arg("t"))
        .def("time_of_theta", &ThetaSchedule::time_of_theta, py::arg("theta"));

    py::class_<PulseShape>(m, "PulseShape")
        .def_readonly("time", &PulseShape::time)
        .def_readonly("omega", &PulseShape::omega)
        .def_readonly("delta", &PulseShape::delta)
        .def_readonly("area", &PulseShape::area);

    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("coefficients", &SolveReport::coefficients)
        .def_readonly("residual_norm", &SolveReport::residual_norm)
        .def_readonly("pulse_area", &SolveReport::pulse_area)
        .def_readonly("iterations", &SolveReport::iterations)
        .def_readonly("verified_orders", &SolveReport::verified_orders);

    m.def("synthesize", &synthesize, py::arg("phase"), py::arg("schedule"),
          py::arg("n_samples") = 4001,
          "sample the designed pulse on a uniform time grid");
    m.def(
        "pulse_area",
        [](const PhaseParameterization& p) { return pulse_area(p); },
        py::arg("phase"), "schedule-independent pulse area in radians");
    m.def(
        "phi_of_theta",
        [](const PhaseParameterization& p, double th) {
            return phi_of_theta(p, th);
        },
        py::arg("phase"), py::arg("theta"));
    m.def(
        "state_vector",
        [](double theta, double phi, double gamma) {
            return state_vector(BlochState{theta, phi, gamma});
        },
        py::arg("theta"), py::arg("phi"), py::arg("gamma") = 0.0);

    m.def(
        "condition_residuals",
        [](const PhaseParameterization& p, const ThetaSchedule& s) {
            const auto r = condition_residuals(p, s);
            return py::make_tuple(r.detuning_residual, r.area_residual);
        },
        py::arg("phase"), py::arg("schedule") = ThetaSchedule{},
        "second-order robustness residuals (detuning, area)");
    m.def(
        "hierarchy",
        [](const PhaseParameterization& p, const ThetaSchedule& s,
           const std::string& channel, int max_order) {
            const auto h = hierarchy(Trajectory(p, s),
                                     channel_from_string(channel), max_order);
            return h.profile_terms.values;
        },
        py::arg("phase"), py::arg("schedule") = ThetaSchedule{},
        py::arg("channel") = "area", py::arg("max_order") = 4,
        "profile terms O~n by order from the perturbative hierarchy");
    m.def(
        "second_order",
        [](const PhaseParameterization& p, const ThetaSchedule& s,
           const std::string& channel) {
            return second_order(Trajectory(p, s),
                                channel_from_string(channel));
        },
        py::arg("phase"), py::arg("schedule") = ThetaSchedule{},
        py::arg("channel") = "area");

    m.def(
        "solve",
        [](const std::string& channel, int order, const std::string& family,
           const std::vector<double>& seed) {
            const RobustnessTarget target{channel_from_string(channel), order,
                                          family_from_string(family)};
            if (seed.empty()) return solve_auto(target);
            return solve(target, seed);
        },
        py::arg("channel"), py::arg("order"), py::arg("family"),
        py::arg("seed") = std::vector<double>{},
        "find Fourier coefficients nullifying the robustness conditions");

    m.def(
        "propagate",
        [](const PulseShape& pulse, double alpha, double delta) {
            const auto r = propagate(pulse, {alpha, delta});
            return py::make_tuple(r.p2, r.infidelity);
        },
        py::arg("pulse"), py::arg("alpha") = 0.0, py::arg("delta") = 0.0,
        "returns (p2, infidelity) after integrating the TDSE");
    m.def(
        "scan",
        [](const PulseShape& pulse, const std::vector<double>& alphas,
           const std::vector<double>& deltas, int threads) {
            const auto s = scan(pulse, alphas, deltas, threads);
            py::list rows;
            for (const auto& r : s.rows)
                rows.append(py::make_tuple(r.alpha, r.delta, r.p2,
                                           r.infidelity));
            return rows;
        },
        py::arg("pulse"), py::arg("alphas"), py::arg("deltas"),
        py::arg("threads") = 0);
    m.def(
        "scaling_exponent",
        [](const PulseShape& pulse, const std::string& channel) {
            return scaling_exponent(pulse, channel_from_string(channel));
        },
        py::arg("pulse"), py::arg("channel") = "area");

    m.def("write_pulse_csv",
          [](const std::string& path, const PulseShape& pulse) {
              write_pulse_csv(path, pulse);
          });
    m.def("read_pulse_csv",
          [](const std::string& path) { return read_pulse_csv(path); });
}

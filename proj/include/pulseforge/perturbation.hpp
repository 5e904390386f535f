#pragma once

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pulseforge/trajectory.hpp"

namespace pulseforge {

// Error channel of the perturbing Hamiltonian. area drives the relative
// amplitude deviation (alpha, delta) = (1, 0), detuning the static offset
// (0, 1). both is resolved by the solver into the two directions evaluated
// independently.
enum class ErrorChannel { area, detuning, both };

ErrorChannel channel_from_string(const std::string& s);
std::string to_string(ErrorChannel c);

// Diagonal moving-frame matrix element of the perturbation,
// e = -1/2 (delta cos(theta) - alpha gamma_dot sin^2(theta)).
double kernel_e(const Trajectory& traj, double t, double alpha, double delta);

// Off-diagonal element against the orthogonal solution,
// f = 1/2 [delta sin(theta) + alpha (1/2 gamma_dot sin(2 theta)
//          - i theta_dot)] e^{i gamma}.
std::complex<double> kernel_f(const Trajectory& traj, double t, double alpha,
                              double delta);

// Second-order profile term O~2 = -|integral of f|^2 at unit error in the
// channel direction. Area-channel integrals run in theta over [0, pi]
// (schedule-independent), detuning-channel ones in t over the window.
double second_order(const Trajectory& traj, ErrorChannel channel);

// Third-order profile term via the interaction-picture hierarchy.
double third_order(const Trajectory& traj, ErrorChannel channel);

// Independent route for the third order: brute-force nested adaptive
// quadrature of -4 * triple-ordered-integral Im[conj(f) e f]. Slow; used for
// cross-validation against the hierarchy.
double third_order_nested(const Trajectory& traj, ErrorChannel channel,
                          double tol = 1e-8);

// Residuals of the two second-order robustness conditions.
// detuning_residual = integral e^{i gamma} sin(theta) dt over the window;
// area_residual = integral(0..pi) e^{i gamma} sin^2(theta) d theta minus the
// boundary bracket (zero for the inversion endpoints).
struct ConditionResiduals {
    std::complex<double> detuning_residual;
    std::complex<double> area_residual;
};

ConditionResiduals condition_residuals(const PhaseParameterization& p,
                                       const ThetaSchedule& s,
                                       double rel_tol = 1e-10);

// Profile terms O~n by order.
struct OrderTerms {
    std::map<int, double> values;

    double at(int order) const { return values.at(order); }
};

// Full hierarchy output, including the amplitude coefficients a_n = O_n and
// the orthogonal-channel coefficients b_n needed for the unitarity
// bookkeeping identity.
struct HierarchyResult {
    std::vector<std::complex<double>> a;  // a[0..max_order], a[0] = 1
    std::vector<std::complex<double>> b;
    OrderTerms profile_terms;             // O~n for n = 1..max_order
};

// Integrates the coupled interaction-picture hierarchy
//   da_k/dt = -i (e a_{k-1} + f b_{k-1}),
//   db_k/dt = -i (conj(f) a_{k-1} - e b_{k-1})
// at unit error in the channel direction, then reconstructs
// O~n = sum_{j+k=n} conj(a_j) a_k.
HierarchyResult hierarchy(const Trajectory& traj, ErrorChannel channel,
                          int max_order);

// Generalized trajectory hooks: the same computations for an arbitrary smooth
// phase function gamma(theta) (used by tests to break the family symmetry).
struct PhaseFunction {
    std::function<double(double)> gamma;        // gamma(theta)
    std::function<double(double)> gamma_prime;  // d gamma / d theta
};

HierarchyResult hierarchy(const PhaseFunction& phase, const ThetaSchedule& s,
                          ErrorChannel channel, int max_order);
double third_order_nested(const PhaseFunction& phase, const ThetaSchedule& s,
                          ErrorChannel channel, double tol = 1e-8);

}  // namespace pulseforge

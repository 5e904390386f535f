#pragma once

#include <stdexcept>
#include <vector>

#include "pulseforge/perturbation.hpp"
#include "pulseforge/trajectory.hpp"

namespace pulseforge {

// A robustness design target: which error channel to flatten, to which
// perturbative order, with which phase family. The number of free Fourier
// coefficients equals the number of real conditions:
//   (area | detuning, order 3)  -> 1   [second-order residual]
//   (both, order 2)             -> 2   [both second-order residuals]
//   (area, order 5)             -> 2   [residual + O~4]
//   (area, order 7)             -> 3   [residual + O~4 + O~6]
// Odd profile orders are not solved for; they vanish (or are negligible) at
// the even-order solutions and are checked after the fact.
struct RobustnessTarget {
    ErrorChannel channel = ErrorChannel::area;
    int order = 3;
    Family family = Family::a;

    int condition_count() const;  // throws ValidationError on bad combos
};

struct SolveReport {
    std::vector<double> coefficients;
    double residual_norm = 0.0;
    double pulse_area = 0.0;  // radians
    int iterations = 0;
    std::vector<int> verified_orders;
};

struct IterationLimitError : std::runtime_error {
    std::vector<double> last_iterate;
    double last_residual_norm;
    IterationLimitError(std::vector<double> it, double rn)
        : std::runtime_error("solve: iteration limit reached"),
          last_iterate(std::move(it)),
          last_residual_norm(rn) {}
};

struct SingularJacobianError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ordered real robustness conditions at the given coefficients. tol_scale
// scales the internal quadrature tolerances (used to re-verify roots with
// tightened tolerance).
std::vector<double> residual_vector(const RobustnessTarget& target,
                                    const std::vector<double>& coeffs,
                                    double tol_scale = 1.0);

// Damped Newton iteration with forward-difference Jacobian (step 1e-6),
// residual-norm halving line search (max 20 halvings) and an infinity-norm
// step cap of 0.5 while the residual is large. Converges when the residual
// 2-norm drops below 1e-10, or when it stops improving below 5e-9 (the
// evaluation noise floor of the near-degenerate order-7 system). Every
// returned root is re-verified at 100x tighter quadrature tolerance against
// the 1e-8 bar.
SolveReport solve(const RobustnessTarget& target,
                  const std::vector<double>& seed);

// Seed for order >= 5: the solved coefficients of the next-lower order padded
// with 0 for the new coefficient.
std::vector<double> continuation_seed(const RobustnessTarget& target);

// Default seed strategy: order-3 and both-2 targets sweep the first
// coefficient over [-4, 0] in steps of 0.25; higher orders start from the
// continuation seed with a small ladder of offsets for the new coefficient.
// Among converged roots the smallest pulse area wins.
SolveReport solve_auto(const RobustnessTarget& target);

}  // namespace pulseforge

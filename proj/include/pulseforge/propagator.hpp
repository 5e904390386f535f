#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

#include "pulseforge/perturbation.hpp"
#include "pulseforge/trajectory.hpp"

namespace pulseforge {

struct ErrorPoint {
    double alpha = 0.0;  // relative amplitude error
    double delta = 0.0;  // static detuning, units 1/T
};

struct PropagationResult {
    std::array<std::complex<double>, 2> psi_final;
    double p2 = 0.0;          // final population of state |2>
    double infidelity = 0.0;  // 1 - p2, computed as |<1|psi>|^2 for precision
    double norm_drift = 0.0;  // max | ||psi|| - 1 | over accepted steps
};

// Natural cubic spline through (x, y) samples; x strictly increasing.
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;

  private:
    std::vector<double> x_, y_, m_;  // m_: second derivatives
};

// Integrates the Schrodinger equation with the perturbed Hamiltonian
//   H = 1/2 [[-(Delta + delta), (1+alpha) Omega],
//            [(1+alpha) Omega,  (Delta + delta)]]
// from |1> at the start of the pulse window. Fields are evaluated
// analytically when the pulse carries provenance, otherwise by cubic-spline
// interpolation of the sampled grid.
PropagationResult propagate(const PulseShape& pulse, const ErrorPoint& e);

struct ScanResult {
    struct Row {
        double alpha, delta, p2, infidelity;
        bool ok = true;  // false when the integrator failed at this point
    };
    std::vector<Row> rows;  // row-major: alpha outer, delta inner
};

// Propagates at every (alpha, delta) grid point. threads <= 0 picks the
// hardware concurrency; output ordering is independent of the thread count.
ScanResult scan(const PulseShape& pulse, const std::vector<double>& alphas,
                const std::vector<double>& deltas, int threads = 0);

// Least-squares slope of log10(infidelity) vs log10(error) over 8 log-spaced
// error values. Starts from [1e-3, 1e-2] and doubles the window while the
// smallest infidelity sits too close to the numerical floor; throws
// PrecisionError when no usable window exists.
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double scaling_exponent(const PulseShape& pulse, ErrorChannel channel);

}  // namespace pulseforge

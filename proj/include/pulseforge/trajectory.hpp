#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pulseforge {

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Global-phase parameterization gamma(theta) = k*theta + sum_n C_n sin(2n theta).
// Family a has baseline slope k=2 (gamma_f = 2*pi), family b has k=1
// (gamma_f = pi). Family rabi is the constant-phase meridian trajectory (k=0,
// no coefficients), which reproduces the resonant pi-pulse.
enum class Family { a, b, rabi };

Family family_from_string(const std::string& s);
std::string to_string(Family f);

inline constexpr int kMaxFourierOrder = 8;

class PhaseParameterization {
  public:
    PhaseParameterization(Family family, std::vector<double> coefficients);

    Family family() const { return family_; }
    const std::vector<double>& coefficients() const { return coefficients_; }
    double baseline_slope() const;  // k

    // gamma(theta); theta must lie in [0, pi]
    double phase(double theta) const;
    // g(theta) = d gamma / d theta
    double phase_derivative(double theta) const;
    // g'(theta) = d^2 gamma / d theta^2
    double phase_second_derivative(double theta) const;

  private:
    Family family_;
    std::vector<double> coefficients_;
};

// Monotone erf time schedule theta(t) = pi*(erf(t/T)+1)/2 on [-t_max, t_max].
struct ThetaSchedule {
    double duration_scale = 1.0;  // T
    double t_max = 4.0;           // window half-width, in the same units as T

    explicit ThetaSchedule(double T = 1.0, double t_max_ = 0.0);

    double theta(double t) const;
    double theta_dot(double t) const;
    // Inverse of theta(t) on the open interval (0, pi); throws DomainError at
    // the poles (infinite time).
    double time_of_theta(double theta) const;
};

// Bloch-sphere state angles: polar theta, azimuth phi, global phase gamma.
struct BlochState {
    double theta = 0.0;
    double phi = 0.0;
    double gamma = 0.0;
};

// Amplitudes (c1, c2) of Eq. (2)-style state
// [e^{i phi/2} cos(theta/2), e^{-i phi/2} sin(theta/2)] * e^{-i gamma/2}.
std::array<std::complex<double>, 2> state_vector(const BlochState& s);

// azimuth phi = arccot(sin(theta) * g(theta)), taken in (0, pi)
double phi_of_theta(const PhaseParameterization& p, double theta);

// Designed trajectory: the pair (parameterization, schedule) with the derived
// moving-frame quantities. gamma is fixed by gamma(t_i) = gamma(theta=0) = 0.
class Trajectory {
  public:
    Trajectory(PhaseParameterization p, ThetaSchedule s)
        : phase_(std::move(p)), schedule_(s) {}

    const PhaseParameterization& phase() const { return phase_; }
    const ThetaSchedule& schedule() const { return schedule_; }

    double theta(double t) const { return schedule_.theta(t); }
    double theta_dot(double t) const { return schedule_.theta_dot(t); }
    double gamma(double t) const { return phase_.phase(schedule_.theta(t)); }
    double gamma_dot(double t) const {
        const double th = schedule_.theta(t);
        return schedule_.theta_dot(t) * phase_.phase_derivative(th);
    }
    double phi(double t) const {
        return phi_of_theta(phase_, schedule_.theta(t));
    }

    // Control fields obtained by inverting the Bloch-angle equations:
    //   Omega = theta_dot * sqrt(1 + g^2 sin^2 theta)
    //   Delta = -theta_dot * [ (g cos + g' sin)/(1 + g^2 sin^2) + g cos ]
    double omega(double t) const;
    double delta(double t) const;

  private:
    PhaseParameterization phase_;
    ThetaSchedule schedule_;
};

struct PulseProvenance {
    PhaseParameterization phase;
    ThetaSchedule schedule;
};

// Sampled control fields on a uniform time grid.
struct PulseShape {
    std::vector<double> time;
    std::vector<double> omega;
    std::vector<double> delta;
    double area = 0.0;  // trapezoid integral of omega over the grid
    std::optional<PulseProvenance> provenance;

    double t_start() const { return time.front(); }
    double t_end() const { return time.back(); }
};

// Samples the designed pulse on n_samples uniform points over
// [-t_max, t_max].
PulseShape synthesize(const PhaseParameterization& p, const ThetaSchedule& s,
                      std::size_t n_samples = 4001);

// Pulse area integral(0..pi) sqrt(1 + g^2 sin^2 theta) d theta; independent of
// the time schedule.
double pulse_area(const PhaseParameterization& p, double rel_tol = 1e-10);

}  // namespace pulseforge

#include "pulseforge/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "pulseforge/quadrature.hpp"

namespace pulseforge {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Family family_from_string(const std::string& s) {
    if (s == "a") return Family::a;
    if (s == "b") return Family::b;
    if (s == "rabi") return Family::rabi;
    throw ValidationError("unknown family '" + s + "' (expected a, b or rabi)");
}

std::string to_string(Family f) {
    switch (f) {
        case Family::a: return "a";
        case Family::b: return "b";
        case Family::rabi: return "rabi";
    }
    return "?";
}

PhaseParameterization::PhaseParameterization(Family family,
                                             std::vector<double> coefficients)
    : family_(family), coefficients_(std::move(coefficients)) {
    if (static_cast<int>(coefficients_.size()) > kMaxFourierOrder)
        throw ValidationError("at most " + std::to_string(kMaxFourierOrder) +
                              " Fourier coefficients are supported");
    for (double c : coefficients_)
        if (!std::isfinite(c))
            throw ValidationError("non-finite Fourier coefficient");
    if (family_ == Family::rabi && !coefficients_.empty())
        throw ValidationError("family rabi takes no Fourier coefficients");
}

double PhaseParameterization::baseline_slope() const {
    switch (family_) {
        case Family::a: return 2.0;
        case Family::b: return 1.0;
        case Family::rabi: return 0.0;
    }
    return 0.0;
}

namespace {
void check_theta_domain(double theta) {
    if (!(theta >= 0.0 && theta <= kPi))
        throw DomainError("theta outside [0, pi]");
}
}  // namespace

double PhaseParameterization::phase(double theta) const {
    check_theta_domain(theta);
    double v = baseline_slope() * theta;
    for (std::size_t n = 1; n <= coefficients_.size(); ++n)
        v += coefficients_[n - 1] * std::sin(2.0 * n * theta);
    return v;
}

double PhaseParameterization::phase_derivative(double theta) const {
    check_theta_domain(theta);
    double v = baseline_slope();
    for (std::size_t n = 1; n <= coefficients_.size(); ++n)
        v += 2.0 * n * coefficients_[n - 1] * std::cos(2.0 * n * theta);
    return v;
}

double PhaseParameterization::phase_second_derivative(double theta) const {
    check_theta_domain(theta);
    double v = 0.0;
    for (std::size_t n = 1; n <= coefficients_.size(); ++n)
        v += -4.0 * n * n * coefficients_[n - 1] * std::sin(2.0 * n * theta);
    return v;
}

ThetaSchedule::ThetaSchedule(double T, double t_max_)
    : duration_scale(T), t_max(t_max_ > 0.0 ? t_max_ : 4.0 * T) {
    if (!(T > 0.0) || !std::isfinite(T))
        throw ValidationError("duration scale T must be positive and finite");
    if (!(t_max > 0.0) || !std::isfinite(t_max))
        throw ValidationError("t_max must be positive and finite");
}

double ThetaSchedule::theta(double t) const {
    return kPi * (std::erf(t / duration_scale) + 1.0) / 2.0;
}

double ThetaSchedule::theta_dot(double t) const {
    const double u = t / duration_scale;
    return (std::sqrt(kPi) / duration_scale) * std::exp(-u * u);
}

double ThetaSchedule::time_of_theta(double th) const {
    if (!(th > 0.0 && th < kPi))
        throw DomainError("time_of_theta: theta at a pole (infinite time)");
    const double target = 2.0 * th / kPi - 1.0;  // erf(t/T)
    // bisection bracket wide enough for any double strictly inside (0, pi)
    double lo = -7.0, hi = 7.0;
    for (int i = 0; i < 40; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std::erf(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    // Newton polish; skipped in the far tails where exp(x^2) amplifies the
    // roundoff of erf and the bisection result is already accurate in theta.
    double x = 0.5 * (lo + hi);
    if (std::abs(x) <= 5.0) {
        for (int i = 0; i < 4; ++i) {
            const double r = std::erf(x) - target;
            x -= r * (std::sqrt(kPi) / 2.0) * std::exp(x * x);
        }
    }
    return x * duration_scale;
}

std::array<std::complex<double>, 2> state_vector(const BlochState& s) {
    check_theta_domain(s.theta);
    using namespace std::complex_literals;
    const std::complex<double> global = std::exp(-0.5i * s.gamma);
    return {std::exp(0.5i * s.phi) * std::cos(s.theta / 2.0) * global,
            std::exp(-0.5i * s.phi) * std::sin(s.theta / 2.0) * global};
}

double phi_of_theta(const PhaseParameterization& p, double theta) {
    // arccot mapped onto (0, pi): phi = pi/2 - atan(u)
    const double u = std::sin(theta) * p.phase_derivative(theta);
    return kPi / 2.0 - std::atan(u);
}

double Trajectory::omega(double t) const {
    const double th = schedule_.theta(t);
    const double g = phase_.phase_derivative(th);
    const double s = std::sin(th);
    return schedule_.theta_dot(t) * std::sqrt(1.0 + g * g * s * s);
}

double Trajectory::delta(double t) const {
    const double th = schedule_.theta(t);
    const double g = phase_.phase_derivative(th);
    const double gp = phase_.phase_second_derivative(th);
    const double s = std::sin(th);
    const double c = std::cos(th);
    const double w = 1.0 + g * g * s * s;
    return -schedule_.theta_dot(t) * ((g * c + gp * s) / w + g * c);
}

PulseShape synthesize(const PhaseParameterization& p, const ThetaSchedule& s,
                      std::size_t n_samples) {
    if (n_samples < 2)
        throw ValidationError("synthesize: need at least 2 samples");
    Trajectory traj(p, s);
    PulseShape out;
    out.time.resize(n_samples);
    out.omega.resize(n_samples);
    out.delta.resize(n_samples);
    const double t0 = -s.t_max, t1 = s.t_max;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double t =
            t0 + (t1 - t0) * static_cast<double>(k) /
                     static_cast<double>(n_samples - 1);
        out.time[k] = t;
        out.omega[k] = traj.omega(t);
        out.delta[k] = traj.delta(t);
    }
    double area = 0.0;
    for (std::size_t k = 1; k < n_samples; ++k)
        area += 0.5 * (out.omega[k] + out.omega[k - 1]) *
                (out.time[k] - out.time[k - 1]);
    out.area = area;
    out.provenance = PulseProvenance{p, s};
    return out;
}

double pulse_area(const PhaseParameterization& p, double rel_tol) {
    return integrate<double>(
        [&p](double th) {
            const double g = p.phase_derivative(th);
            const double s = std::sin(th);
            return std::sqrt(1.0 + g * g * s * s);
        },
        0.0, kPi, rel_tol, 1e-14);
}

}  // namespace pulseforge

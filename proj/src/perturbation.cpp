#include "pulseforge/perturbation.hpp"

#include <cmath>

#include "pulseforge/ode.hpp"
#include "pulseforge/quadrature.hpp"

namespace pulseforge {

namespace {

constexpr double kPi = 3.14159265358979323846;
using Complex = std::complex<double>;

PhaseFunction phase_function_of(const PhaseParameterization& p) {
    return PhaseFunction{
        [p](double th) { return p.phase(th); },
        [p](double th) { return p.phase_derivative(th); },
    };
}

// Kernels at unit error parameter, as functions of the integration variable.
// Area channel integrates in theta (the theta_dot factors cancel against the
// measure), detuning channel in t.
struct ChannelKernels {
    std::function<double(double)> e;
    std::function<Complex(double)> f;
    double lo, hi;
};

ChannelKernels make_kernels(const PhaseFunction& ph, const ThetaSchedule& s,
                            ErrorChannel channel) {
    if (channel == ErrorChannel::area) {
        auto e = [ph](double th) {
            return 0.5 * ph.gamma_prime(th) * std::sin(th) * std::sin(th);
        };
        auto f = [ph](double th) {
            const Complex i(0.0, 1.0);
            return 0.5 *
                   (0.5 * ph.gamma_prime(th) * std::sin(2.0 * th) - i) *
                   std::exp(i * ph.gamma(th));
        };
        return {e, f, 0.0, kPi};
    }
    if (channel == ErrorChannel::detuning) {
        auto e = [ph, s](double t) { return -0.5 * std::cos(s.theta(t)); };
        auto f = [ph, s](double t) {
            const Complex i(0.0, 1.0);
            const double th = s.theta(t);
            return 0.5 * std::sin(th) * std::exp(i * ph.gamma(th));
        };
        return {e, f, -s.t_max, s.t_max};
    }
    throw ValidationError(
        "channel 'both' must be resolved into its two directions");
}

}  // namespace

ErrorChannel channel_from_string(const std::string& s) {
    if (s == "area") return ErrorChannel::area;
    if (s == "detuning") return ErrorChannel::detuning;
    if (s == "both") return ErrorChannel::both;
    throw ValidationError("unknown channel '" + s +
                          "' (expected area, detuning or both)");
}

std::string to_string(ErrorChannel c) {
    switch (c) {
        case ErrorChannel::area: return "area";
        case ErrorChannel::detuning: return "detuning";
        case ErrorChannel::both: return "both";
    }
    return "?";
}

double kernel_e(const Trajectory& traj, double t, double alpha, double delta) {
    const double th = traj.theta(t);
    return -0.5 * (delta * std::cos(th) -
                   alpha * traj.gamma_dot(t) * std::sin(th) * std::sin(th));
}

Complex kernel_f(const Trajectory& traj, double t, double alpha,
                 double delta) {
    const Complex i(0.0, 1.0);
    const double th = traj.theta(t);
    return 0.5 *
           (delta * std::sin(th) +
            alpha * (0.5 * traj.gamma_dot(t) * std::sin(2.0 * th) -
                     i * traj.theta_dot(t))) *
           std::exp(i * traj.gamma(t));
}

double second_order(const Trajectory& traj, ErrorChannel channel) {
    const auto ker =
        make_kernels(phase_function_of(traj.phase()), traj.schedule(), channel);
    const Complex F =
        integrate<Complex>(ker.f, ker.lo, ker.hi, 1e-10, 1e-14);
    return -std::norm(F);
}

namespace {

HierarchyResult run_hierarchy(const ChannelKernels& ker, int max_order) {
    if (max_order < 1 || max_order > kMaxFourierOrder)
        throw ValidationError("hierarchy: max_order must be in [1, 8]");
    const int m = max_order;
    const std::size_t na = static_cast<std::size_t>(m) + 1;
    // state layout: [a_0..a_m, b_0..b_m]
    std::vector<Complex> y(2 * na, Complex{});
    y[0] = 1.0;
    auto rhs = [&ker, na](double x, const std::vector<Complex>& s,
                          std::vector<Complex>& ds) {
        const double e = ker.e(x);
        const Complex f = ker.f(x);
        const Complex fc = std::conj(f);
        const Complex mi(0.0, -1.0);
        ds[0] = 0.0;
        ds[na] = 0.0;
        for (std::size_t k = 1; k < na; ++k) {
            ds[k] = mi * (e * s[k - 1] + f * s[na + k - 1]);
            ds[na + k] = mi * (fc * s[k - 1] - e * s[na + k - 1]);
        }
    };
    OdeOptions opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-14;
    integrate_ode(rhs, y, ker.lo, ker.hi, opt);

    HierarchyResult res;
    res.a.assign(y.begin(), y.begin() + static_cast<long>(na));
    res.b.assign(y.begin() + static_cast<long>(na), y.end());
    for (int n = 1; n <= m; ++n) {
        Complex s{};
        for (int j = 0; j <= n; ++j) s += std::conj(res.a[j]) * res.a[n - j];
        res.profile_terms.values[n] = s.real();
    }
    return res;
}

}  // namespace

HierarchyResult hierarchy(const Trajectory& traj, ErrorChannel channel,
                          int max_order) {
    return run_hierarchy(
        make_kernels(phase_function_of(traj.phase()), traj.schedule(), channel),
        max_order);
}

HierarchyResult hierarchy(const PhaseFunction& phase, const ThetaSchedule& s,
                          ErrorChannel channel, int max_order) {
    return run_hierarchy(make_kernels(phase, s, channel), max_order);
}

double third_order(const Trajectory& traj, ErrorChannel channel) {
    return hierarchy(traj, channel, 3).profile_terms.at(3);
}

namespace {

double nested_third_order(const ChannelKernels& ker, double tol) {
    // O~3 = -4 Im integral_{lo}^{hi} conj(f(x)) M(x) dx with
    // M(x) = integral_{lo}^{x} e(x') F(x') dx', F(x') = integral f up to x'.
    auto inner = [&ker, tol](double xp) {
        return integrate<Complex>(ker.f, ker.lo, xp, tol * 1e-1, 1e-12, 800);
    };
    auto middle = [&ker, &inner, tol](double x) {
        return integrate<Complex>(
            [&ker, &inner](double xp) { return ker.e(xp) * inner(xp); },
            ker.lo, x, tol, 1e-11, 800);
    };
    const Complex outer = integrate<Complex>(
        [&ker, &middle](double x) {
            return std::conj(ker.f(x)) * middle(x);
        },
        ker.lo, ker.hi, tol, 1e-10, 800);
    return -4.0 * outer.imag();
}

}  // namespace

double third_order_nested(const Trajectory& traj, ErrorChannel channel,
                          double tol) {
    return nested_third_order(
        make_kernels(phase_function_of(traj.phase()), traj.schedule(), channel),
        tol);
}

double third_order_nested(const PhaseFunction& phase, const ThetaSchedule& s,
                          ErrorChannel channel, double tol) {
    return nested_third_order(make_kernels(phase, s, channel), tol);
}

ConditionResiduals condition_residuals(const PhaseParameterization& p,
                                       const ThetaSchedule& s,
                                       double rel_tol) {
    const Complex i(0.0, 1.0);
    ConditionResiduals r;
    r.detuning_residual = integrate<Complex>(
        [&p, &s, i](double t) {
            const double th = s.theta(t);
            return std::exp(i * p.phase(th)) * std::sin(th);
        },
        -s.t_max, s.t_max, rel_tol, 1e-14);
    // boundary bracket of the area condition; identically zero for the
    // inversion endpoints theta_i = 0, theta_f = pi but kept for clarity
    auto bracket = [&p, i](double th) {
        return std::exp(i * p.phase(th)) * std::sin(2.0 * th);
    };
    r.area_residual = integrate<Complex>(
                          [&p, i](double th) {
                              const double sn = std::sin(th);
                              return std::exp(i * p.phase(th)) * sn * sn;
                          },
                          0.0, kPi, rel_tol, 1e-14) -
                      0.25 * (bracket(0.0) - bracket(kPi));
    return r;
}

}  // namespace pulseforge

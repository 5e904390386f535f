#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace pulseforge {

struct StiffnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OdeOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double initial_step = 0.0;  // 0 -> span/100
    long max_steps = 2'000'000;
};

struct OdeStats {
    long accepted = 0;
    long rejected = 0;
    // max over accepted steps of |  ||y||_2 - 1 |; meaningful for unitary flows
    double max_norm_drift = 0.0;
};

// Dormand-Prince 5(4) with FSAL and standard step control, integrating a
// complex state vector from t0 to t1 (t1 > t0).
//
// Rhs signature: void(double t, const std::vector<std::complex<double>>& y,
//                     std::vector<std::complex<double>>& dydt)
template <class Rhs>
OdeStats integrate_ode(const Rhs& rhs, std::vector<std::complex<double>>& y,
                       double t0, double t1, const OdeOptions& opt = {}) {
    using C = std::complex<double>;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    // y5 - y4 error weights
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    const std::size_t n = y.size();
    const double span = t1 - t0;
    if (span <= 0.0) throw std::invalid_argument("integrate_ode: t1 <= t0");

    std::vector<C> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n),
        ynew(n);
    OdeStats stats;
    double t = t0;
    double h = opt.initial_step > 0 ? opt.initial_step : span / 100.0;
    rhs(t, y, k1);

    while (t < t1) {
        if (stats.accepted + stats.rejected > opt.max_steps)
            throw StiffnessError("integrate_ode: step budget exhausted");
        if (h < 1e-14 * span)
            throw StiffnessError("integrate_ode: step size underflow");
        bool last = false;
        if (t + h >= t1) {
            h = t1 - t;
            last = true;
        }

        for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, yt, k2);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, yt, k3);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, yt, k4);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] +
                    h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, yt, k5);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, yt, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                  b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, ynew, k7);

        double err_norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const C err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                               e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc =
                opt.abs_tol +
                opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double r = std::abs(err) / sc;
            err_norm += r * r;
        }
        err_norm = std::sqrt(err_norm / static_cast<double>(n));

        if (err_norm <= 1.0) {
            t = last ? t1 : t + h;
            y.swap(ynew);
            k1.swap(k7);
            ++stats.accepted;
            double nrm2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) nrm2 += std::norm(y[i]);
            stats.max_norm_drift =
                std::max(stats.max_norm_drift, std::abs(std::sqrt(nrm2) - 1.0));
        } else {
            ++stats.rejected;
        }
        const double factor = std::clamp(
            0.9 * std::pow(std::max(err_norm, 1e-10), -0.2), 0.2, 5.0);
        h *= factor;
    }
    return stats;
}

}  // namespace pulseforge

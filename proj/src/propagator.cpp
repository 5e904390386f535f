#include "pulseforge/propagator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <memory>
#include <thread>

#include "pulseforge/ode.hpp"

namespace pulseforge {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n)
        throw ValidationError("CubicSpline: need >= 3 matching samples");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw ValidationError("CubicSpline: x not strictly increasing");
    // natural boundary: m_0 = m_{n-1} = 0; Thomas algorithm
    m_.assign(n, 0.0);
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        const double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 -
                                  (y_[i] - y_[i - 1]) / h0);
        const double diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
        c[i] = h1 / diag;
        d[i] = (rhs - h0 * d[i - 1]) / diag;
    }
    for (std::size_t i = n - 1; i-- > 1;) m_[i] = d[i] - c[i] * m_[i + 1];
}

double CubicSpline::operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) *
               (h * h) / 6.0;
}

namespace {

using Complex = std::complex<double>;

struct FieldEval {
    std::function<double(double)> omega, delta;
};

FieldEval make_fields(const PulseShape& pulse) {
    if (pulse.provenance) {
        const Trajectory traj(pulse.provenance->phase,
                              pulse.provenance->schedule);
        return {[traj](double t) { return traj.omega(t); },
                [traj](double t) { return traj.delta(t); }};
    }
    auto om = std::make_shared<CubicSpline>(pulse.time, pulse.omega);
    auto de = std::make_shared<CubicSpline>(pulse.time, pulse.delta);
    return {[om](double t) { return (*om)(t); },
            [de](double t) { return (*de)(t); }};
}

}  // namespace

PropagationResult propagate(const PulseShape& pulse, const ErrorPoint& e) {
    if (pulse.time.size() < 2)
        throw ValidationError("propagate: pulse grid too small");
    if (!std::isfinite(e.alpha) || !std::isfinite(e.delta))
        throw ValidationError("propagate: non-finite error point");
    const auto fields = make_fields(pulse);
    const double scale = 1.0 + e.alpha;
    auto rhs = [&fields, scale, &e](double t, const std::vector<Complex>& y,
                                    std::vector<Complex>& dy) {
        const double om = scale * fields.omega(t);
        const double de = fields.delta(t) + e.delta;
        const Complex mi_half(0.0, -0.5);
        dy[0] = mi_half * (-de * y[0] + om * y[1]);
        dy[1] = mi_half * (om * y[0] + de * y[1]);
    };
    std::vector<Complex> psi = {Complex(1.0, 0.0), Complex(0.0, 0.0)};
    OdeOptions opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-14;
    const auto stats =
        integrate_ode(rhs, psi, pulse.t_start(), pulse.t_end(), opt);

    PropagationResult res;
    res.psi_final = {psi[0], psi[1]};
    // normalizing at readout keeps both populations in [0, 1] and makes tiny
    // infidelities relative-accurate (|<1|psi>|^2 instead of 1 - |<2|psi>|^2)
    const double nrm = std::norm(psi[0]) + std::norm(psi[1]);
    res.infidelity = std::norm(psi[0]) / nrm;
    res.p2 = std::norm(psi[1]) / nrm;
    res.norm_drift = stats.max_norm_drift;
    return res;
}

ScanResult scan(const PulseShape& pulse, const std::vector<double>& alphas,
                const std::vector<double>& deltas, int threads) {
    if (alphas.empty() || deltas.empty())
        throw ValidationError("scan: empty grid");
    for (std::size_t i = 1; i < alphas.size(); ++i)
        if (!(alphas[i] > alphas[i - 1]))
            throw ValidationError("scan: alpha grid not strictly increasing");
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (!(deltas[i] > deltas[i - 1]))
            throw ValidationError("scan: delta grid not strictly increasing");

    ScanResult out;
    out.rows.resize(alphas.size() * deltas.size());
    int n_threads = threads;
    if (const char* env = std::getenv("PULSEFORGE_THREADS"))
        n_threads = std::atoi(env);
    if (n_threads <= 0)
        n_threads = static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::clamp<int>(n_threads, 1,
                                static_cast<int>(out.rows.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= out.rows.size()) return;
            const double a = alphas[idx / deltas.size()];
            const double d = deltas[idx % deltas.size()];
            ScanResult::Row row{a, d, 0.0, 1.0, true};
            try {
                const auto r = propagate(pulse, {a, d});
                row.p2 = r.p2;
                row.infidelity = r.infidelity;
            } catch (const StiffnessError&) {
                row.p2 = std::numeric_limits<double>::quiet_NaN();
                row.infidelity = row.p2;
                row.ok = false;
            }
            out.rows[idx] = row;
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return out;
}

double scaling_exponent(const PulseShape& pulse, ErrorChannel channel) {
    if (channel == ErrorChannel::both)
        throw ValidationError("scaling_exponent: pick one error direction");
    auto infid_at = [&pulse, channel](double err) {
        const ErrorPoint p = channel == ErrorChannel::area
                                 ? ErrorPoint{err, 0.0}
                                 : ErrorPoint{0.0, err};
        return propagate(pulse, p).infidelity;
    };
    const double floor = infid_at(0.0);
    const double usable = std::max(30.0 * floor, 3e-14);

    double lo = 1e-3, hi = 1e-2;
    constexpr int kPoints = 8;
    std::array<double, kPoints> errs{}, infs{};
    for (;;) {
        const double ratio = std::pow(hi / lo, 1.0 / (kPoints - 1));
        double min_inf = 1.0;
        for (int i = 0; i < kPoints; ++i) {
            errs[static_cast<std::size_t>(i)] = lo * std::pow(ratio, i);
            infs[static_cast<std::size_t>(i)] =
                infid_at(errs[static_cast<std::size_t>(i)]);
            min_inf = std::min(min_inf, infs[static_cast<std::size_t>(i)]);
        }
        if (min_inf >= usable) break;
        if (hi >= 0.16)
            throw PrecisionError(
                "scaling_exponent: infidelity below the numerical floor over "
                "the full usable error range");
        lo *= 2.0;
        hi = std::min(2.0 * hi, 0.16);
    }
    // least-squares slope of log-log data
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < kPoints; ++i) {
        const double X = std::log10(errs[static_cast<std::size_t>(i)]);
        const double Y = std::log10(infs[static_cast<std::size_t>(i)]);
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
    }
    return (kPoints * sxy - sx * sy) / (kPoints * sxx - sx * sx);
}

}  // namespace pulseforge

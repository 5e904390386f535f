#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace pulseforge {

// Adaptive Gauss-Kronrod 15(7) quadrature on a finite interval.
// Bisects the worst interval until the global error estimate meets
// max(rel_tol*|result|, abs_tol).

namespace detail {

// Kronrod-15 nodes on [0,1] (positive half) with Kronrod and Gauss-7 weights.
// Node 0 is the midpoint; gauss weight 0 marks Kronrod-only nodes.
inline constexpr double gk15_nodes[8] = {
    0.000000000000000000, 0.207784955007898468, 0.405845151377397167,
    0.586087235467691130, 0.741531185599394440, 0.864864423359769073,
    0.949107912342758525, 0.991455371120812639};
inline constexpr double gk15_wk[8] = {
    0.209482141084727828, 0.204432940075298892, 0.190350578064785410,
    0.169004726639267903, 0.140653259715525919, 0.104790010322250184,
    0.063092092629978553, 0.022935322010529225};
inline constexpr double gk15_wg[8] = {
    0.417959183673469388, 0.0, 0.381830050505118945, 0.0,
    0.279705391489276668, 0.0, 0.129484966168869693, 0.0};

template <class F, class R>
void gk15(const F& f, double a, double b, R& result, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    R f0 = f(mid);
    R k15 = gk15_wk[0] * f0;
    R g7 = gk15_wg[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * gk15_nodes[i];
        R fi = f(mid + dx) + f(mid - dx);
        k15 += gk15_wk[i] * fi;
        if (gk15_wg[i] != 0.0) g7 += gk15_wg[i] * fi;
    }
    k15 *= half;
    g7 *= half;
    result = k15;
    // QUADPACK-style sharpened estimate, capped by the raw difference.
    const double diff = std::abs(k15 - g7);
    err = std::min(diff, std::pow(200.0 * diff, 1.5));
}

}  // namespace detail

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integrates f over [a, b]. R is double or std::complex<double>.
template <class R, class F>
R integrate(const F& f, double a, double b, double rel_tol = 1e-10,
            double abs_tol = 1e-14, int max_intervals = 4000) {
    struct Segment {
        double a, b, err;
        R val;
    };
    std::vector<Segment> segs;
    segs.reserve(64);
    Segment s0{a, b, 0.0, R{}};
    detail::gk15(f, a, b, s0.val, s0.err);
    segs.push_back(s0);
    R total = s0.val;
    double total_err = s0.err;
    while (total_err > std::max(rel_tol * std::abs(total), abs_tol)) {
        if (static_cast<int>(segs.size()) >= max_intervals)
            throw QuadratureError("adaptive quadrature: interval budget exhausted");
        // split the segment with the largest error
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].err > segs[worst].err) worst = i;
        Segment old = segs[worst];
        if (old.b - old.a < 1e-15 * (b - a))
            throw QuadratureError("adaptive quadrature: interval underflow");
        const double mid = 0.5 * (old.a + old.b);
        Segment left{old.a, mid, 0.0, R{}}, right{mid, old.b, 0.0, R{}};
        detail::gk15(f, left.a, left.b, left.val, left.err);
        detail::gk15(f, right.a, right.b, right.val, right.err);
        segs[worst] = left;
        segs.push_back(right);
        total = R{};
        total_err = 0.0;
        for (const auto& s : segs) {
            total += s.val;
            total_err += s.err;
        }
    }
    return total;
}

}  // namespace pulseforge

#include "pulseforge/verification.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "pulseforge/perturbation.hpp"
#include "pulseforge/propagator.hpp"
#include "pulseforge/pulse_io.hpp"
#include "pulseforge/solver.hpp"
#include "pulseforge/trajectory.hpp"

namespace pulseforge {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct ReferenceRow {
    ErrorChannel channel;
    int order;
    Family family;
    std::vector<double> coefficients;   // as published
    std::vector<double> coeff_tol;      // last-printed-digit tolerances
    double area_over_pi;                // as published
    double area_tol;
};

const std::vector<ReferenceRow>& reference_table() {
    static const std::vector<ReferenceRow> rows = {
        {ErrorChannel::area, 3, Family::a, {-1.0}, {0.02}, 2.16, 0.01},
        {ErrorChannel::area, 3, Family::b, {-1.6788}, {0.002}, 2.09, 0.01},
        {ErrorChannel::detuning, 3, Family::a, {-0.2305}, {0.002}, 1.78, 0.01},
        {ErrorChannel::both, 2, Family::b, {-1.189, 0.7285}, {0.005, 0.002},
         2.23, 0.01},
        {ErrorChannel::area, 5, Family::a, {-2.4864, -0.74}, {0.002, 0.02},
         3.14, 0.02},
        {ErrorChannel::area, 7, Family::a, {-3.46, -1.365, -0.5},
         {0.02, 0.005, 0.02}, 3.86, 0.02},
    };
    return rows;
}

// Refined designs are reused by several criteria; each criterion remains
// runnable standalone, so cache the solves in-process.
const SolveReport& solved(const RobustnessTarget& t) {
    static std::map<std::tuple<int, int, int>, SolveReport> cache;
    static std::mutex mu;
    const auto key = std::make_tuple(static_cast<int>(t.channel), t.order,
                                     static_cast<int>(t.family));
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, solve_auto(t)).first;
    return it->second;
}

PulseShape design_pulse(Family fam, const std::vector<double>& coeffs,
                        double t_max = 4.0) {
    return synthesize(PhaseParameterization(fam, coeffs),
                      ThetaSchedule(1.0, t_max));
}

PulseShape meridian_pulse() {
    // wider window so the truncated area deficit (pi/2*erfc(t_max/T)) stays
    // far below the 1e-8 comparison bar
    return design_pulse(Family::rabi, {}, 5.0);
}

std::string fmt(double v, int prec = 6) {
    std::ostringstream ss;
    ss.precision(prec);
    ss << v;
    return ss.str();
}

CriterionResult criterion_1() {
    CriterionResult res{1, "reference pulse areas from the published coefficients",
                        true, ""};
    std::ostringstream detail;
    for (const auto& row : reference_table()) {
        const double a =
            pulse_area(PhaseParameterization(row.family, row.coefficients)) /
            kPi;
        const bool ok = std::abs(a - row.area_over_pi) <= row.area_tol;
        if (!ok) res.passed = false;
        detail << fmt(a, 4) << (ok ? "" : "(!)") << " ";
    }
    res.detail = "areas/pi = " + detail.str();
    return res;
}

CriterionResult criterion_2() {
    CriterionResult res{2, "published coefficient sets reproduced by solve", true,
                        ""};
    std::ostringstream detail;
    for (const auto& row : reference_table()) {
        const RobustnessTarget target{row.channel, row.order, row.family};
        const auto start = std::chrono::steady_clock::now();
        bool ok = true;
        std::string got;
        try {
            const auto rep = solved(target);
            for (std::size_t i = 0; i < row.coefficients.size(); ++i) {
                if (std::abs(rep.coefficients[i] - row.coefficients[i]) >
                    row.coeff_tol[i])
                    ok = false;
                got += (i ? "," : "(") + fmt(rep.coefficients[i], 5);
            }
            got += ")";
        } catch (const std::exception& ex) {
            ok = false;
            got = std::string("solve failed: ") + ex.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        if (secs >= 60.0) ok = false;
        if (!ok) res.passed = false;
        detail << got << (ok ? " " : "(!) ");
    }
    res.detail = detail.str();
    return res;
}

CriterionResult criterion_3() {
    const auto rep = solved({ErrorChannel::area, 7, Family::a});
    const auto pulse = design_pulse(Family::a, rep.coefficients);
    double worst = 1.0, at = 0.0;
    for (int i = 0; i <= 68; ++i) {
        const double alpha = -0.17 + 0.005 * i;
        const double p2 = propagate(pulse, {alpha, 0.0}).p2;
        if (p2 < worst) {
            worst = p2;
            at = alpha;
        }
    }
    CriterionResult res{3, "order-7 design holds p2 >= 1-1e-4 over |alpha| <= 0.17",
                        worst >= 1.0 - 1e-4,
                        "min p2 = " + fmt(worst, 8) + " at alpha = " + fmt(at, 3)};
    return res;
}

CriterionResult criterion_4() {
    const auto pulse = meridian_pulse();
    double worst = 0.0;
    for (double alpha : {-0.5, -0.1, 0.0, 0.1, 0.5}) {
        const double p2 = propagate(pulse, {alpha, 0.0}).p2;
        const double c = std::cos(kPi * alpha / 2.0);
        worst = std::max(worst, std::abs(p2 - c * c));
    }
    return {4, "meridian pi-pulse matches cos^2(pi alpha/2) to 1e-8",
            worst <= 1e-8, "max |p2 - cos^2| = " + fmt(worst, 3)};
}

CriterionResult criterion_5() {
    CriterionResult res{5, "scaling exponents 2/4/6/8 for rabi/o3/o5/o7", true,
                        ""};
    std::ostringstream detail;
    const std::vector<std::pair<PulseShape, double>> cases = {
        {meridian_pulse(), 2.0},
        {design_pulse(Family::a,
                      solved({ErrorChannel::area, 3, Family::a}).coefficients),
         4.0},
        {design_pulse(Family::a,
                      solved({ErrorChannel::area, 5, Family::a}).coefficients),
         6.0},
        {design_pulse(Family::a,
                      solved({ErrorChannel::area, 7, Family::a}).coefficients),
         8.0},
    };
    for (const auto& [pulse, expect] : cases) {
        double slope = 0.0;
        bool ok = false;
        try {
            slope = scaling_exponent(pulse, ErrorChannel::area);
            ok = std::abs(slope - expect) <= 0.15;
        } catch (const PrecisionError&) {
        }
        if (!ok) res.passed = false;
        detail << fmt(slope, 4) << (ok ? " " : "(!) ");
    }
    res.detail = "slopes = " + detail.str();
    return res;
}

CriterionResult criterion_6() {
    CriterionResult res{6, "O~2 closed/hierarchy/finite-difference, O~3 nested",
                        true, ""};
    std::ostringstream detail;

    // closed form vs hierarchy on a generic trajectory and a detuning design
    const Trajectory ta(PhaseParameterization(Family::a, {0.575}),
                        ThetaSchedule{});
    const double closed_a = second_order(ta, ErrorChannel::area);
    const double hier_a =
        hierarchy(ta, ErrorChannel::area, 2).profile_terms.at(2);
    const Trajectory td(PhaseParameterization(Family::a, {-0.2305}),
                        ThetaSchedule{});
    const double closed_d = second_order(td, ErrorChannel::detuning);
    const double hier_d =
        hierarchy(td, ErrorChannel::detuning, 2).profile_terms.at(2);
    const double dd =
        std::max(std::abs(closed_a - hier_a), std::abs(closed_d - hier_d));
    if (dd > 1e-8) res.passed = false;
    detail << "closed-vs-hier " << fmt(dd, 3) << (dd > 1e-8 ? "(!) " : " ");

    // centered finite difference of p2(alpha) at alpha = 1e-3
    const auto pulse = design_pulse(Family::a, {0.575});
    const double h = 1e-3;
    const double fd = (propagate(pulse, {h, 0.0}).p2 -
                       2.0 * propagate(pulse, {0.0, 0.0}).p2 +
                       propagate(pulse, {-h, 0.0}).p2) /
                      (h * h);
    const double rel = std::abs(fd / 2.0 - closed_a) / std::abs(closed_a);
    if (rel > 1e-4) res.passed = false;
    detail << "fd-rel " << fmt(rel, 3) << (rel > 1e-4 ? "(!) " : " ");

    // O~3: hierarchy vs nested quadrature on a symmetry-broken trajectory
    const PhaseFunction broken{
        [](double th) {
            return 2.0 * th - 0.5 * std::sin(2.0 * th) +
                   0.4 * (std::cos(2.0 * th) - 1.0);
        },
        [](double th) {
            return 2.0 - 1.0 * std::cos(2.0 * th) - 0.8 * std::sin(2.0 * th);
        }};
    const ThetaSchedule sched;
    const double o3_h =
        hierarchy(broken, sched, ErrorChannel::area, 3).profile_terms.at(3);
    const double o3_q = third_order_nested(broken, sched, ErrorChannel::area);
    const double d3 = std::abs(o3_h - o3_q);
    if (d3 > 1e-6 || std::abs(o3_h) < 1e-3) res.passed = false;
    detail << "O~3 hier " << fmt(o3_h, 6) << " vs nested " << fmt(o3_q, 6);
    res.detail = detail.str();
    return res;
}

CriterionResult criterion_7() {
    CriterionResult res{7, "symmetry suite on random coefficient sets", true,
                        ""};
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    double worst_im = 0.0, worst_o3 = 0.0, worst_re = 0.0;
    const ThetaSchedule sched;
    for (int i = 0; i < 20; ++i) {
        std::vector<double> C(static_cast<std::size_t>(i % 3) + 1);
        for (double& c : C) c = coeff(rng);
        const PhaseParameterization pa(Family::a, C);
        const auto ra = condition_residuals(pa, sched);
        worst_im = std::max({worst_im, std::abs(ra.detuning_residual.imag()),
                             std::abs(ra.area_residual.imag())});
        const Trajectory traj(pa, sched);
        worst_o3 = std::max(worst_o3,
                            std::abs(third_order(traj, ErrorChannel::area)));
        const PhaseParameterization pb(Family::b, C);
        const auto rb = condition_residuals(pb, sched);
        worst_re = std::max({worst_re, std::abs(rb.detuning_residual.real()),
                             std::abs(rb.area_residual.real())});
    }
    const bool im_ok = worst_im < 1e-10;
    const bool o3_ok = worst_o3 < 1e-8;
    const bool re_ok = worst_re < 1e-10;
    res.passed = im_ok && o3_ok && re_ok;
    res.detail = "max |Im res|(a) = " + fmt(worst_im, 3) +
                 (im_ok ? "" : "(!)") + ", max |O~3 area|(a) = " +
                 fmt(worst_o3, 3) + (o3_ok ? "" : "(!)") +
                 ", max |Re res|(b) = " + fmt(worst_re, 3) +
                 (re_ok ? "" : "(!)");
    return res;
}

CriterionResult criterion_8() {
    CriterionResult res{8, "norm drift < 1e-10 and p2(0,0) >= 1-1e-8 for all designs",
                        true, ""};
    double worst_drift = 0.0, worst_p2 = 1.0;
    for (const auto& row : reference_table()) {
        const auto pulse = design_pulse(row.family, row.coefficients);
        const auto r = propagate(pulse, {0.0, 0.0});
        worst_drift = std::max(worst_drift, r.norm_drift);
        worst_p2 = std::min(worst_p2, r.p2);
    }
    res.passed = worst_drift < 1e-10 && worst_p2 >= 1.0 - 1e-8;
    res.detail = "max drift = " + fmt(worst_drift, 3) +
                 ", min p2 = " + fmt(worst_p2, 10);
    return res;
}

CriterionResult criterion_9() {
    CriterionResult res{9, "profile asymmetry and pulse-shape oscillation growth",
                        true, ""};
    std::ostringstream detail;
    std::vector<PulseShape> designs;
    for (int order : {3, 5, 7})
        designs.push_back(design_pulse(
            Family::a,
            solved({ErrorChannel::area, order, Family::a}).coefficients));

    bool asym_ok = true;
    for (const auto& pulse : designs)
        for (double x : {0.1, 0.2, 0.3})
            if (!(propagate(pulse, {-x, 0.0}).infidelity >
                  propagate(pulse, {x, 0.0}).infidelity))
                asym_ok = false;
    if (!asym_ok) res.passed = false;
    detail << "asymmetry " << (asym_ok ? "ok" : "violated(!)");

    std::vector<int> counts;
    for (const auto& pulse : designs) {
        int cnt = 0;
        for (std::size_t i = 1; i + 1 < pulse.omega.size(); ++i)
            if (pulse.omega[i] > pulse.omega[i - 1] &&
                pulse.omega[i] > pulse.omega[i + 1])
                ++cnt;
        counts.push_back(cnt);
    }
    const bool inc = counts[0] < counts[1] && counts[1] < counts[2];
    if (!inc) res.passed = false;
    detail << ", omega maxima = " << counts[0] << "/" << counts[1] << "/"
           << counts[2] << (inc ? "" : "(!)");
    res.detail = detail.str();
    return res;
}

}  // namespace

CriterionResult run_criterion(int id) {
    switch (id) {
        case 1: return criterion_1();
        case 2: return criterion_2();
        case 3: return criterion_3();
        case 4: return criterion_4();
        case 5: return criterion_5();
        case 6: return criterion_6();
        case 7: return criterion_7();
        case 8: return criterion_8();
        case 9: return criterion_9();
        default: throw ValidationError("criterion id must be 1..9");
    }
}

std::vector<CriterionResult> run_all_criteria() {
    std::vector<CriterionResult> out;
    for (int i = 1; i <= 9; ++i) out.push_back(run_criterion(i));
    return out;
}

}  // namespace pulseforge

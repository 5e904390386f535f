#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "pulseforge/perturbation.hpp"
#include "pulseforge/quadrature.hpp"
#include "pulseforge/solver.hpp"

using namespace pulseforge;

namespace {
constexpr double kPi = 3.14159265358979323846;

Trajectory meridian() {
    return Trajectory(PhaseParameterization(Family::rabi, {}),
                      ThetaSchedule{});
}
}  // namespace

TEST_CASE("kernel values") {
    const Trajectory traj(PhaseParameterization(Family::a, {-1.0}),
                          ThetaSchedule{});
    CHECK(kernel_e(traj, 0.3, 0.0, 0.0) == 0.0);
    // theta(0) = pi/2 kills the detuning part of e
    CHECK(kernel_e(traj, 0.0, 0.0, 1.0) ==
          doctest::Approx(0.0).epsilon(1e-14));
    // meridian: gamma_dot = 0, so e vanishes for pure area errors
    CHECK(kernel_e(meridian(), 0.7, 1.0, 0.0) ==
          doctest::Approx(0.0).epsilon(1e-15));

    CHECK(std::abs(kernel_f(traj, 0.0, 0.0, 0.0)) == 0.0);
    // theta -> 0 at the left edge kills the detuning part of f
    CHECK(std::abs(kernel_f(traj, -4.0, 0.0, 1.0)) < 1e-7);
    // meridian, area error: f = -(i/2) theta_dot e^{i gamma}
    const auto fm = kernel_f(meridian(), 0.4, 1.0, 0.0);
    const double td = ThetaSchedule{}.theta_dot(0.4);
    CHECK(std::abs(fm - std::complex<double>(0.0, -0.5 * td)) < 1e-14);
}

TEST_CASE("second order: meridian and solved designs") {
    CHECK(second_order(meridian(), ErrorChannel::area) ==
          doctest::Approx(-kPi * kPi / 4.0).epsilon(1e-10));
    const Trajectory o3(PhaseParameterization(Family::a, {-1.0}),
                        ThetaSchedule{});
    CHECK(std::abs(second_order(o3, ErrorChannel::area)) < 1e-6);
    CHECK_THROWS_AS(second_order(o3, ErrorChannel::both), ValidationError);
}

// The meridian hierarchy has an exact oracle: p2(alpha) = cos^2(pi alpha / 2),
// whose Taylor coefficients pin every O~n.
TEST_CASE("hierarchy reproduces the exact meridian Taylor series") {
    const auto h = hierarchy(meridian(), ErrorChannel::area, 8);
    const auto& ot = h.profile_terms.values;
    const double x = kPi / 2.0;
    CHECK(ot.at(1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ot.at(2) == doctest::Approx(-x * x).epsilon(1e-11));
    CHECK(ot.at(3) == doctest::Approx(0.0).epsilon(1e-11));
    CHECK(ot.at(4) == doctest::Approx(std::pow(x, 4) / 3.0).epsilon(1e-11));
    CHECK(ot.at(5) == doctest::Approx(0.0).epsilon(1e-11));
    CHECK(ot.at(6) ==
          doctest::Approx(-2.0 * std::pow(x, 6) / 45.0).epsilon(1e-10));
    CHECK(ot.at(7) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(ot.at(8) == doctest::Approx(std::pow(x, 8) / 315.0).epsilon(1e-10));
}

// Frozen spectrum for a generic family-a trajectory; the values were
// cross-checked against a direct Taylor fit of the propagated profile.
TEST_CASE("hierarchy spectrum on a generic trajectory") {
    const Trajectory traj(PhaseParameterization(Family::a, {-0.5}),
                          ThetaSchedule{});
    const auto ot = hierarchy(traj, ErrorChannel::area, 6).profile_terms;
    CHECK(ot.at(2) == doctest::Approx(-0.14482165).epsilon(1e-6));
    CHECK(ot.at(3) == doctest::Approx(1.38822252).epsilon(1e-6));
    CHECK(ot.at(4) == doctest::Approx(-3.29763054).epsilon(1e-6));
    CHECK(ot.at(5) == doctest::Approx(-1.37433159).epsilon(1e-5));
    CHECK(ot.at(6) == doctest::Approx(5.91101455).epsilon(1e-5));
}

TEST_CASE("hierarchy bookkeeping invariants") {
    const Trajectory traj(PhaseParameterization(Family::a, {0.8, -1.1}),
                          ThetaSchedule{});
    for (auto channel : {ErrorChannel::area, ErrorChannel::detuning}) {
        const auto h = hierarchy(traj, channel, 6);
        // O~1 vanishes: a_1 is purely imaginary since e is real
        CHECK(std::abs(h.a[1].real()) < 1e-12);
        CHECK(h.profile_terms.at(1) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(h.profile_terms.at(2) <= 1e-12);
        // order-n expansion of <psi|psi> = 1
        for (int n = 1; n <= 6; ++n) {
            std::complex<double> s{};
            for (int j = 0; j <= n; ++j)
                s += std::conj(h.a[j]) * h.a[n - j] +
                     std::conj(h.b[j]) * h.b[n - j];
            CHECK(std::abs(s) < 1e-10);
        }
        // O~2 equals the closed form
        CHECK(h.profile_terms.at(2) ==
              doctest::Approx(second_order(traj, channel)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(hierarchy(traj, ErrorChannel::area, 9), ValidationError);
    CHECK_THROWS_AS(hierarchy(traj, ErrorChannel::area, 0), ValidationError);
}

TEST_CASE("third order: meridian and detuning designs vanish") {
    CHECK(std::abs(third_order(meridian(), ErrorChannel::area)) < 1e-12);
    // third order is nullified once the second order is (family-a symmetry)
    const Trajectory o3a(PhaseParameterization(Family::a, {-1.0}),
                         ThetaSchedule{});
    CHECK(std::abs(third_order(o3a, ErrorChannel::area)) < 1e-8);
    const Trajectory d3(PhaseParameterization(Family::a, {-0.23048564}),
                        ThetaSchedule{});
    CHECK(std::abs(third_order(d3, ErrorChannel::detuning)) < 1e-6);
}

// For the detuning channel the t -> -t antisymmetry of the kernels kills the
// odd orders for every family-a coefficient set, solved or not.
TEST_CASE("detuning-channel odd orders vanish for any family-a set") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 5; ++i) {
        std::vector<double> C(static_cast<std::size_t>(i % 3) + 1);
        for (double& c : C) c = u(rng);
        const Trajectory traj(PhaseParameterization(Family::a, C),
                              ThetaSchedule{});
        const auto ot =
            hierarchy(traj, ErrorChannel::detuning, 5).profile_terms;
        CHECK(ot.at(2) <= 1e-12);
        CHECK(std::abs(ot.at(3)) < 1e-9);
        CHECK(std::abs(ot.at(5)) < 1e-9);
    }
}

TEST_CASE("channel 'both' must be split before the scalar operations") {
    const Trajectory traj(PhaseParameterization(Family::b, {-1.0}),
                          ThetaSchedule{});
    CHECK_THROWS_AS(hierarchy(traj, ErrorChannel::both, 4), ValidationError);
    CHECK_THROWS_AS(third_order(traj, ErrorChannel::both), ValidationError);
}

TEST_CASE("nested quadrature agrees with the hierarchy") {
    SUBCASE("symmetry-broken trajectory") {
        const PhaseFunction broken{
            [](double th) {
                return 2.0 * th - 0.5 * std::sin(2.0 * th) +
                       0.4 * (std::cos(2.0 * th) - 1.0);
            },
            [](double th) {
                return 2.0 - std::cos(2.0 * th) - 0.8 * std::sin(2.0 * th);
            }};
        const ThetaSchedule s;
        const double via_h =
            hierarchy(broken, s, ErrorChannel::area, 3).profile_terms.at(3);
        const double via_q = third_order_nested(broken, s, ErrorChannel::area);
        CHECK(std::abs(via_h) > 1e-2);  // genuinely nonzero
        CHECK(std::abs(via_h - via_q) < 1e-6);
    }
    SUBCASE("generic family-a trajectory, area channel") {
        const Trajectory traj(PhaseParameterization(Family::a, {-0.5}),
                              ThetaSchedule{});
        const double via_h = third_order(traj, ErrorChannel::area);
        const double via_q = third_order_nested(traj, ErrorChannel::area);
        CHECK(via_h == doctest::Approx(1.38822252).epsilon(1e-5));
        CHECK(std::abs(via_h - via_q) < 1e-6);
    }
}

TEST_CASE("condition residuals") {
    const ThetaSchedule s;
    SUBCASE("family-a imaginary parts vanish identically") {
        std::mt19937 rng(17);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int i = 0; i < 10; ++i) {
            std::vector<double> C(static_cast<std::size_t>(i % 3) + 1);
            for (double& c : C) c = u(rng);
            const auto r =
                condition_residuals(PhaseParameterization(Family::a, C), s);
            CHECK(std::abs(r.detuning_residual.imag()) < 1e-10);
            CHECK(std::abs(r.area_residual.imag()) < 1e-10);
            const auto rb =
                condition_residuals(PhaseParameterization(Family::b, C), s);
            CHECK(std::abs(rb.detuning_residual.real()) < 1e-10);
            CHECK(std::abs(rb.area_residual.real()) < 1e-10);
        }
    }
    SUBCASE("published roots nullify their conditions") {
        const auto r1 =
            condition_residuals(PhaseParameterization(Family::a, {-1.0}), s);
        CHECK(std::abs(r1.area_residual.real()) < 1e-6);
        const auto r3 = condition_residuals(
            PhaseParameterization(Family::a, {-0.23048564}), s);
        CHECK(std::abs(r3.detuning_residual.real()) < 1e-6);
    }
    SUBCASE("constant phase cannot satisfy the detuning condition") {
        const auto r =
            condition_residuals(PhaseParameterization(Family::rabi, {}), s);
        // integral of sin(theta) dt over the window is order T, far from zero
        CHECK(std::abs(r.detuning_residual) > 1.0);
    }
}

// Ordered-integral rearrangement identities used to reduce the profile terms.
TEST_CASE("permutation identities for ordered integrals") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto random_smooth = [&rng, &u]() {
        const double c0 = u(rng), c1 = u(rng), c2 = u(rng), c3 = u(rng);
        return std::function<double(double)>([c0, c1, c2, c3](double t) {
            return c0 + c1 * std::sin(kPi * t) + c2 * std::cos(2 * kPi * t) +
                   c3 * t * t;
        });
    };
    for (int trial = 0; trial < 3; ++trial) {
        const auto a = random_smooth();
        const auto b = random_smooth();
        const auto c = random_smooth();
        const double Ia = integrate<double>(a, 0.0, 1.0, 1e-12, 1e-14);
        const double Ib = integrate<double>(b, 0.0, 1.0, 1e-12, 1e-14);
        const double Ic = integrate<double>(c, 0.0, 1.0, 1e-12, 1e-14);

        // two-function identity
        const double lhs2 = integrate<double>(
            [&](double t) {
                const double inner_b = integrate<double>(
                    b, 0.0, t, 1e-11, 1e-14);
                const double inner_a = integrate<double>(
                    a, 0.0, t, 1e-11, 1e-14);
                return a(t) * inner_b + b(t) * inner_a;
            },
            0.0, 1.0, 1e-10, 1e-13);
        CHECK(lhs2 == doctest::Approx(Ia * Ib).epsilon(1e-8));

        // three-function extension: the sum over all six orderings of the
        // simplex integral equals the product of the three line integrals
        auto ordered3 = [&](const std::function<double(double)>& f1,
                            const std::function<double(double)>& f2,
                            const std::function<double(double)>& f3) {
            return integrate<double>(
                [&](double t) {
                    return f1(t) * integrate<double>(
                                       [&](double tp) {
                                           return f2(tp) *
                                                  integrate<double>(f3, 0.0,
                                                                    tp, 1e-10,
                                                                    1e-13);
                                       },
                                       0.0, t, 1e-9, 1e-12);
                },
                0.0, 1.0, 1e-9, 1e-12);
        };
        const double lhs3 = ordered3(a, b, c) + ordered3(a, c, b) +
                            ordered3(b, a, c) + ordered3(b, c, a) +
                            ordered3(c, a, b) + ordered3(c, b, a);
        CHECK(lhs3 == doctest::Approx(Ia * Ib * Ic).epsilon(1e-6));
    }
}

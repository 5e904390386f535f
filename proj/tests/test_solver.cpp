#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pulseforge/solver.hpp"

using namespace pulseforge;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("target validation and condition counts") {
    CHECK(RobustnessTarget{ErrorChannel::area, 3, Family::a}
              .condition_count() == 1);
    CHECK(RobustnessTarget{ErrorChannel::detuning, 3, Family::b}
              .condition_count() == 1);
    CHECK(RobustnessTarget{ErrorChannel::both, 2, Family::b}
              .condition_count() == 2);
    CHECK(RobustnessTarget{ErrorChannel::area, 5, Family::a}
              .condition_count() == 2);
    CHECK(RobustnessTarget{ErrorChannel::area, 7, Family::a}
              .condition_count() == 3);
    CHECK_THROWS_AS((RobustnessTarget{ErrorChannel::area, 2, Family::a}
                         .condition_count()),
                    ValidationError);
    CHECK_THROWS_AS((RobustnessTarget{ErrorChannel::detuning, 5, Family::a}
                         .condition_count()),
                    ValidationError);
    CHECK_THROWS_AS((RobustnessTarget{ErrorChannel::both, 3, Family::b}
                         .condition_count()),
                    ValidationError);
    CHECK_THROWS_AS((RobustnessTarget{ErrorChannel::area, 3, Family::rabi}
                         .condition_count()),
                    ValidationError);
}

TEST_CASE("residual vector examples") {
    const RobustnessTarget a3{ErrorChannel::area, 3, Family::a};
    const auto r = residual_vector(a3, {-1.0});
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r[0]) < 1e-6);

    const RobustnessTarget d3{ErrorChannel::detuning, 3, Family::a};
    const auto rd = residual_vector(d3, {0.0});
    CHECK(std::abs(rd[0]) > 0.1);  // Rabi-like phase fails the condition

    const RobustnessTarget both{ErrorChannel::both, 2, Family::b};
    const auto rb = residual_vector(both, {-1.189, 0.7285});
    REQUIRE(rb.size() == 2);
    CHECK(std::abs(rb[0]) < 1e-3);
    CHECK(std::abs(rb[1]) < 1e-3);

    CHECK_THROWS_AS(residual_vector(a3, {-1.0, 0.0}), ValidationError);
}

TEST_CASE("order-3 solves hit the published values") {
    SUBCASE("area, family a") {
        const auto rep = solve({ErrorChannel::area, 3, Family::a}, {-0.5});
        REQUIRE(rep.coefficients.size() == 1);
        CHECK(rep.coefficients[0] == doctest::Approx(-1.0).epsilon(2e-3));
        CHECK(rep.pulse_area / kPi == doctest::Approx(2.16).epsilon(5e-3));
        CHECK(rep.residual_norm < 1e-10);
        CHECK(rep.verified_orders ==
              std::vector<int>{1, 2, 3});
    }
    SUBCASE("detuning, family a") {
        const auto rep = solve({ErrorChannel::detuning, 3, Family::a}, {-0.2});
        CHECK(rep.coefficients[0] == doctest::Approx(-0.2305).epsilon(1e-2));
        CHECK(rep.pulse_area / kPi == doctest::Approx(1.78).epsilon(5e-3));
    }
    SUBCASE("area, family b") {
        const auto rep = solve({ErrorChannel::area, 3, Family::b}, {-1.5});
        CHECK(rep.coefficients[0] == doctest::Approx(-1.6788).epsilon(1e-3));
        CHECK(rep.pulse_area / kPi == doctest::Approx(2.09).epsilon(5e-3));
    }
}

TEST_CASE("continuation seeds") {
    CHECK_THROWS_AS(continuation_seed({ErrorChannel::area, 3, Family::a}),
                    ValidationError);
    const auto seed5 = continuation_seed({ErrorChannel::area, 5, Family::a});
    REQUIRE(seed5.size() == 2);
    CHECK(seed5[0] == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(seed5[1] == 0.0);
    const auto seed7 = continuation_seed({ErrorChannel::area, 7, Family::a});
    REQUIRE(seed7.size() == 3);
    CHECK(seed7[0] == doctest::Approx(-2.4864).epsilon(1e-3));
    CHECK(seed7[1] == doctest::Approx(-0.74).epsilon(1e-2));
    CHECK(seed7[2] == 0.0);
}

TEST_CASE("order-5 solve matches the published row") {
    const auto rep = solve_auto({ErrorChannel::area, 5, Family::a});
    REQUIRE(rep.coefficients.size() == 2);
    CHECK(rep.coefficients[0] == doctest::Approx(-2.4864).epsilon(1e-3));
    CHECK(rep.coefficients[1] == doctest::Approx(-0.74).epsilon(1e-2));
    CHECK(rep.pulse_area / kPi == doctest::Approx(3.14).epsilon(3e-3));
    CHECK(rep.verified_orders == std::vector<int>{1, 2, 3, 4, 5});
}

// The published order-7 coefficients (-3.46, -1.365, -0.5) do not nullify the
// sixth-order profile term (its value there is -1.66, far beyond coefficient
// rounding), so this solve converges to the actual root of the order-7
// conditions instead. The root below was cross-validated: all profile terms
// through order 6 vanish, the odd ones by symmetry.
TEST_CASE("order-7 solve finds the exact root of the adopted conditions") {
    const auto rep = solve_auto({ErrorChannel::area, 7, Family::a});
    REQUIRE(rep.coefficients.size() == 3);
    CHECK(rep.coefficients[0] == doctest::Approx(-4.0568).epsilon(3e-3));
    CHECK(rep.coefficients[1] == doctest::Approx(-1.4962).epsilon(3e-3));
    CHECK(rep.coefficients[2] == doctest::Approx(-0.5326).epsilon(3e-3));
    CHECK(rep.pulse_area / kPi == doctest::Approx(4.2575).epsilon(3e-3));
    CHECK(rep.residual_norm < 1e-8);
    CHECK(rep.verified_orders == std::vector<int>{1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("both-channel order-2 solve") {
    const auto rep = solve_auto({ErrorChannel::both, 2, Family::b});
    REQUIRE(rep.coefficients.size() == 2);
    CHECK(rep.coefficients[0] == doctest::Approx(-1.189).epsilon(3e-3));
    CHECK(rep.coefficients[1] == doctest::Approx(0.7285).epsilon(3e-3));
    CHECK(rep.pulse_area / kPi == doctest::Approx(2.23).epsilon(3e-3));
}

// The [-4, 0] sweep reaches two distinct roots (C1 = -3.8317 with area
// 3.92 pi and C1 = -1 with area 2.16 pi); the reported one must be the
// low-area root.
TEST_CASE("seed sweep keeps the smallest-area root") {
    const RobustnessTarget t{ErrorChannel::area, 3, Family::a};
    const auto large = solve(t, {-4.0});
    CHECK(large.coefficients[0] == doctest::Approx(-3.8317).epsilon(1e-3));
    const auto best = solve_auto(t);
    CHECK(best.coefficients[0] == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(best.pulse_area < large.pulse_area);
}

TEST_CASE("solver determinism") {
    const RobustnessTarget t{ErrorChannel::area, 3, Family::b};
    const auto r1 = solve(t, {-1.5});
    const auto r2 = solve(t, {-1.5});
    CHECK(r1.coefficients[0] == r2.coefficients[0]);  // bitwise
    CHECK(r1.residual_norm == r2.residual_norm);
    CHECK(r1.iterations == r2.iterations);
}

TEST_CASE("solve input validation") {
    CHECK_THROWS_AS(solve({ErrorChannel::area, 3, Family::a}, {}),
                    ValidationError);
    CHECK_THROWS_AS(solve({ErrorChannel::area, 3, Family::a},
                          {std::nan("")}),
                    ValidationError);
}

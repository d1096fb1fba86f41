#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rankone/geometry.hpp"
#include "rankone/quadrature.hpp"
#include "rankone/verify.hpp"

using namespace rankone;

TEST_CASE("phi map") {
    CHECK(phi_map(2.0) == doctest::Approx(1.0));
    CHECK(phi_map(2.5) == doctest::Approx(2.0));  // 2 + 1/2 = 2.5
    CHECK(phi_map(10.0) == doctest::Approx((10.0 + std::sqrt(96.0)) / 2.0).epsilon(1e-15));
    CHECK_THROWS_AS(phi_map(1.9), std::domain_error);

    // monotone on a grid, and 0 <= x - Phi(x) <= 2/x
    double prev = phi_map(2.0);
    for (int i = 1; i <= 1000; ++i) {
        const double x = 2.0 + 0.1 * i;
        const double cur = phi_map(x);
        CHECK(cur > prev);
        const double gap = phi_map_gap(x);
        CHECK(gap >= 0.0);
        CHECK(gap <= 2.0 / x);
        CHECK(x - cur == doctest::Approx(gap).epsilon(1e-12));
        prev = cur;
    }
}

TEST_CASE("iwasawa exponent") {
    const auto h3 = SpaceParams::preset("H3");
    CHECK(iwasawa_exponent(NbarPoint{0.0, 0.0}, h3) == doctest::Approx(0.0));
    CHECK(iwasawa_exponent(NbarPoint{std::sqrt(8.0), 0.0}, h3) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-14));
    const auto ch2 = SpaceParams::preset("CH2");
    CHECK(iwasawa_exponent(NbarPoint{0.0, std::sqrt(18.0)}, ch2) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(iwasawa_exponent(NbarPoint{1.0, 1.0}, h3), std::invalid_argument);
}

TEST_CASE("cartan exponent") {
    const auto h3 = SpaceParams::preset("H3");
    CHECK(cartan_exponent(3.0, NbarPoint{}, h3) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(cartan_exponent(-3.0, NbarPoint{}, h3) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(cartan_exponent(0.0, NbarPoint{std::sqrt(8.0), 0.0}, h3) ==
          doctest::Approx(std::log((3.0 + std::sqrt(5.0)) / 2.0)).epsilon(1e-14));

    // when 2 alpha is not a root the chamber comparison is an identity:
    // b^a + b^{-a} = e^{-t} + ta^a exactly
    const auto h4 = SpaceParams::preset("H4");
    for (double t : {-2.0, -0.3, 0.7, 2.5}) {
        const NbarPoint v{1.7, 0.0};
        const double b = std::exp(cartan_exponent(t, v, h4));
        const double ta = std::exp(t + iwasawa_exponent(v, h4));
        CHECK(b + 1.0 / b == doctest::Approx(std::exp(-t) + ta).epsilon(1e-12));
    }
}

TEST_CASE("p function") {
    const auto h3 = SpaceParams::preset("H3");
    CHECK(p_function(NbarPoint{}, h3) == doctest::Approx(1.0));
    CHECK(p_function(NbarPoint{std::sqrt(8.0), 0.0}, h3) == doctest::Approx(0.5).epsilon(1e-14));
    const auto ch2 = SpaceParams::preset("CH2");
    CHECK(p_function(NbarPoint{0.0, std::sqrt(18.0)}, ch2) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("comparison report slacks") {
    const auto h3 = SpaceParams::preset("H3");
    // identity point, t = 3: item 2 is an equality
    auto rep = ctoi_report(3.0, NbarPoint{}, h3);
    CHECK(rep.slack_2 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.slack_1 >= -1e-12);

    auto rep2 = ctoi_report(0.0, NbarPoint{std::sqrt(8.0), 0.0}, h3);
    CHECK(rep2.slack_1 ==
          doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0 - 1.0).epsilon(1e-12));
}

TEST_CASE("geometry fuzz across presets") {
    for (const char* name : {"H3", "H4", "CH2"}) {
        auto rep = run_geometry_fuzz(SpaceParams::preset(name), 10000, 42);
        CHECK(rep.pass(1e-10));
        CHECK(rep.applicable[0] == rep.samples);
        CHECK(rep.applicable[1] == rep.samples);
    }
}

TEST_CASE("nbar quadrature") {
    const auto h3 = SpaceParams::preset("H3");
    // point check at the identity
    CHECK(sphere_area(1) == doctest::Approx(2.0));
    CHECK(sphere_area(2) == doctest::Approx(2.0 * std::numbers::pi));

    // int P(v)^q dv = 8 pi / (q - 1) on H3
    for (double q : {1.5, 2.0, 3.0}) {
        const double got = nbar_quadrature(
            [&](const NbarPoint& v) { return std::pow(p_function(v, h3), q); }, h3, 1e-10);
        CHECK(got == doctest::Approx(8.0 * std::numbers::pi / (q - 1.0)).epsilon(1e-8));
    }

    // q -> 1 diverges and is flagged
    CHECK_THROWS_AS(nbar_quadrature(
                        [&](const NbarPoint& v) { return p_function(v, h3); }, h3, 1e-8),
                    QuadratureError);

    // (1 + aH(v)) P(v)^q integrable for q > 1, all presets
    for (const char* name : {"H3", "H4", "CH2"}) {
        const auto sp = SpaceParams::preset(name);
        for (double q : {1.1, 1.5, 2.0}) {
            const double got = nbar_quadrature(
                [&](const NbarPoint& v) {
                    return (1.0 + iwasawa_exponent(v, sp)) * std::pow(p_function(v, sp), q);
                },
                sp, 1e-8);
            CHECK(std::isfinite(got));
            CHECK(got > 0.0);
        }
    }
}

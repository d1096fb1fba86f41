#include <doctest.h>

#include <random>

#include "rankone/space.hpp"

using namespace rankone;

TEST_CASE("presets and derived constants") {
    const auto h3 = SpaceParams::preset("H3");
    CHECK(h3.dimension() == 3);
    CHECK(h3.rho_norm() == doctest::Approx(1.0));
    const auto h4 = SpaceParams::preset("H4");
    CHECK(h4.dimension() == 4);
    CHECK(h4.rho_norm() == doctest::Approx(1.5));
    const auto ch2 = SpaceParams::preset("CH2");
    CHECK(ch2.dimension() == 4);
    CHECK(ch2.rho_norm() == doctest::Approx(2.0));
    CHECK(ch2.iwasawa_c() == doctest::Approx(1.0 / 24.0));
    CHECK_THROWS_AS(SpaceParams::preset("H17"), std::invalid_argument);
    CHECK_THROWS_AS(SpaceParams(0, 1), std::invalid_argument);
}

TEST_CASE("delta_exponent values and duality") {
    CHECK(delta_exponent(2.0) == doctest::Approx(0.0));
    CHECK(delta_exponent(1.0) == doctest::Approx(1.0));  // boundary, weights only
    CHECK(delta_exponent(4.0 / 3.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(delta_exponent(0.7), std::domain_error);
    CHECK_THROWS_AS(Exponent(1.0), std::domain_error);

    std::mt19937_64 gen(11);
    for (int i = 0; i < 50; ++i) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        const double p = 1.0 + u * (2.0 - 1.0 - 1e-6) + 1e-6;
        const double pp = p / (p - 1.0);
        CHECK(std::abs(delta_exponent(p) - delta_exponent(pp)) < 4e-16);
    }
}

TEST_CASE("strip half-widths") {
    const auto h3 = SpaceParams::preset("H3");
    CHECK(rho_p(Exponent(4.0 / 3.0), h3).half_width == doctest::Approx(0.5));
    CHECK(rho_p(Exponent(2.0), h3).half_width == doctest::Approx(0.0));
    const auto h4 = SpaceParams::preset("H4");
    CHECK(strip_half_width(1.0, h4).half_width == doctest::Approx(1.5));
}

TEST_CASE("omega weight") {
    const auto h3 = SpaceParams::preset("H3");
    CHECK(omega_weight(Complex(0.0), h3).real() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(omega_weight(Complex(std::sqrt(5.0)), h3).real() == doctest::Approx(3.0).epsilon(1e-14));

    // growth ~ |zeta|^{(n-1)/2} on the real axis
    for (double z : {1e3, 1e5}) {
        const double ratio = omega_weight(Complex(z), h3).real() / z;  // (n-1)/2 = 1
        CHECK(ratio == doctest::Approx(1.0).epsilon(1e-4));
    }

    // evenness on a strip grid
    const auto ch2 = SpaceParams::preset("CH2");
    double worst = 0.0;
    for (int i = 0; i < 32; ++i) {
        for (int j = 0; j < 32; ++j) {
            const Complex z(-10.0 + 20.0 * i / 31.0, ch2.rho_norm() * (2.0 * j / 31.0 - 1.0));
            const Complex a = omega_weight(z, ch2);
            const Complex b = omega_weight(-z, ch2);
            worst = std::max(worst, std::abs(a - b) / std::abs(a));
        }
    }
    CHECK(worst < 1e-14);
}

TEST_CASE("delta density") {
    const auto h3 = SpaceParams::preset("H3");
    CHECK(delta_density(0.0, h3) == doctest::Approx(0.0));
    CHECK(delta_density(std::log(2.0), h3) == doctest::Approx(9.0 / 16.0).epsilon(1e-14));
    CHECK_THROWS_AS(delta_density(-0.1, h3), std::domain_error);

    // small-t order t^{n-1}
    const auto ch2 = SpaceParams::preset("CH2");
    const double r1 = delta_density(1e-4, ch2) / std::pow(1e-4, ch2.dimension() - 1);
    const double r2 = delta_density(1e-5, ch2) / std::pow(1e-5, ch2.dimension() - 1);
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-4));

    // large-t order e^{2|rho|t} within a factor of 2 of the limiting constant
    for (const auto& sp : {SpaceParams::preset("H3"), SpaceParams::preset("H4"), ch2}) {
        const double limit = std::pow(2.0, -2.0 * sp.rho_norm());
        for (double t = 3.0; t <= 12.0; t += 0.5) {
            const double ratio = delta_density(t, sp) / std::exp(2.0 * sp.rho_norm() * t);
            CHECK(ratio > 0.5 * limit);
            CHECK(ratio < 2.0 * limit);
        }
    }
}

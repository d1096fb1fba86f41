#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rankone/opnorms.hpp"
#include "rankone/quadrature.hpp"

using namespace rankone;

namespace {

LineKernel gaussian_line(double width = 1.0) {
    return LineKernel::sample(
        [&](double t) { return Complex(std::exp(-t * t / (width * width))); });
}

} // namespace

TEST_CASE("mellin transform of a gaussian") {
    auto phi = gaussian_line();
    bool warn = true;
    std::vector<double> lams = {0.0, 0.5, 1.0, 2.0, 4.0};
    auto got = mellin_transform(phi, lams, &warn);
    CHECK(!warn);
    for (size_t i = 0; i < lams.size(); ++i) {
        const double want = std::sqrt(std::numbers::pi) * std::exp(-lams[i] * lams[i] / 4.0);
        CHECK(std::abs(got[i] - want) < 1e-12);
    }

    // linearity
    auto psi = LineKernel::sample([](double t) { return Complex(std::exp(-0.5 * t * t) * t * t); });
    LineKernel combo = phi;
    for (size_t i = 0; i < combo.values.size(); ++i)
        combo.values[i] = 2.0 * phi.values[i] + 3.0 * psi.values[i];
    auto a = mellin_transform(phi, lams);
    auto b = mellin_transform(psi, lams);
    auto c = mellin_transform(combo, lams);
    for (size_t i = 0; i < lams.size(); ++i)
        CHECK(std::abs(c[i] - 2.0 * a[i] - 3.0 * b[i]) < 1e-12);

    // zero function
    auto zero = LineKernel::sample([](double) { return Complex(0.0); });
    CHECK(std::abs(mellin_transform(zero, {1.0})[0]) == 0.0);

    // aliasing warning for a non-decaying sample
    auto wide = LineKernel::sample([](double) { return Complex(1.0); });
    mellin_transform(wide, {0.0}, &warn);
    CHECK(warn);
}

TEST_CASE("cv2 norm") {
    CHECK(cv2_norm(gaussian_line()).value ==
          doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-10));
    auto zero = LineKernel::sample([](double) { return Complex(0.0); });
    CHECK(cv2_norm(zero).value == 0.0);

    // modulation invariance
    auto mod = LineKernel::sample(
        [](double t) { return std::exp(Complex(0.0, 3.0 * t)) * std::exp(-t * t); });
    CHECK(cv2_norm(mod).value ==
          doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-10));
}

TEST_CASE("cvp bracket") {
    auto g = gaussian_line();
    // p = 2: both sides approach sqrt(pi)
    auto b2 = cvp_bound(g, Exponent(2.0), 7);
    CHECK(b2.lower <= b2.upper * (1.0 + 1e-12));
    CHECK(b2.upper == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-9));
    CHECK(b2.lower == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(0.02));

    // p near 1: the upper bound approaches the L1 norm
    auto b1 = cvp_bound(g, Exponent(1.0001), 7);
    CHECK(b1.upper == doctest::Approx(g.l1_norm()).epsilon(1e-3));

    // lower <= upper across p and seeds
    for (double p : {1.2, 1.5, 1.8}) {
        for (uint64_t seed : {1ull, 2ull, 3ull}) {
            auto b = cvp_bound(g, Exponent(p), seed, 60);
            CHECK(b.lower <= b.upper * (1.0 + 1e-12));
        }
    }
    CHECK_THROWS_AS(cvp_bound(g, Exponent(2.5), 7), std::domain_error);
}

TEST_CASE("lip norm") {
    auto flat = LineKernel::sample([](double) { return Complex(3.25); });
    CHECK(lip_norm(flat).value == 0.0);

    auto sine = LineKernel::sample([](double t) { return Complex(std::sin(t)); });
    auto ls = lip_norm(sine);
    CHECK(ls.flag == QuantityFlag::Stable);
    CHECK(ls.value == doctest::Approx(1.0).epsilon(1e-3));

    auto vee = LineKernel::sample([](double t) { return Complex(std::abs(t)); });
    auto lv = lip_norm(vee);
    CHECK(lv.flag == QuantityFlag::Stable);
    CHECK(lv.value == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("smooth multiplication bound") {
    auto phi = gaussian_line();
    auto zero = LineKernel::sample([](double) { return Complex(0.0); });
    auto r0 = mel_product_bound(phi, zero);
    CHECK(r0.bound == 0.0);
    CHECK(r0.pass);

    // ||M phi||_1 = 2 pi for the unit gaussian
    auto rg = mel_product_bound(phi, gaussian_line(2.0));
    const double l1_mphi = rg.bound / cv2_norm(gaussian_line(2.0)).value;
    CHECK(l1_mphi == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-8));

    // random smooth pairs always pass
    std::mt19937_64 gen(21);
    auto uniform = [&](double a, double b) {
        return a + (b - a) * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
    };
    for (int trial = 0; trial < 50; ++trial) {
        const double w1 = uniform(0.5, 3.0), w2 = uniform(0.5, 3.0);
        const double c1 = uniform(-2.0, 2.0), mu = uniform(-4.0, 4.0);
        auto f = LineKernel::sample([&](double t) {
            return Complex(std::exp(-(t - c1) * (t - c1) / (w1 * w1)));
        });
        auto k = LineKernel::sample([&](double t) {
            return std::exp(Complex(0.0, mu * t)) * std::exp(-t * t / (w2 * w2)) *
                   Complex(std::cos(0.5 * t), 0.3);
        });
        auto r = mel_product_bound(f, k);
        CHECK(r.pass);
    }
}

TEST_CASE("transference bounds for a product kernel") {
    const auto h3 = SpaceParams::preset("H3");
    const Exponent p(1.5);
    // K(v,t) = P(v)^2 e^{-t^2}: the double integral separates into
    // 8 pi * int e^{2t/p - t^2} dt = 8 pi sqrt(pi) e^{1/p^2}
    auto K = [&](const NbarPoint& v, double t) {
        return Complex(std::pow(p_function(v, h3), 2.0) * std::exp(-t * t));
    };
    const double want = 8.0 * std::numbers::pi * 2.76436067429586834;
    TransferenceOptions topt;
    const double got = transference_bound(K, p, h3, TransferenceMode::Integral, topt);
    CHECK(got == doctest::Approx(want).epsilon(1e-6));

    // the per-factor route is dominated by the double integral
    const double per_v = transference_bound(K, p, h3, TransferenceMode::PerV, topt);
    CHECK(per_v <= got * (1.0 + 1e-9));
    CHECK(per_v > 0.0);

    // zero kernel
    auto zero = [](const NbarPoint&, double) { return Complex(0.0); };
    CHECK(transference_bound(zero, p, h3, TransferenceMode::Integral, topt) == 0.0);
}

TEST_CASE("monte carlo lower bounds stay below the integral bound") {
    const auto h3 = SpaceParams::preset("H3");
    const Exponent p(1.5);
    const double rate = 2.0 * h3.rho_norm() / p.p;

    std::mt19937_64 gen(2024);
    auto uniform = [&](double a, double b) {
        return a + (b - a) * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
    };
    for (int trial = 0; trial < 20; ++trial) {
        // separable random kernel: P(v)^{qv} x gaussian mixture in t
        const double qv = uniform(1.5, 3.0);
        const int n_comp = 1 + static_cast<int>(uniform(0.0, 3.0));
        std::vector<std::array<double, 3>> comps;
        for (int c = 0; c < n_comp; ++c)
            comps.push_back({uniform(-3.0, 3.0), uniform(0.4, 2.0), uniform(-1.0, 1.0)});
        auto g = [&](double t) {
            Complex acc(0.0);
            for (auto& cm : comps)
                acc += cm[2] * std::exp(-(t - cm[0]) * (t - cm[0]) / (cm[1] * cm[1]));
            return acc;
        };

        const double vol = nbar_quadrature(
            [&](const NbarPoint& v) { return std::pow(p_function(v, h3), qv); }, h3, 1e-9);

        // Monte Carlo lower bound for the weighted line factor, scaled by the
        // volume of the transverse factor
        auto line = LineKernel::sample([&](double t) { return std::exp(rate * t) * g(t); });
        const double mc = cvp_bound(line, p, 1000 + trial, 120).lower * vol;

        const double tp2 = vol * integrate_adaptive([&](double t) {
                                     return std::exp(rate * t) * std::abs(g(t));
                                 }, -16.0, 16.0, 1e-10)
                                     .value;
        CHECK(mc <= tp2 * (1.0 + 1e-9));
    }
}

#include "rankone/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rankone/geometry.hpp"

namespace rankone {

bool GeometryFuzzReport::pass(double tolerance) const {
    for (double w : worst_item)
        if (w < -tolerance) return false;
    return worst_decom_iwas >= -tolerance;
}

GeometryFuzzReport run_geometry_fuzz(const SpaceParams& sp, size_t n_samples, uint64_t seed) {
    GeometryFuzzReport rep;
    rep.samples = n_samples;
    for (auto& w : rep.worst_item) w = std::numeric_limits<double>::infinity();
    rep.worst_decom_iwas = std::numeric_limits<double>::infinity();

    std::mt19937_64 gen(seed);
    auto uniform = [&](double a, double b) {
        const uint64_t bits = gen() >> 11;
        return a + (b - a) * (static_cast<double>(bits) * 0x1.0p-53);
    };

    for (size_t i = 0; i < n_samples; ++i) {
        const double t = uniform(-8.0, 8.0);
        NbarPoint v;
        v.x_norm = uniform(0.0, 10.0);
        v.y_norm = sp.m_2alpha > 0 ? uniform(0.0, 10.0) : 0.0;

        auto rep_i = ctoi_report(t, v, sp);
        auto track = [&](int idx, double slack) {
            rep.worst_item[idx] = std::min(rep.worst_item[idx], slack);
            rep.applicable[idx]++;
        };
        track(0, rep_i.slack_1);
        track(1, rep_i.slack_2);
        if (rep_i.slack_3) track(2, *rep_i.slack_3);
        if (rep_i.slack_4) track(3, *rep_i.slack_4);

        // positive-chamber comparison: 0 <= b_exp - ta_exp <= 2 e^{-2t}
        if (t >= 0.0) {
            const double gap = rep_i.b_exp - rep_i.ta_exp;
            const double slack = std::min(gap, 2.0 * std::exp(-2.0 * t) - gap);
            rep.worst_decom_iwas = std::min(rep.worst_decom_iwas, slack);
        }
    }
    return rep;
}

SphericalCheckReport run_spherical_checks(const SpaceParams& sp, int grid_n) {
    SphericalCheckReport rep;
    const bool is_h3 = sp.m_alpha == 2 && sp.m_2alpha == 0;

    if (is_h3) {
        for (int i = 0; i <= grid_n; ++i) {
            const double lam = 0.1 + (20.0 - 0.1) * i / grid_n;
            for (int j = 0; j <= grid_n; ++j) {
                const double t = 0.05 + (10.0 - 0.05) * j / grid_n;
                const Complex got = spherical_function(Complex(lam), t, sp);
                const Complex want = std::sin(lam * t) / (lam * std::sinh(t));
                rep.h3_oracle_max_rel =
                    std::max(rep.h3_oracle_max_rel, std::abs(got - want) / std::abs(want));
            }
        }
        for (double lam : {0.3, 1.0, 2.7, 5.0, 11.0}) {
            auto g = gamma_coeffs(Complex(lam), 30, sp);
            for (const auto& val : g.values)
                rep.gamma_ones_max_dev =
                    std::max(rep.gamma_ones_max_dev, std::abs(val - Complex(1.0)));
        }
    }

    const double rho = sp.rho_norm();
    for (int i = 0; i < grid_n; ++i) {
        const double re = 0.1 + (10.0 - 0.1) * i / (grid_n - 1);
        for (int j = 0; j < grid_n; ++j) {
            const double im = rho * j / (grid_n - 1);
            const Complex lam(re, im);
            bool resonant = false;
            for (int k = 0; k <= static_cast<int>(rho) + 1; ++k)
                if (std::abs(lam - Complex(0.0, static_cast<double>(k))) < 0.06) resonant = true;
            if (resonant) continue;
            rep.crossover_worst = std::max(rep.crossover_worst, crossover_mismatch(lam, sp));
        }
    }

    rep.hcest = hcest_suprema(sp, 2);
    rep.omega_sup = omega_derivative_suprema(sp, 2);
    return rep;
}

} // namespace rankone

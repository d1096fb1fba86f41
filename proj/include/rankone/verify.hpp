#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rankone/space.hpp"
#include "rankone/spherical.hpp"

namespace rankone {

/// Worst signed slacks of the Cartan/Iwasawa comparison inequalities over a
/// randomized sample set (positive = inequality satisfied with room).
struct GeometryFuzzReport {
    size_t samples = 0;
    double worst_item[4] = {0, 0, 0, 0};
    size_t applicable[4] = {0, 0, 0, 0};
    double worst_decom_iwas = 0.0;  // two-sided slack of the positive-chamber bracket
    bool pass(double tolerance = 1e-10) const;
};

GeometryFuzzReport run_geometry_fuzz(const SpaceParams& sp, size_t n_samples, uint64_t seed);

/// Cross-method and closed-form checks of the spherical machinery.
struct SphericalCheckReport {
    double h3_oracle_max_rel = 0.0;       // vs sin(lambda t)/(lambda sinh t); H3 only
    double gamma_ones_max_dev = 0.0;      // max |Gamma_l - 1|, l <= 30; H3 only
    double crossover_worst = 0.0;         // series vs ODE at the crossover radius
    std::vector<StabilityValue> hcest;    // per derivative order
    std::vector<StabilityValue> omega_sup;
};

SphericalCheckReport run_spherical_checks(const SpaceParams& sp, int grid_n = 20);

} // namespace rankone

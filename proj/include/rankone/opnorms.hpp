#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rankone/geometry.hpp"
#include "rankone/kernels.hpp"
#include "rankone/multiplier.hpp"
#include "rankone/space.hpp"

namespace rankone {

/// A convolution kernel sampled uniformly on the line (the flat subgroup in
/// t-coordinates).  The induced discrete convolution matrix is Toeplitz.
struct LineKernel {
    double t0 = -16.0;
    double h = 1.0 / 128.0;
    std::vector<Complex> values;

    double t_at(size_t i) const { return t0 + h * static_cast<double>(i); }
    size_t size() const { return values.size(); }

    static LineKernel sample(const std::function<Complex(double)>& f, double half_width = 16.0,
                             double spacing = 1.0 / 128.0);
    static LineKernel from_radial(const RadialKernel& k);

    double l1_norm() const;
    bool edge_negligible(double tol = 1e-12) const;
};

/// M phi(lambda) = int phi(t) e^{-i lambda t} dt by the trapezoid/midpoint sum on
/// the sample grid.  Sets *aliasing_warning when phi is not negligible at the
/// domain edges.
std::vector<Complex> mellin_transform(const LineKernel& phi, const std::vector<double>& lambdas,
                                      bool* aliasing_warning = nullptr);

struct Cv2Result {
    double value = 0.0;
    bool aliasing_warning = false;
};

/// Exact convolution norm on L^2: sup_lambda |M kappa(lambda)|, located on a
/// zero-padded spectral grid and polished by local refinement.
Cv2Result cv2_norm(const LineKernel& kappa);

struct CvpBound {
    double lower = 0.0;  // Monte Carlo over random Gaussian mixtures
    double upper = 0.0;  // interpolation bound ||k||_1^{2/p-1} cv2^{2-2/p}
};

/// Two-sided bracket for the L^p convolution norm, 1 < p <= 2.  The lower
/// bound maximizes ||f * kappa||_p / ||f||_p over seeded random modulated
/// Gaussian mixtures; the seed fixes the draw.
CvpBound cvp_bound(const LineKernel& kappa, const Exponent& p, uint64_t seed,
                   int n_test_functions = 200);

struct LipResult {
    double value = 0.0;
    double drift = 0.0;
    QuantityFlag flag = QuantityFlag::Stable;
};

/// sup |kappa(t_i) - kappa(t_j)| / |t_i - t_j| over pairs up to unit separation,
/// compared across grid strides 4/2/1; flagged divergent when refinement keeps
/// growing the value by more than 25%.
LipResult lip_norm(const LineKernel& kappa);

struct MelProductResult {
    double bound = 0.0;        // ||M phi||_1 * cv2(kappa)
    double cv2_product = 0.0;  // cv2(phi kappa)
    bool pass = false;         // cv2_product <= bound * (1 + 1e-9)
    double phi_l1 = 0.0;
    double phi_d2_l1 = 0.0;    // reported for the smooth-multiplication ledger
};

/// Checks the smooth-multiplication bound ||phi kappa||_{Cv2} <= ||M phi||_1 ||kappa||_{Cv2}.
MelProductResult mel_product_bound(const LineKernel& phi, const LineKernel& kappa);

enum class TransferenceMode { Integral, PerV };

struct TransferenceOptions {
    double t_half_width = 16.0;
    double t_spacing = 1.0 / 64.0;
    double nbar_rel_tol = 1e-6;
    double t_rel_tol = 1e-8;
};

/// mode = Integral: the double integral int_Nbar int e^{2|rho|t/p} |K(v,t)| dt dv.
/// mode = PerV: int_Nbar [interpolation upper bound for the line norm of
/// t -> e^{2|rho|t/p} K(v,t)] dv, the computable surrogate for the vector-valued
/// transference estimate.
double transference_bound(const std::function<Complex(const NbarPoint&, double)>& K,
                          const Exponent& p, const SpaceParams& sp, TransferenceMode mode,
                          const TransferenceOptions& opts = {});

} // namespace rankone

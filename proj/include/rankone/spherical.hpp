#pragma once

#include <vector>

#include "rankone/jets.hpp"
#include "rankone/multiplier.hpp"
#include "rankone/space.hpp"

namespace rankone {

/// Harish-Chandra c-function of the space, as the rank-one Gindikin-Karpelevich
/// quotient of Gamma factors (equivalently, the Jacobi-analysis c-function with
/// a = (n-2)/2, b = (m_2alpha - 1)/2).
///
/// Two normalizations appear:
///  * expansion(lambda): the canonical coefficient of the asymptotic expansion of
///    the spherical function normalized to 1 at the identity;
///  * normalized(lambda) = expansion(lambda) / normalization, scaled so that
///    normalized(lambda) * (i lambda)^{(n-1)/2} -> 1 as lambda -> +inf.
/// All downstream quantities (Plancherel density, kernel synthesis, shifted
/// multipliers) use the normalized version; the fixed constant `normalization`
/// reappears explicitly wherever the expansion form is required, so ratios of
/// certificate quantities are normalization-free.  For H3 the two coincide and
/// the density is exactly lambda^2.
struct HarishChandraC {
    SpaceParams sp;
    double normalization;  // 2^{|rho|-1+(n-1)/2} Gamma(n/2) / sqrt(pi)

    explicit HarishChandraC(const SpaceParams& space);

    Complex expansion(Complex lambda) const;
    Complex normalized(Complex lambda) const;

    /// 1 / normalized(-lambda); the combination entering inverse transforms.
    Complex check_inverse(Complex lambda) const;
    /// Jet of check_inverse at lambda, for derivative estimates.
    Jet check_inverse_jet(Complex lambda, int order) const;
};

Complex c_function(Complex lambda, const SpaceParams& sp);          // normalized
double plancherel_density(double lambda, const SpaceParams& sp);    // |c|^{-2}, even

/// Expansion coefficients Gamma_0..Gamma_L at a fixed spectral point,
/// Gamma_0 = 1.  Throws near the resonance set lambda = -i l.
struct GammaCoeffs {
    Complex lambda;
    std::vector<Complex> values;
};
GammaCoeffs gamma_coeffs(Complex lambda, int L, const SpaceParams& sp);

/// Same recursion with jet-valued lambda (for d/dlambda estimates).
std::vector<Jet> gamma_coeff_jets(Complex lambda, int order, int L, const SpaceParams& sp);

/// Truncated remainder sum_{l=1}^{L} Gamma_l(lambda) e^{-2 l t} with a
/// geometric tail estimate.  The asymptotic regime is t >= 1/2; smaller t
/// only sets a flag.
struct OmegaRemainder {
    Complex value;
    double tail_bound = 0.0;
    bool in_asymptotic_regime = true;
};
OmegaRemainder omega_remainder(Complex lambda, double t, int L, const SpaceParams& sp);

struct SphericalOptions {
    double crossover = 0.5;    // series for t >= crossover, ODE below
    int max_terms = 60;        // series truncation cap
    double series_cutoff = 1e-14;
    double ode_tol = 1e-11;
    double crossover_tol = 1e-5;
};

/// Spherical function phi_lambda(exp t H_0), normalized phi(0) = 1, for t >= 0
/// and lambda in the closed strip |Im lambda| <= |rho|.  Uses the two-term
/// asymptotic expansion beyond the crossover and integration of the radial
/// equation below it; near the resonance points lambda in {0, i, 2i, ...} the
/// ODE route is used throughout.
Complex spherical_function(Complex lambda, double t, const SpaceParams& sp,
                           const SphericalOptions& opts = {});

/// phi_lambda at several radii with a single ODE sweep (ascending ts).
std::vector<Complex> spherical_function_ode(Complex lambda, const std::vector<double>& ts,
                                            const SpaceParams& sp,
                                            const SphericalOptions& opts = {});

/// Relative mismatch of the series and ODE evaluations at the crossover radius.
/// Throws when it exceeds opts.crossover_tol (truncation too short).
double crossover_mismatch(Complex lambda, const SpaceParams& sp,
                          const SphericalOptions& opts = {});

/// A numeric quantity together with its refinement drift and stability flag.
struct StabilityValue {
    double value = 0.0;
    double drift = 0.0;
    QuantityFlag flag = QuantityFlag::Divergent;
};

/// Empirical suprema of |d^j cinv_check(lambda)| (1+|lambda|)^{j-(n-1)/2}
/// for j = 0..jmax over lambda rows Im = {0, rho/2, rho}; stability under
/// doubling of the lambda grid.
std::vector<StabilityValue> hcest_suprema(const SpaceParams& sp, int jmax = 2);

/// Empirical suprema of |d^j_lambda omega| and |t d/dt d^j_lambda omega| times
/// (1+|Re lambda|)^j over t >= 1/2, per j.
std::vector<StabilityValue> omega_derivative_suprema(const SpaceParams& sp, int jmax = 2);

/// Mikhlin-type proxy norms g_l = sup_lambda (|Gamma_l| + |lambda dGamma_l|)
/// on the line Im = delta * |rho|, l = 1..L, over a geometric grid of
/// n_points + 1 abscissae.
std::vector<double> gamma_multiplier_ledger(const SpaceParams& sp, double delta, int L,
                                            int n_points = 240);

/// Least-squares fit values[l] ~ C * l^d (l = 1-based).
struct PowerFit {
    double C = 0.0;
    double d = 0.0;
};
PowerFit fit_power_law(const std::vector<double>& values);

} // namespace rankone

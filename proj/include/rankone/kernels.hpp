#pragma once

#include <utility>
#include <vector>

#include "rankone/geometry.hpp"
#include "rankone/multiplier.hpp"
#include "rankone/space.hpp"

namespace rankone {

struct OutOfGridError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A bi-invariant kernel sampled on a radial grid of the flat subgroup.
/// Even kernels carry values(t) = values(-t); reweighted kappa-type objects
/// set even = false and live on the same signed grid.
struct RadialKernel {
    std::vector<double> grid;     // strictly increasing, symmetric about 0
    std::vector<Complex> values;
    double epsilon = 0.0;         // regularization used during synthesis
    bool even = true;

    double t_max() const { return grid.empty() ? 0.0 : grid.back(); }

    /// Cubic interpolation (Catmull-Rom, clamped ends).  Throws OutOfGridError
    /// beyond the grid.
    Complex at(double t) const;
};

/// Kernel value on the solvable group S = Nbar A.
struct SKernelSample {
    NbarPoint v;
    double t = 0.0;
    Complex value{};
};

// --- smooth cutoffs ----------------------------------------------------------
//
// With psi(x) = exp(-1/(1-x^2)) on (-1,1) and S(x) = int_{-1}^x psi / int_{-1}^1 psi:
//   eta(t) = 1 - S(|t| - 3)   (1 on [-2,2], vanishes outside [-4,4])
//   chi(t) = S(t/2)           (0 on (-inf,-2], 1 on [2,inf))

double smoothstep(double x);        // S
double smoothstep_d1(double x);     // S'
double smoothstep_d2(double x);     // S''

double eta_cutoff(double t);
double eta_cutoff_d1(double t);
double eta_cutoff_d2(double t);
double chi_cutoff(double t);
double chi_cutoff_d1(double t);
double chi_cutoff_d2(double t);

// --- synthesis ---------------------------------------------------------------

struct SynthesisOptions {
    double epsilon = 1e-4;
    double t_max = 16.0;
    int n_points = 4096;
    int refine = 0;          // extra halvings of the spectral panel width
    double series_crossover = 0.5;
    int max_terms = 60;
};

/// k(t) = int_R m(lambda) e^{-eps lambda^2} phi_lambda(t) |c(lambda)|^{-2} dlambda
/// on a uniform symmetric radial grid.  The spectral integral runs over fixed
/// composite Gauss panels whose width resolves the fastest oscillation e^{i lambda t_max};
/// the domain is truncated where the damped density drops below 1e-16 of its peak.
RadialKernel synthesize_kernel(const MultiplierExpr& m, const SpaceParams& sp,
                               const SynthesisOptions& opts = {});

/// (eta k, (1 - eta) k); the sum reproduces k exactly on the grid.
std::pair<RadialKernel, RadialKernel> split_local_global(const RadialKernel& k);

/// Splitting kernels at a point of S:
///   K1(v,t) = chi(t + aH(v)/2) K(cartan_exponent), K2 = (1 - chi(...)) K(...).
std::pair<Complex, Complex> splitting_kernels(const RadialKernel& k_glo, const NbarPoint& v,
                                              double t, const SpaceParams& sp);

/// Approximating kernels:
///   K1~(v,t) = chi(t + aH(v)/2) K(t + aH(v)),  K2~ = (1 - chi(...)) K(-t).
std::pair<Complex, Complex> approximating_kernels(const RadialKernel& k_glo, const NbarPoint& v,
                                                  double t, const SpaceParams& sp);

/// kappa^q(t) = e^{2 |rho| t / q} K(t) on the signed grid (q in (1, 2]).
RadialKernel kappa_q(const RadialKernel& k_glo, const Exponent& q, const SpaceParams& sp);

/// Forward transform int_0^tmax k(t) phi_lambda(t) delta(t) dt, normalized so
/// that it inverts synthesize_kernel: the result reproduces m(lambda) e^{-eps lambda^2}.
Complex forward_spherical_transform(const RadialKernel& k, double lambda, const SpaceParams& sp);

// --- spectral-shift representation of the global kernel -----------------------

struct ShiftedSynthesisOptions {
    double epsilon = 1e-4;
    int refine = 0;
    int max_terms = 16;
};

/// Contour-shifted representation of kappa^q on t >= 2:
///   kappa^q(t) = 2 c_inf (1 - eta(t)) int e^{i lambda t} [1 + omega(lambda + i rho_q, t)]
///                (cinv_check m_eps)(lambda + i rho_q) dlambda,
/// c_inf the c-function normalization constant.  With derivative = true returns
/// t d/dt kappa^q instead.
std::vector<Complex> shifted_synthesis(const MultiplierExpr& m, const SpaceParams& sp,
                                       const Exponent& q, const std::vector<double>& ts,
                                       const ShiftedSynthesisOptions& opts = {},
                                       bool derivative = false);

/// Unshifted spectral representation of kappa^q, valid on the whole signed grid
/// (|t| >= 2):  kappa^q(t) = e^{2|rho|t/q} K(|t|) with K written through the
/// expansion at infinity.  Used to cross-check the contour shift and to reach
/// the negative half-line.
std::vector<Complex> unshifted_kappa_synthesis(const MultiplierExpr& m, const SpaceParams& sp,
                                               const Exponent& q, const std::vector<double>& ts,
                                               const ShiftedSynthesisOptions& opts = {},
                                               bool derivative = false);

// --- cutoff ledgers ------------------------------------------------------------

/// L1 norms of eta_{l,+-} and their second derivatives:
///   eta_{l,+}(t) = 2 (1 - eta(t)) e^{-2 l t} (t > 0),
///   eta_{l,-}(t) = 2 (1 - eta(-t)) e^{2 |rho| t / p} e^{2 l t} (t < 0).
/// Integrable for l >= 1 on the plus side; the l = 0 plus-side norm is infinite
/// and reported as such.
struct EtaLedgerEntry {
    double plus = 0.0;   // ||eta_{l,+}||_1 + ||D^2 eta_{l,+}||_1
    double minus = 0.0;  // same for eta_{l,-}
};
EtaLedgerEntry eta_ell_ledger(int ell, double p, const SpaceParams& sp, double rel_tol = 1e-10);

/// ||phi||_1 + ||D^2 phi||_1 for phi(t) = (1 - chi(t)) e^{4 |rho| t / p}.
double varphi_ledger(double p, const SpaceParams& sp, double rel_tol = 1e-10);

/// ||psi_v||_1 + ||D^2 psi_v||_1 for psi_v(t) = chi(t) - chi(t - aHv/2).
double psi_v_ledger(double alpha_Hv, double rel_tol = 1e-10);

} // namespace rankone

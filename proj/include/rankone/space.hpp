#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace rankone {

using Complex = std::complex<double>;

/// Root data of a rank-one noncompact symmetric space.
///
/// The space is identified by the multiplicities (m_alpha, m_2alpha) of the
/// simple root and its double.  Radial coordinates use t = alpha(log a) with
/// alpha(H_0) = 1 and |H_0| = 1, and the complexified dual is identified with
/// the plane via zeta -> zeta * alpha.
struct SpaceParams {
    int m_alpha   = 2;
    int m_2alpha  = 0;

    SpaceParams() = default;
    SpaceParams(int ma, int m2a) : m_alpha(ma), m_2alpha(m2a) {
        if (ma < 1) throw std::invalid_argument("SpaceParams: m_alpha must be positive");
        if (m2a < 0) throw std::invalid_argument("SpaceParams: m_2alpha must be nonnegative");
    }

    int dimension() const { return m_alpha + m_2alpha + 1; }           // n
    double rho_norm() const { return 0.5 * (m_alpha + 2 * m_2alpha); } // |rho|

    /// Constant c in the Iwasawa coordinate formulas, c^{-1} = 4(m_alpha + 4 m_2alpha).
    double iwasawa_c() const { return 1.0 / (4.0 * (m_alpha + 4.0 * m_2alpha)); }

    /// Named presets: "H3" = (2,0), "H4" = (3,0), "CH2" = (2,1).
    static SpaceParams preset(const std::string& name);

    bool operator==(const SpaceParams&) const = default;
};

/// Lebesgue exponent restricted to (1, infinity).
struct Exponent {
    double p = 2.0;

    Exponent() = default;
    explicit Exponent(double value) : p(value) {
        if (!(value > 1.0) || !std::isfinite(value))
            throw std::domain_error("Exponent: p must lie in (1, inf)");
    }

    Exponent dual() const { return Exponent(p / (p - 1.0)); }
};

/// Half-width of an analyticity strip {|Im zeta| < half_width}.
struct Strip {
    double half_width = 0.0;
};

/// delta(p) = |2/p - 1|.  Accepts the boundary p = 1 (used for weights);
/// throws for p < 1.
double delta_exponent(double p);

/// rho_p = delta(p) * |rho|, the critical strip half-width for L^p.
Strip rho_p(const Exponent& p, const SpaceParams& sp);

/// Strip half-width for a raw exponent, boundary p = 1 allowed.
Strip strip_half_width(double p, const SpaceParams& sp);

/// omega(zeta) = (zeta^2 + 4|rho|^2)^{(n-1)/4}, principal branch.
/// Valid on the closed unit strip |Im zeta| <= |rho|, where the base never
/// meets the negative real axis; outside it a branch-ambiguity error can fire.
Complex omega_weight(Complex zeta, const SpaceParams& sp);

/// Radial density delta(a) = 2^{-2|rho|} (e^t - e^{-t})^{m_alpha} (e^{2t} - e^{-2t})^{m_2alpha}
/// for t = alpha(log a) >= 0.
double delta_density(double t, const SpaceParams& sp);

} // namespace rankone

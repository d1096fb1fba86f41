#pragma once

#include <functional>
#include <optional>

#include "rankone/space.hpp"

namespace rankone {

/// Point of the opposite nilpotent group, identified by the norms of its
/// two root-space coordinates.  y_norm must vanish when m_2alpha = 0.
struct NbarPoint {
    double x_norm = 0.0;  // |X|, g_{-alpha} coordinate
    double y_norm = 0.0;  // |Y|, g_{-2alpha} coordinate
};

/// Signed slacks for the four Cartan-vs-Iwasawa comparison inequalities.
/// A positive slack means the inequality holds with room; items 3 and 4
/// are two-sided and report the smaller side.  Items whose hypothesis
/// fails are inapplicable.
struct CtoIReport {
    double b_exp = 0.0;   // alpha(log b), b the Cartan middle component of va
    double ta_exp = 0.0;  // alpha(log ta), ta = a exp(H(v))
    double slack_1 = 0.0;
    double slack_2 = 0.0;
    std::optional<double> slack_3;
    std::optional<double> slack_4;
};

/// Phi(x) = (x + sqrt(x^2 - 4))/2 for x >= 2; inverse of y -> y + 1/y on [1, inf).
double phi_map(double x);

/// Gap x - Phi(x), evaluated as 2/(x + sqrt(x^2 - 4)) to avoid cancellation.
double phi_map_gap(double x);

/// alpha(H(v)) = (1/2) log[(1 + c|X|^2)^2 + 4c|Y|^2]  (always >= 0).
double iwasawa_exponent(const NbarPoint& v, const SpaceParams& sp);

/// alpha(log [v exp(t H_0)]_+) >= 0, via the closed-form bracket and phi_map.
/// Throws when the bracket falls below 1 beyond tolerance (implementation bug).
double cartan_exponent(double t, const NbarPoint& v, const SpaceParams& sp);

/// P(v) = exp(-|rho| alpha(H(v))) in (0, 1].
double p_function(const NbarPoint& v, const SpaceParams& sp);

/// Evaluates all four comparison inequalities at (t, v).
CtoIReport ctoi_report(double t, const NbarPoint& v, const SpaceParams& sp);

/// Integral over Nbar of a radial integrand f(|X|, |Y|), with Haar measure
/// normalized as Lebesgue measure in the exponential chart:
///   dv = sigma_{m_alpha} |X|^{m_alpha - 1} d|X| x sigma_{m_2alpha} |Y|^{m_2alpha - 1} d|Y|
/// (unit-sphere areas sigma_k = 2 pi^{k/2} / Gamma(k/2); the |Y| factor is
/// dropped when m_2alpha = 0).  Throws QuadratureError when the tail of the
/// integrand refuses to decay.
double nbar_quadrature(const std::function<double(const NbarPoint&)>& f,
                       const SpaceParams& sp, double rel_tol = 1e-9);

/// Surface area of the unit sphere in R^k.
double sphere_area(int k);

} // namespace rankone

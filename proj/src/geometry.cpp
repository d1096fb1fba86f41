#include "rankone/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rankone/quadrature.hpp"

namespace rankone {

double phi_map(double x) {
    if (x < 2.0) throw std::domain_error("phi_map: argument must be >= 2");
    return 0.5 * (x + std::sqrt(x * x - 4.0));
}

double phi_map_gap(double x) {
    if (x < 2.0) throw std::domain_error("phi_map_gap: argument must be >= 2");
    return 2.0 / (x + std::sqrt(x * x - 4.0));
}

double iwasawa_exponent(const NbarPoint& v, const SpaceParams& sp) {
    if (sp.m_2alpha == 0 && v.y_norm != 0.0)
        throw std::invalid_argument("iwasawa_exponent: y_norm must vanish when 2*alpha is not a root");
    const double c = sp.iwasawa_c();
    const double u = 1.0 + c * v.x_norm * v.x_norm;
    return 0.5 * std::log(u * u + 4.0 * c * v.y_norm * v.y_norm);
}

double cartan_exponent(double t, const NbarPoint& v, const SpaceParams& sp) {
    const double c = sp.iwasawa_c();
    const double hv = iwasawa_exponent(v, sp);
    // [(b^a + b^{-a})/2]^2 = e^{-2t}/4 + (e^{2t}/4) e^{2 aH(v)} + (1 + c|X|^2)/2
    const double bracket = 0.25 * std::exp(-2.0 * t) +
                           0.25 * std::exp(2.0 * t) * std::exp(2.0 * hv) +
                           0.5 * (1.0 + c * v.x_norm * v.x_norm);
    if (bracket < 1.0 - 1e-12)
        throw std::runtime_error("cartan_exponent: bracket fell below 1");
    const double s = 2.0 * std::sqrt(std::max(bracket, 1.0));
    return std::log(phi_map(s));
}

double p_function(const NbarPoint& v, const SpaceParams& sp) {
    return std::exp(-sp.rho_norm() * iwasawa_exponent(v, sp));
}

CtoIReport ctoi_report(double t, const NbarPoint& v, const SpaceParams& sp) {
    CtoIReport rep;
    rep.b_exp = cartan_exponent(t, v, sp);
    rep.ta_exp = t + iwasawa_exponent(v, sp);

    const double b = std::exp(rep.b_exp);
    const double ta = std::exp(rep.ta_exp);
    const double ainv = std::exp(-t);

    rep.slack_1 = b - phi_map(std::max({ainv, ta, 2.0}));
    rep.slack_2 = phi_map(ainv + ta) - b;  // ainv + ta >= 2 always

    if (ta >= 2.0) {
        const double lower = ta * (1.0 - 2.0 / (ta * ta));
        const double upper = ta * (1.0 + ainv / ta);
        rep.slack_3 = std::min(b - lower, upper - b);
    }
    if (ainv >= 2.0) {
        const double lower = ainv * (1.0 - 2.0 * std::exp(2.0 * t));
        const double upper = ainv * (1.0 + std::exp(t) * ta);
        rep.slack_4 = std::min(b - lower, upper - b);
    }
    return rep;
}

double sphere_area(int k) {
    if (k < 1) throw std::invalid_argument("sphere_area: k must be positive");
    return 2.0 * std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k);
}

namespace {

// Radial integral int_0^inf g(r) r^{k-1} dr with the tail-extension rule.
double radial_integral(const std::function<double(double)>& g, int k, double rel_tol) {
    auto weighted = [&](double r) { return g(r) * std::pow(r, k - 1); };
    auto res = integrate_to_infinity(weighted, 0.0, rel_tol, 1.0);
    return res.value;
}

} // namespace

double nbar_quadrature(const std::function<double(const NbarPoint&)>& f,
                       const SpaceParams& sp, double rel_tol) {
    if (sp.m_2alpha == 0) {
        auto g = [&](double x) { return f(NbarPoint{x, 0.0}); };
        return sphere_area(sp.m_alpha) * radial_integral(g, sp.m_alpha, rel_tol);
    }
    auto outer = [&](double x) {
        auto inner = [&](double y) { return f(NbarPoint{x, y}); };
        return radial_integral(inner, sp.m_2alpha, rel_tol);
    };
    return sphere_area(sp.m_alpha) * sphere_area(sp.m_2alpha) *
           radial_integral(outer, sp.m_alpha, rel_tol);
}

} // namespace rankone

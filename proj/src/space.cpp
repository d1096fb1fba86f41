#include "rankone/space.hpp"

#include <cmath>

namespace rankone {

SpaceParams SpaceParams::preset(const std::string& name) {
    if (name == "H3") return SpaceParams(2, 0);
    if (name == "H4") return SpaceParams(3, 0);
    if (name == "CH2") return SpaceParams(2, 1);
    throw std::invalid_argument("SpaceParams: unknown preset '" + name + "'");
}

double delta_exponent(double p) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::domain_error("delta_exponent: p must lie in [1, inf)");
    return std::abs(2.0 / p - 1.0);
}

Strip rho_p(const Exponent& p, const SpaceParams& sp) {
    return Strip{delta_exponent(p.p) * sp.rho_norm()};
}

Strip strip_half_width(double p, const SpaceParams& sp) {
    return Strip{delta_exponent(p) * sp.rho_norm()};
}

Complex omega_weight(Complex zeta, const SpaceParams& sp) {
    const double rho = sp.rho_norm();
    const Complex base = zeta * zeta + 4.0 * rho * rho;
    if (base.imag() == 0.0 && base.real() < 0.0)
        throw std::domain_error("omega_weight: zeta^2 + 4|rho|^2 lies on the branch cut");
    const double expo = (sp.dimension() - 1) / 4.0;
    Complex w = std::pow(base, expo);
    // real zeta in the closed strip gives a positive real weight; drop rounding dust
    if (zeta.imag() == 0.0) w = Complex(w.real(), 0.0);
    return w;
}

double delta_density(double t, const SpaceParams& sp) {
    if (t < 0.0) throw std::domain_error("delta_density: t must be nonnegative");
    const double rho = sp.rho_norm();
    double value = std::pow(2.0, -2.0 * rho);
    value *= std::pow(std::exp(t) - std::exp(-t), sp.m_alpha);
    if (sp.m_2alpha > 0)
        value *= std::pow(std::exp(2.0 * t) - std::exp(-2.0 * t), sp.m_2alpha);
    return value;
}

} // namespace rankone

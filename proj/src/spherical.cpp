#include "rankone/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rankone/gammafn.hpp"

namespace rankone {

namespace {

constexpr Complex kI(0.0, 1.0);

// c(lambda) = 2^{rho - i lambda} Gamma(a+1) Gamma(i lambda) /
//             [ Gamma((i lambda + rho)/2) Gamma(i lambda / 2 + (a - b + 1)/2) ]
// with a = (n-2)/2, b = (m_2alpha - 1)/2, rho = |rho|.  Evaluated through
// log-gamma sums so that large imaginary arguments neither over- nor underflow.
template <class S>
S c_expansion_impl(const S& lambda, const SpaceParams& sp) {
    const double n = sp.dimension();
    const double rho = sp.rho_norm();
    const double a = 0.5 * (n - 2.0);
    const double b = 0.5 * (sp.m_2alpha - 1.0);
    S s = lambda * kI;  // i lambda
    S lg = (Complex(rho) - s) * Complex(std::numbers::ln2) +
           Complex(std::lgamma(a + 1.0)) + log_gamma(s) -
           log_gamma((s + Complex(rho)) * Complex(0.5)) -
           log_gamma(s * Complex(0.5) + Complex(0.5 * (a - b + 1.0)));
    return exp(lg);
}

// Expansion coefficients from the radial equation
//   phi'' + (m_a coth t + 2 m_2a coth 2t) phi' = -(lambda^2 + rho^2) phi:
// substituting e^{(i lambda - rho - 2l) t} gives, for l >= 1,
//   4 l (l - i lambda) G_l = -[ 2 m_a S1 + 4 m_2a S2 ],
//   S1 = sum_{j<l} G_j (i lambda - rho - 2j),  S2 = same over j = l-2, l-4, ...
template <class S>
std::vector<S> gamma_seq_impl(const S& lambda, int L, const SpaceParams& sp) {
    const double rho = sp.rho_norm();
    std::vector<S> g;
    g.reserve(static_cast<size_t>(L) + 1);
    const S one = lambda * Complex(0.0) + Complex(1.0);
    g.push_back(one);

    S ilam = lambda * kI;
    S s_all = one * Complex(0.0);
    S s_par[2] = {s_all, s_all};
    for (int l = 1; l <= L; ++l) {
        // fold in the j = l-1 term
        const S term = g[static_cast<size_t>(l - 1)] * (ilam - Complex(rho + 2.0 * (l - 1)));
        s_all = s_all + term;
        s_par[(l - 1) % 2] = s_par[(l - 1) % 2] + term;

        S denom = (Complex(static_cast<double>(l)) - ilam) * Complex(4.0 * l);
        if (std::abs(detail::value_of(denom)) < 1e-9)
            throw std::domain_error("gamma_coeffs: resonance near lambda = -i l, l = " +
                                    std::to_string(l));
        S num = s_all * Complex(2.0 * sp.m_alpha);
        if (sp.m_2alpha > 0) num = num + s_par[l % 2] * Complex(4.0 * sp.m_2alpha);
        g.push_back(-num / denom);
    }
    return g;
}

// Taylor coefficients of the even solution phi = sum u_k t^{2k} near t = 0.
// Uses x coth x = sum c_k x^{2k}.
std::vector<Complex> small_t_series(Complex sigma, const SpaceParams& sp, int terms) {
    static const double cothc[7] = {1.0,          1.0 / 3.0,     -1.0 / 45.0, 2.0 / 945.0,
                                    -1.0 / 4725.0, 2.0 / 93555.0, -1382.0 / 638512875.0};
    const int n = sp.dimension();
    std::vector<double> gk(7);
    for (int k = 0; k < 7; ++k)
        gk[static_cast<size_t>(k)] = sp.m_alpha * cothc[k] + sp.m_2alpha * std::pow(4.0, k) * cothc[k];
    std::vector<Complex> u(static_cast<size_t>(terms) + 1);
    u[0] = Complex(1.0);
    for (int k = 1; k <= terms; ++k) {
        Complex acc = sigma * u[static_cast<size_t>(k - 1)];
        for (int j = 1; j < k; ++j)
            if (k - j < 7) acc += 2.0 * j * gk[static_cast<size_t>(k - j)] * u[static_cast<size_t>(j)];
        u[static_cast<size_t>(k)] = -acc / (2.0 * k * (2.0 * k + n - 2.0));
    }
    return u;
}

struct Rk45State {
    Complex y, dy;
};

// Cash-Karp embedded Runge-Kutta step for the radial equation.
Rk45State rk45_step(const Rk45State& s, double t, double h, Complex sigma,
                    const SpaceParams& sp, double* err) {
    auto rhs = [&](double tt, const Rk45State& st) {
        const double A = sp.m_alpha / std::tanh(tt) + 2.0 * sp.m_2alpha / std::tanh(2.0 * tt);
        return Rk45State{st.dy, -A * st.dy - sigma * st.y};
    };
    auto axpy = [](const Rk45State& base, std::initializer_list<std::pair<double, const Rk45State*>> terms,
                   double h) {
        Rk45State r = base;
        for (auto& [c, k] : terms) {
            r.y += h * c * k->y;
            r.dy += h * c * k->dy;
        }
        return r;
    };
    const Rk45State k1 = rhs(t, s);
    const Rk45State k2 = rhs(t + h / 5.0, axpy(s, {{1.0 / 5.0, &k1}}, h));
    const Rk45State k3 = rhs(t + 3.0 * h / 10.0, axpy(s, {{3.0 / 40.0, &k1}, {9.0 / 40.0, &k2}}, h));
    const Rk45State k4 = rhs(t + 3.0 * h / 5.0,
                             axpy(s, {{3.0 / 10.0, &k1}, {-9.0 / 10.0, &k2}, {6.0 / 5.0, &k3}}, h));
    const Rk45State k5 = rhs(t + h, axpy(s, {{-11.0 / 54.0, &k1}, {5.0 / 2.0, &k2},
                                             {-70.0 / 27.0, &k3}, {35.0 / 27.0, &k4}}, h));
    const Rk45State k6 = rhs(t + 7.0 * h / 8.0,
                             axpy(s, {{1631.0 / 55296.0, &k1}, {175.0 / 512.0, &k2},
                                      {575.0 / 13824.0, &k3}, {44275.0 / 110592.0, &k4},
                                      {253.0 / 4096.0, &k5}}, h));
    const Rk45State y5 = axpy(s, {{37.0 / 378.0, &k1}, {250.0 / 621.0, &k3},
                                  {125.0 / 594.0, &k4}, {512.0 / 1771.0, &k6}}, h);
    const Rk45State y4 = axpy(s, {{2825.0 / 27648.0, &k1}, {18575.0 / 48384.0, &k3},
                                  {13525.0 / 55296.0, &k4}, {277.0 / 14336.0, &k5},
                                  {1.0 / 4.0, &k6}}, h);
    *err = std::max(std::abs(y5.y - y4.y), std::abs(y5.dy - y4.dy));
    return y5;
}

// Integrates from t0 = 1e-3 (Taylor start) through the ascending radii in ts,
// recording phi at each.
std::vector<Complex> ode_sweep(Complex lambda, const std::vector<double>& ts,
                               const SpaceParams& sp, const SphericalOptions& opts) {
    const double rho = sp.rho_norm();
    const Complex sigma = lambda * lambda + Complex(rho * rho);
    const double t0 = 1e-3;
    auto u = small_t_series(sigma, sp, 6);

    auto series_at = [&](double t) {
        Complex phi(0.0), dphi(0.0);
        double t2k = 1.0;
        for (size_t k = 0; k < u.size(); ++k) {
            phi += u[k] * t2k;
            if (k + 1 < u.size()) dphi += 2.0 * static_cast<double>(k + 1) * u[k + 1] * t2k * t;
            t2k *= t * t;
        }
        return Rk45State{phi, dphi};
    };

    std::vector<Complex> out(ts.size());
    size_t idx = 0;
    // radii at or below the Taylor start come straight from the series
    while (idx < ts.size() && ts[idx] <= t0 * 1.0000001) {
        out[idx] = series_at(ts[idx]).y;
        ++idx;
    }
    if (idx == ts.size()) return out;

    Rk45State state = series_at(t0);
    double t = t0;
    double h = 1e-4;
    const double tol = opts.ode_tol;
    while (idx < ts.size()) {
        const double target = ts[idx];
        bool clipped = false;
        double step = h;
        if (t + step >= target) {
            step = target - t;
            clipped = true;
        }
        double err = 0.0;
        Rk45State next = rk45_step(state, t, step, sigma, sp, &err);
        const double scale = std::max({std::abs(state.y), std::abs(state.dy), 1e-8});
        if (err <= tol * scale || step < 1e-12) {
            state = next;
            t += step;
            if (!clipped) {
                const double grow = err > 0.0 ? 0.9 * std::pow(tol * scale / err, 0.2) : 2.0;
                h = step * std::clamp(grow, 0.2, 5.0);
            }
            if (clipped || std::abs(t - target) < 1e-14) {
                if (std::abs(t - target) < 1e-12) {
                    out[idx] = state.y;
                    ++idx;
                }
            }
        } else {
            const double shrink = 0.9 * std::pow(tol * scale / err, 0.25);
            h = step * std::clamp(shrink, 0.1, 0.9);
        }
    }
    return out;
}

bool near_resonance(Complex lambda, const SpaceParams& sp) {
    // expansion-side hazards: c-function poles / recursion resonances at
    // lambda in {0, i, 2i, ...} within the closed strip
    const double rho = sp.rho_norm();
    for (int k = 0; k <= static_cast<int>(rho) + 1; ++k)
        if (std::abs(lambda - Complex(0.0, static_cast<double>(k))) < 0.05) return true;
    return false;
}

Complex series_value(Complex lambda, double t, const SpaceParams& sp,
                     const SphericalOptions& opts) {
    const double rho = sp.rho_norm();
    auto half = [&](Complex lam) {
        auto g = gamma_seq_impl<Complex>(lam, opts.max_terms, sp);
        const double q = std::exp(-2.0 * t);
        Complex acc(1.0);
        double qq = 1.0;
        for (int l = 1; l <= opts.max_terms; ++l) {
            qq *= q;
            const Complex term = g[static_cast<size_t>(l)] * qq;
            acc += term;
            if (std::abs(term) < opts.series_cutoff * std::abs(acc) && l >= 4) break;
        }
        return c_expansion_impl<Complex>(lam, sp) * std::exp((kI * lam - rho) * t) * acc;
    };
    return half(lambda) + half(-lambda);
}

} // namespace

HarishChandraC::HarishChandraC(const SpaceParams& space)
    : sp(space),
      normalization(std::pow(2.0, space.rho_norm() - 1.0 + 0.5 * (space.dimension() - 1)) *
                    std::tgamma(0.5 * space.dimension()) / std::sqrt(std::numbers::pi)) {}

Complex HarishChandraC::expansion(Complex lambda) const {
    try {
        return c_expansion_impl<Complex>(lambda, sp);
    } catch (const GammaPole&) {
        throw std::domain_error("c_function: pole on the imaginary axis");
    }
}

Complex HarishChandraC::normalized(Complex lambda) const {
    return expansion(lambda) / normalization;
}

Complex HarishChandraC::check_inverse(Complex lambda) const {
    return Complex(normalization) / expansion(-lambda);
}

Jet HarishChandraC::check_inverse_jet(Complex lambda, int order) const {
    Jet lam = Jet::variable(lambda, order);
    // d/dlambda of f(-lambda) carries the sign through the inner jet
    Jet mlam = -lam;
    return Complex(normalization) / c_expansion_impl<Jet>(mlam, sp);
}

Complex c_function(Complex lambda, const SpaceParams& sp) {
    return HarishChandraC(sp).normalized(lambda);
}

double plancherel_density(double lambda, const SpaceParams& sp) {
    if (lambda == 0.0) return 0.0;  // the c-function pole at 0 kills the density
    const Complex c = c_function(Complex(lambda), sp);
    return 1.0 / std::norm(c);
}

GammaCoeffs gamma_coeffs(Complex lambda, int L, const SpaceParams& sp) {
    GammaCoeffs out;
    out.lambda = lambda;
    out.values = gamma_seq_impl<Complex>(lambda, L, sp);
    return out;
}

std::vector<Jet> gamma_coeff_jets(Complex lambda, int order, int L, const SpaceParams& sp) {
    return gamma_seq_impl<Jet>(Jet::variable(lambda, order), L, sp);
}

OmegaRemainder omega_remainder(Complex lambda, double t, int L, const SpaceParams& sp) {
    OmegaRemainder out;
    out.in_asymptotic_regime = t >= 0.5;
    auto g = gamma_seq_impl<Complex>(lambda, L, sp);
    const double q = std::exp(-2.0 * t);
    Complex acc(0.0);
    double qq = 1.0;
    for (int l = 1; l <= L; ++l) {
        qq *= q;
        acc += g[static_cast<size_t>(l)] * qq;
    }
    out.value = acc;
    const double last = std::abs(g[static_cast<size_t>(L)]) * qq;
    const double prev = std::abs(g[static_cast<size_t>(std::max(L - 1, 0))]);
    const double growth = prev > 0.0 ? std::max(1.0, std::abs(g[static_cast<size_t>(L)]) / prev) : 1.0;
    const double ratio = q * growth;
    out.tail_bound = ratio < 1.0 ? last * ratio / (1.0 - ratio)
                                 : std::numeric_limits<double>::infinity();
    return out;
}

Complex spherical_function(Complex lambda, double t, const SpaceParams& sp,
                           const SphericalOptions& opts) {
    if (t < 0.0) throw std::domain_error("spherical_function: t must be nonnegative");
    if (std::abs(lambda.imag()) > sp.rho_norm() + 1e-12)
        throw std::domain_error("spherical_function: lambda outside the closed strip");
    if (t == 0.0) return Complex(1.0);
    // evenness in lambda is exact; work with Im lambda >= 0
    if (lambda.imag() < 0.0) lambda = -lambda;

    if (near_resonance(lambda, sp) || t < opts.crossover)
        return spherical_function_ode(lambda, {t}, sp, opts)[0];

    if (std::abs(t - opts.crossover) < 1e-12) {
        const double mismatch = crossover_mismatch(lambda, sp, opts);
        if (mismatch > opts.crossover_tol)
            throw std::runtime_error("spherical_function: series/ODE mismatch " +
                                     std::to_string(mismatch) + " at the crossover");
    }
    return series_value(lambda, t, sp, opts);
}

std::vector<Complex> spherical_function_ode(Complex lambda, const std::vector<double>& ts,
                                            const SpaceParams& sp,
                                            const SphericalOptions& opts) {
    std::vector<Complex> out(ts.size());
    std::vector<size_t> order(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return ts[a] < ts[b]; });
    std::vector<double> sorted;
    sorted.reserve(ts.size());
    for (size_t i : order) {
        if (ts[i] < 0.0) throw std::domain_error("spherical_function_ode: negative radius");
        sorted.push_back(std::max(ts[i], 0.0));
    }
    auto vals = ode_sweep(lambda, sorted, sp, opts);
    for (size_t i = 0; i < order.size(); ++i) out[order[i]] = sorted[i] == 0.0 ? Complex(1.0) : vals[i];
    return out;
}

double crossover_mismatch(Complex lambda, const SpaceParams& sp, const SphericalOptions& opts) {
    const double t = opts.crossover;
    const Complex ode = spherical_function_ode(lambda, {t}, sp, opts)[0];
    const Complex ser = series_value(lambda, t, sp, opts);
    return std::abs(ode - ser) / std::max(std::abs(ode), 1e-300);
}

namespace {

StabilityValue stabilize(double coarse, double fine, double tol = 0.05) {
    StabilityValue sv;
    sv.value = fine;
    sv.drift = std::abs(fine - coarse) / std::max(std::abs(fine), 1e-300);
    sv.flag = sv.drift < tol ? QuantityFlag::Stable : QuantityFlag::Divergent;
    return sv;
}

} // namespace

std::vector<StabilityValue> hcest_suprema(const SpaceParams& sp, int jmax) {
    HarishChandraC hc(sp);
    const double rho = sp.rho_norm();
    const double expo_base = 0.5 * (sp.dimension() - 1);
    auto sup_for = [&](int j, int n_points) {
        double sup = 0.0;
        for (double im : {0.0, 0.5 * rho, rho}) {
            for (int k = 0; k <= n_points; ++k) {
                const double re = std::pow(10.0, -1.0 + 4.0 * k / n_points);  // 0.1 .. 1e3
                Jet jet = hc.check_inverse_jet(Complex(re, im), jmax);
                const double mod = std::abs(Complex(re, im));
                sup = std::max(sup, std::abs(jet.derivative(j)) *
                                        std::pow(1.0 + mod, j - expo_base));
            }
        }
        return sup;
    };
    std::vector<StabilityValue> out;
    for (int j = 0; j <= jmax; ++j) out.push_back(stabilize(sup_for(j, 400), sup_for(j, 800)));
    return out;
}

std::vector<StabilityValue> omega_derivative_suprema(const SpaceParams& sp, int jmax) {
    auto sup_for = [&](int j, int n_lam, int n_t) {
        double sup = 0.0;
        for (int r = 0; r <= 2; ++r) {
            const double im = sp.rho_norm() * r / 2.0;
            for (int k = 0; k <= n_lam; ++k) {
                const double re = std::pow(10.0, -1.0 + 3.0 * k / n_lam);  // 0.1 .. 100
                auto jets = gamma_coeff_jets(Complex(re, im), jmax, 40, sp);
                for (int it = 0; it <= n_t; ++it) {
                    const double t = 0.5 + 4.5 * it / n_t;
                    const double q = std::exp(-2.0 * t);
                    Complex om(0.0), dom(0.0);
                    double qq = 1.0;
                    for (int l = 1; l <= 40; ++l) {
                        qq *= q;
                        om += jets[static_cast<size_t>(l)].derivative(j) * qq;
                        dom += jets[static_cast<size_t>(l)].derivative(j) * (-2.0 * l) * qq;
                    }
                    const double w = std::pow(1.0 + re, j);
                    sup = std::max(sup, (std::abs(om) + std::abs(dom)) * w);
                }
            }
        }
        return sup;
    };
    std::vector<StabilityValue> out;
    for (int j = 0; j <= jmax; ++j)
        out.push_back(stabilize(sup_for(j, 60, 40), sup_for(j, 120, 80)));
    return out;
}

std::vector<double> gamma_multiplier_ledger(const SpaceParams& sp, double delta, int L,
                                            int n_points) {
    const double im = delta * sp.rho_norm();
    std::vector<double> out(static_cast<size_t>(L) + 1, 0.0);
    for (int k = 0; k <= n_points; ++k) {
        const double re = std::pow(10.0, -2.0 + 4.0 * k / n_points);
        auto jets = gamma_coeff_jets(Complex(re, im), 1, L, sp);
        for (int l = 0; l <= L; ++l) {
            const double v = std::abs(jets[static_cast<size_t>(l)].derivative(0)) +
                             std::abs(Complex(re, im) * jets[static_cast<size_t>(l)].derivative(1));
            out[static_cast<size_t>(l)] = std::max(out[static_cast<size_t>(l)], v);
        }
    }
    return out;
}

PowerFit fit_power_law(const std::vector<double>& values) {
    // least squares of log v_l against log l, l >= 1
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t l = 1; l < values.size(); ++l) {
        if (!(values[l] > 0.0)) continue;
        const double x = std::log(static_cast<double>(l));
        const double y = std::log(values[l]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    PowerFit fit;
    if (n < 2) {
        fit.C = values.empty() ? 0.0 : values.back();
        fit.d = 0.0;
        return fit;
    }
    const double denom = n * sxx - sx * sx;
    fit.d = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    fit.C = std::exp((sy - fit.d * sx) / n);
    return fit;
}

} // namespace rankone

#include "rankone/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "rankone/quadrature.hpp"
#include "rankone/spherical.hpp"

namespace rankone {

namespace {

constexpr Complex kI(0.0, 1.0);

// --- smoothstep table --------------------------------------------------------

double mollifier(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x));
}

double mollifier_d1(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    const double u = 1.0 - x * x;
    return mollifier(x) * (-2.0 * x / (u * u));
}

struct SmoothstepTable {
    static constexpr int kN = 8192;
    std::array<double, kN + 1> cum{};
    double total = 0.0;

    SmoothstepTable() {
        const double h = 2.0 / kN;
        double acc = 0.0;
        cum[0] = 0.0;
        for (int i = 0; i < kN; ++i) {
            const double a = -1.0 + i * h;
            // Simpson on each subinterval; psi is analytic inside (-1,1)
            acc += h / 6.0 * (mollifier(a) + 4.0 * mollifier(a + 0.5 * h) + mollifier(a + h));
            cum[static_cast<size_t>(i) + 1] = acc;
        }
        total = acc;
    }

    double eval(double x) const {
        if (x <= -1.0) return 0.0;
        if (x >= 1.0) return 1.0;
        const double h = 2.0 / kN;
        const double s = (x + 1.0) / h;
        const int i = std::min(static_cast<int>(s), kN - 1);
        const double a = -1.0 + i * h;
        const double d = x - a;
        // Simpson on the partial cell on top of the tabulated prefix
        const double part = d / 6.0 * (mollifier(a) + 4.0 * mollifier(a + 0.5 * d) + mollifier(a + d));
        return (cum[static_cast<size_t>(i)] + part) / total;
    }
};

const SmoothstepTable& table() {
    static const SmoothstepTable t;
    return t;
}

// --- Gauss-Legendre 16 panels --------------------------------------------------

constexpr double kGL16X[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                              0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                              0.9445750230732326, 0.9894009349916499};
constexpr double kGL16W[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                              0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                              0.0622535239386479, 0.0271524594117541};

struct SpectralNodes {
    std::vector<double> x;  // abscissae
    std::vector<double> w;  // weights
};

SpectralNodes gauss_panels(double lo, double hi, double width) {
    SpectralNodes nodes;
    const int n_panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
    const double w = (hi - lo) / n_panels;
    nodes.x.reserve(static_cast<size_t>(n_panels) * 16);
    nodes.w.reserve(static_cast<size_t>(n_panels) * 16);
    for (int p = 0; p < n_panels; ++p) {
        const double mid = lo + (p + 0.5) * w;
        for (int j = 0; j < 8; ++j) {
            nodes.x.push_back(mid - 0.5 * w * kGL16X[j]);
            nodes.w.push_back(0.5 * w * kGL16W[j]);
            nodes.x.push_back(mid + 0.5 * w * kGL16X[j]);
            nodes.w.push_back(0.5 * w * kGL16W[j]);
        }
    }
    return nodes;
}

// truncation: extend until the damped integrand proxy falls 16 orders below its peak
double spectral_cutoff(const MultiplierExpr& m, const SpaceParams& sp, double epsilon,
                       double shift_im = 0.0) {
    const int n = sp.dimension();
    double peak = 0.0;
    int quiet = 0;
    double lam = 0.25;
    for (; lam < 1e6; lam += 0.25) {
        double damp = std::exp(-epsilon * (lam * lam - shift_im * shift_im));
        double mv;
        try {
            mv = std::abs(m.eval(Complex(lam, shift_im)));
        } catch (const EvalError&) {
            mv = 1.0;
        }
        const double proxy = mv * damp * std::pow(1.0 + lam, n - 1);
        peak = std::max(peak, proxy);
        if (proxy < 1e-16 * std::max(peak, 1e-300)) {
            if (++quiet >= 12) break;
        } else {
            quiet = 0;
        }
        if (damp * std::pow(1.0 + lam, n + 4) < 1e-20) break;  // hard cap
    }
    return lam;
}

} // namespace

double smoothstep(double x) { return table().eval(x); }
double smoothstep_d1(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    return mollifier(x) / table().total;
}
double smoothstep_d2(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    return mollifier_d1(x) / table().total;
}

double eta_cutoff(double t) { return 1.0 - smoothstep(std::abs(t) - 3.0); }
double eta_cutoff_d1(double t) {
    const double s = t >= 0.0 ? 1.0 : -1.0;
    return -s * smoothstep_d1(std::abs(t) - 3.0);
}
double eta_cutoff_d2(double t) { return -smoothstep_d2(std::abs(t) - 3.0); }

double chi_cutoff(double t) { return smoothstep(0.5 * t); }
double chi_cutoff_d1(double t) { return 0.5 * smoothstep_d1(0.5 * t); }
double chi_cutoff_d2(double t) { return 0.25 * smoothstep_d2(0.5 * t); }

// --- RadialKernel ---------------------------------------------------------------

Complex RadialKernel::at(double t) const {
    if (grid.size() < 4) throw OutOfGridError("RadialKernel::at: grid too small");
    const double lo = grid.front(), hi = grid.back();
    if (t < lo - 1e-12 || t > hi + 1e-12)
        throw OutOfGridError("RadialKernel::at: t = " + std::to_string(t) + " outside grid");
    t = std::clamp(t, lo, hi);
    const double h = grid[1] - grid[0];
    const size_t n = grid.size();
    double s = (t - lo) / h;
    size_t i = std::min(static_cast<size_t>(s), n - 2);
    const double u = s - static_cast<double>(i);
    // Catmull-Rom with clamped ends
    const Complex p1 = values[i], p2 = values[i + 1];
    const Complex p0 = i > 0 ? values[i - 1] : 2.0 * p1 - p2;
    const Complex p3 = i + 2 < n ? values[i + 2] : 2.0 * p2 - p1;
    const Complex a = 2.0 * p1;
    const Complex b = p2 - p0;
    const Complex c = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3;
    const Complex d = -p0 + 3.0 * p1 - 3.0 * p2 + p3;
    return 0.5 * (a + b * u + c * u * u + d * u * u * u);
}

// --- synthesis -------------------------------------------------------------------

RadialKernel synthesize_kernel(const MultiplierExpr& m, const SpaceParams& sp,
                               const SynthesisOptions& opts) {
    if (!(opts.epsilon > 0.0)) throw std::invalid_argument("synthesize_kernel: epsilon must be positive");
    HarishChandraC hc(sp);
    const double rho = sp.rho_norm();
    const double cinf2 = hc.normalization * hc.normalization;

    RadialKernel k;
    k.epsilon = opts.epsilon;
    k.grid.resize(static_cast<size_t>(opts.n_points));
    k.values.assign(static_cast<size_t>(opts.n_points), Complex(0.0));
    const double h = 2.0 * opts.t_max / (opts.n_points - 1);
    for (int j = 0; j < opts.n_points; ++j) k.grid[static_cast<size_t>(j)] = -opts.t_max + j * h;

    const double lam_max = spectral_cutoff(m, sp, opts.epsilon);
    const double width = std::min(1.0, 8.0 / std::max(1.0, opts.t_max)) / std::pow(2.0, opts.refine);
    SpectralNodes nodes = gauss_panels(0.0, lam_max, width);

    // positive radii, split at the series crossover
    std::vector<double> ts_small, ts_large;
    std::vector<size_t> idx_small, idx_large;
    for (int j = 0; j < opts.n_points; ++j) {
        const double t = k.grid[static_cast<size_t>(j)];
        if (t <= 0.0) continue;
        if (t < opts.series_crossover) {
            ts_small.push_back(t);
            idx_small.push_back(static_cast<size_t>(j));
        } else {
            ts_large.push_back(t);
            idx_large.push_back(static_cast<size_t>(j));
        }
    }

    const int Lcap = opts.max_terms;
    std::vector<Complex> acc(k.values.size(), Complex(0.0));
    for (size_t kn = 0; kn < nodes.x.size(); ++kn) {
        const double lam = nodes.x[kn];
        const double weight = nodes.w[kn];
        Complex mval;
        try {
            mval = m.eval(Complex(lam));
        } catch (const EvalError&) {
            continue;  // isolated singular sample contributes nothing
        }
        const Complex meps = mval * std::exp(-opts.epsilon * lam * lam);
        const Complex cK = hc.expansion(Complex(lam));
        const Complex A = weight * meps * cinf2 / std::conj(cK);  // pairs with Phi_{+lambda}
        const Complex B = weight * meps * cinf2 / cK;             // pairs with Phi_{-lambda}

        // series part on t >= crossover, advancing e^{(i lam - rho) t} by recurrence
        if (!ts_large.empty()) {
            auto gam = gamma_coeffs(Complex(lam), Lcap, sp).values;
            const Complex stepP = std::exp((kI * lam - rho) * h);
            Complex phaseP = std::exp((kI * lam - rho) * ts_large.front());
            for (size_t jj = 0; jj < ts_large.size(); ++jj) {
                const double t = ts_large[jj];
                const double q = std::exp(-2.0 * t);
                const int L = std::min(Lcap, std::max(6, static_cast<int>(std::ceil(20.0 / t))));
                Complex series(0.0);
                for (int l = L; l >= 1; --l) series = (series + gam[static_cast<size_t>(l)]) * q;
                series += 1.0;
                acc[idx_large[jj]] += A * phaseP * series + B * std::conj(phaseP * series);
                phaseP *= stepP;
            }
        }

        // ODE part below the crossover: phi * density directly
        if (!ts_small.empty()) {
            const double dens = cinf2 / std::norm(cK);
            auto phis = spherical_function_ode(Complex(lam), ts_small, sp);
            for (size_t jj = 0; jj < ts_small.size(); ++jj)
                acc[idx_small[jj]] += weight * meps * phis[jj] * dens;
        }
    }

    // factor 2 folds the two spectral half-lines; mirror to negative radii
    for (int j = 0; j < opts.n_points; ++j) {
        const double t = k.grid[static_cast<size_t>(j)];
        if (t > 0.0) k.values[static_cast<size_t>(j)] = 2.0 * acc[static_cast<size_t>(j)];
    }
    for (int j = 0; j < opts.n_points; ++j) {
        const double t = k.grid[static_cast<size_t>(j)];
        if (t <= 0.0) {
            const int mirror = opts.n_points - 1 - j;
            k.values[static_cast<size_t>(j)] = k.values[static_cast<size_t>(mirror)];
        }
    }
    return k;
}

namespace {

// conj(Phi_{+lambda}) = Phi_{-lambda} holds for real lambda only; the series
// assembly above relies on it, the forward transform below recomputes both.

} // namespace

std::pair<RadialKernel, RadialKernel> split_local_global(const RadialKernel& k) {
    RadialKernel loc = k, glo = k;
    for (size_t j = 0; j < k.grid.size(); ++j) {
        const double e = eta_cutoff(k.grid[j]);
        loc.values[j] = e * k.values[j];
        glo.values[j] = (1.0 - e) * k.values[j];
    }
    return {loc, glo};
}

std::pair<Complex, Complex> splitting_kernels(const RadialKernel& k_glo, const NbarPoint& v,
                                              double t, const SpaceParams& sp) {
    const double s = t + 0.5 * iwasawa_exponent(v, sp);
    const double chi = chi_cutoff(s);
    const Complex K = k_glo.at(cartan_exponent(t, v, sp));
    return {chi * K, (1.0 - chi) * K};
}

std::pair<Complex, Complex> approximating_kernels(const RadialKernel& k_glo, const NbarPoint& v,
                                                  double t, const SpaceParams& sp) {
    const double hv = iwasawa_exponent(v, sp);
    const double chi = chi_cutoff(t + 0.5 * hv);
    const Complex K1 = chi != 0.0 ? chi * k_glo.at(t + hv) : Complex(0.0);
    const Complex K2 = chi != 1.0 ? (1.0 - chi) * k_glo.at(-t) : Complex(0.0);
    return {K1, K2};
}

RadialKernel kappa_q(const RadialKernel& k_glo, const Exponent& q, const SpaceParams& sp) {
    if (q.p > 2.0 + 1e-12) throw std::domain_error("kappa_q: q must lie in (1, 2]");
    RadialKernel out = k_glo;
    out.even = false;
    const double rate = 2.0 * sp.rho_norm() / q.p;
    for (size_t j = 0; j < out.grid.size(); ++j)
        out.values[j] = std::exp(rate * out.grid[j]) * k_glo.values[j];
    return out;
}

Complex forward_spherical_transform(const RadialKernel& k, double lambda, const SpaceParams& sp) {
    HarishChandraC hc(sp);
    const double rho = sp.rho_norm();
    const double cinf2 = hc.normalization * hc.normalization;
    const double norm = std::pow(2.0, 2.0 * rho) / (4.0 * std::numbers::pi * cinf2);
    const double h = k.grid[1] - k.grid[0];

    // phi_lambda at all positive radii: one ODE sweep below the crossover,
    // the expansion with a shared coefficient table above it
    std::vector<double> ts_small;
    std::vector<size_t> idx;
    std::vector<Complex> phi(k.grid.size(), Complex(0.0));
    const bool resonant = std::abs(lambda) < 0.05;
    for (size_t j = 0; j < k.grid.size(); ++j) {
        const double t = k.grid[j];
        if (t <= 0.0) continue;
        if (resonant || t < 0.5) {
            ts_small.push_back(t);
            idx.push_back(j);
        }
    }
    if (!ts_small.empty()) {
        auto vals = spherical_function_ode(Complex(lambda), ts_small, sp);
        for (size_t i = 0; i < idx.size(); ++i) phi[idx[i]] = vals[i];
    }
    if (!resonant) {
        auto gam = gamma_coeffs(Complex(lambda), 60, sp).values;
        const Complex cK = hc.expansion(Complex(lambda));
        for (size_t j = 0; j < k.grid.size(); ++j) {
            const double t = k.grid[j];
            if (t < 0.5) continue;
            const double q = std::exp(-2.0 * t);
            Complex series(0.0);
            for (int l = 60; l >= 1; --l) series = (series + gam[static_cast<size_t>(l)]) * q;
            series += 1.0;
            const Complex half = cK * std::exp((kI * lambda - rho) * t) * series;
            phi[j] = half + std::conj(half);  // real lambda: the -lambda half is the conjugate
        }
    }

    Complex acc(0.0);
    for (size_t j = 0; j < k.grid.size(); ++j) {
        const double t = k.grid[j];
        if (t <= 0.0) continue;
        acc += k.values[j] * phi[j] * delta_density(t, sp);
    }
    return norm * acc * h;
}

// --- spectral-shift representations ------------------------------------------------

namespace {

struct ShiftNodeData {
    double lam;
    Complex coeff;                 // weight * mtilde_eps at the node
    std::vector<Complex> gamma;    // expansion coefficients at the node
};

std::vector<ShiftNodeData> shift_nodes(const MultiplierExpr& m, const SpaceParams& sp,
                                       double shift_im, double epsilon, double t_top,
                                       int refine, int Lcap) {
    HarishChandraC hc(sp);
    const double lam_max = spectral_cutoff(m, sp, epsilon, shift_im);
    const double width = std::min(1.0, 8.0 / std::max(1.0, t_top)) / std::pow(2.0, refine);
    SpectralNodes nodes = gauss_panels(-lam_max, lam_max, width);
    std::vector<ShiftNodeData> out;
    out.reserve(nodes.x.size());
    for (size_t kn = 0; kn < nodes.x.size(); ++kn) {
        const Complex mu(nodes.x[kn], shift_im);
        ShiftNodeData d;
        d.lam = nodes.x[kn];
        Complex mval;
        try {
            mval = m.eval(mu);
        } catch (const EvalError&) {
            continue;
        }
        const Complex damp = std::exp(-epsilon * mu * mu);
        d.coeff = nodes.w[kn] * mval * damp * hc.check_inverse(mu);
        d.gamma = gamma_coeffs(mu, Lcap, sp).values;
        out.push_back(std::move(d));
    }
    return out;
}

} // namespace

std::vector<Complex> shifted_synthesis(const MultiplierExpr& m, const SpaceParams& sp,
                                       const Exponent& q, const std::vector<double>& ts,
                                       const ShiftedSynthesisOptions& opts, bool derivative) {
    for (double t : ts)
        if (t < 2.0) throw std::domain_error("shifted_synthesis: radii must satisfy t >= 2");
    HarishChandraC hc(sp);
    const double rq = rho_p(q, sp).half_width;
    const double t_top = ts.empty() ? 2.0 : *std::max_element(ts.begin(), ts.end());
    auto nodes = shift_nodes(m, sp, rq, opts.epsilon, t_top, opts.refine, opts.max_terms);

    std::vector<Complex> out(ts.size(), Complex(0.0));
    const double pref = 2.0 * hc.normalization;
    for (size_t j = 0; j < ts.size(); ++j) {
        const double t = ts[j];
        const double one_minus_eta = 1.0 - eta_cutoff(t);
        const double q_exp = std::exp(-2.0 * t);
        Complex acc(0.0), acc_d(0.0);
        for (const auto& nd : nodes) {
            Complex omega(0.0), omega_t(0.0);
            double qq = 1.0;
            for (int l = 1; l <= opts.max_terms; ++l) {
                qq *= q_exp;
                const Complex g = nd.gamma[static_cast<size_t>(l)] * qq;
                omega += g;
                omega_t += -2.0 * l * g;
            }
            const Complex phase = std::exp(kI * nd.lam * t);
            acc += nd.coeff * phase * (1.0 + omega);
            if (derivative)
                acc_d += nd.coeff * phase * (kI * nd.lam * (1.0 + omega) + omega_t);
        }
        if (!derivative) {
            out[j] = pref * one_minus_eta * acc;
        } else {
            out[j] = pref * (-eta_cutoff_d1(t) * acc + one_minus_eta * acc_d);
        }
    }
    return out;
}

std::vector<Complex> unshifted_kappa_synthesis(const MultiplierExpr& m, const SpaceParams& sp,
                                               const Exponent& q, const std::vector<double>& ts,
                                               const ShiftedSynthesisOptions& opts,
                                               bool derivative) {
    for (double t : ts)
        if (std::abs(t) < 2.0)
            throw std::domain_error("unshifted_kappa_synthesis: radii must satisfy |t| >= 2");
    HarishChandraC hc(sp);
    const double rho = sp.rho_norm();
    const double rate = 2.0 * rho / q.p;
    double t_top = 2.0;
    for (double t : ts) t_top = std::max(t_top, std::abs(t));
    auto nodes = shift_nodes(m, sp, 0.0, opts.epsilon, t_top, opts.refine, opts.max_terms);

    const double pref = 2.0 * hc.normalization;
    std::vector<Complex> out(ts.size(), Complex(0.0));
    for (size_t j = 0; j < ts.size(); ++j) {
        const double t = ts[j];
        const double s = std::abs(t);
        const double sign = t >= 0.0 ? 1.0 : -1.0;
        const double q_exp = std::exp(-2.0 * s);
        Complex K(0.0), Kd(0.0);
        for (const auto& nd : nodes) {
            Complex omega(0.0), omega_t(0.0);
            double qq = 1.0;
            for (int l = 1; l <= opts.max_terms; ++l) {
                qq *= q_exp;
                const Complex g = nd.gamma[static_cast<size_t>(l)] * qq;
                omega += g;
                omega_t += -2.0 * l * g;
            }
            const Complex phase = std::exp((kI * nd.lam - rho) * s);
            K += nd.coeff * phase * (1.0 + omega);
            if (derivative)
                Kd += nd.coeff * phase * ((kI * nd.lam - rho) * (1.0 + omega) + omega_t);
        }
        const double cut = 1.0 - eta_cutoff(s);
        K *= pref;
        Kd *= pref;
        const Complex K_full = cut * K;
        const double weight = std::exp(rate * t);
        if (!derivative) {
            out[j] = weight * K_full;
        } else {
            const Complex Kp_full = -eta_cutoff_d1(s) * K + cut * Kd;  // d/ds
            out[j] = rate * weight * K_full + weight * sign * Kp_full;
        }
    }
    return out;
}

// --- cutoff ledgers ------------------------------------------------------------------

namespace {

// int_2^inf of |2 (1-eta) e^{-beta t}| + |D^2[2 (1-eta) e^{-beta t}]| dt
double decaying_half_ledger(double beta, double rel_tol) {
    auto f = [&](double t) {
        const double e = std::exp(-beta * t);
        const double a = 2.0 * (1.0 - eta_cutoff(t)) * e;
        const double d2 = 2.0 * e *
                          (-eta_cutoff_d2(t) + 2.0 * beta * eta_cutoff_d1(t) +
                           beta * beta * (1.0 - eta_cutoff(t)));
        return std::abs(a) + std::abs(d2);
    };
    auto head = integrate_adaptive(f, 2.0, 4.0, rel_tol);
    // beyond 4 the cutoff factor is identically 1
    const double tail = 2.0 * std::exp(-4.0 * beta) / beta + 2.0 * beta * std::exp(-4.0 * beta);
    return head.value + tail;
}

} // namespace

EtaLedgerEntry eta_ell_ledger(int ell, double p, const SpaceParams& sp, double rel_tol) {
    if (ell < 0) throw std::invalid_argument("eta_ell_ledger: ell must be nonnegative");
    EtaLedgerEntry e;
    e.plus = ell >= 1 ? decaying_half_ledger(2.0 * ell, rel_tol)
                      : std::numeric_limits<double>::infinity();
    const double beta = 2.0 * sp.rho_norm() / p + 2.0 * ell;
    e.minus = decaying_half_ledger(beta, rel_tol);
    return e;
}

double varphi_ledger(double p, const SpaceParams& sp, double rel_tol) {
    const double g = 4.0 * sp.rho_norm() / p;
    auto f = [&](double t) {
        const double e = std::exp(g * t);
        const double a = (1.0 - chi_cutoff(t)) * e;
        const double d2 =
            e * (-chi_cutoff_d2(t) - 2.0 * g * chi_cutoff_d1(t) + g * g * (1.0 - chi_cutoff(t)));
        return std::abs(a) + std::abs(d2);
    };
    auto head = integrate_adaptive(f, -2.0, 2.0, rel_tol);
    // below -2 the cutoff factor is identically 1
    const double tail = (1.0 + g * g) * std::exp(-2.0 * g) / g;
    return head.value + tail;
}

double psi_v_ledger(double alpha_Hv, double rel_tol) {
    if (alpha_Hv < 0.0) throw std::invalid_argument("psi_v_ledger: alpha(H(v)) must be >= 0");
    const double shift = 0.5 * alpha_Hv;
    auto f = [&](double t) {
        const double a = chi_cutoff(t) - chi_cutoff(t - shift);
        const double d2 = chi_cutoff_d2(t) - chi_cutoff_d2(t - shift);
        return std::abs(a) + std::abs(d2);
    };
    auto res = integrate_adaptive(f, -2.0, 2.0 + shift, rel_tol);
    return res.value;
}

} // namespace rankone

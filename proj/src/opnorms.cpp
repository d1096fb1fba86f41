#include "rankone/opnorms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rankone/fft.hpp"
#include "rankone/quadrature.hpp"

namespace rankone {

LineKernel LineKernel::sample(const std::function<Complex(double)>& f, double half_width,
                              double spacing) {
    LineKernel k;
    k.t0 = -half_width;
    k.h = spacing;
    const size_t n = static_cast<size_t>(std::round(2.0 * half_width / spacing)) + 1;
    k.values.resize(n);
    for (size_t i = 0; i < n; ++i) k.values[i] = f(k.t_at(i));
    return k;
}

LineKernel LineKernel::from_radial(const RadialKernel& k) {
    LineKernel out;
    out.t0 = k.grid.front();
    out.h = k.grid[1] - k.grid[0];
    out.values = k.values;
    return out;
}

double LineKernel::l1_norm() const {
    double acc = 0.0;
    for (const auto& v : values) acc += std::abs(v);
    return acc * h;
}

bool LineKernel::edge_negligible(double tol) const {
    double peak = 0.0;
    for (const auto& v : values) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return true;
    const double edge = std::max(std::abs(values.front()), std::abs(values.back()));
    return edge <= tol * peak;
}

std::vector<Complex> mellin_transform(const LineKernel& phi, const std::vector<double>& lambdas,
                                      bool* aliasing_warning) {
    if (aliasing_warning) *aliasing_warning = !phi.edge_negligible();
    std::vector<Complex> out(lambdas.size(), Complex(0.0));
    for (size_t k = 0; k < lambdas.size(); ++k) {
        const double lam = lambdas[k];
        Complex acc(0.0);
        // phase recurrence along the uniform grid
        const Complex step = std::exp(Complex(0.0, -lam * phi.h));
        Complex ph = std::exp(Complex(0.0, -lam * phi.t0));
        for (size_t j = 0; j < phi.values.size(); ++j) {
            acc += phi.values[j] * ph;
            ph *= step;
        }
        out[k] = acc * phi.h;
    }
    return out;
}

namespace {

// |M kappa| on the zero-padded FFT grid; returns the grid values and spacing.
std::vector<double> spectral_modulus(const LineKernel& kappa, size_t pad_factor,
                                     double* dlambda) {
    size_t n = 1;
    const size_t want = kappa.values.size() * pad_factor;
    while (n < want) n <<= 1;
    std::vector<Complex> buf(n, Complex(0.0));
    std::copy(kappa.values.begin(), kappa.values.end(), buf.begin());
    fft_radix2(buf, -1);
    *dlambda = 2.0 * std::numbers::pi / (static_cast<double>(n) * kappa.h);
    std::vector<double> mod(n);
    for (size_t k = 0; k < n; ++k) mod[k] = std::abs(buf[k]) * kappa.h;
    return mod;
}

} // namespace

Cv2Result cv2_norm(const LineKernel& kappa) {
    Cv2Result res;
    res.aliasing_warning = !kappa.edge_negligible();
    double dlam = 0.0;
    auto mod = spectral_modulus(kappa, 8, &dlam);
    size_t kmax = 0;
    for (size_t k = 0; k < mod.size(); ++k)
        if (mod[k] > mod[kmax]) kmax = k;
    // polish around the grid maximum with direct evaluations
    const double n = static_cast<double>(mod.size());
    double lam0 = static_cast<double>(kmax) * dlam;
    if (kmax > mod.size() / 2) lam0 -= n * dlam;  // wrap to the symmetric range
    double lo = lam0 - dlam, hi = lam0 + dlam;
    double best = mod[kmax];
    for (int iter = 0; iter < 40; ++iter) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        const auto v = mellin_transform(kappa, {m1, m2});
        const double f1 = std::abs(v[0]), f2 = std::abs(v[1]);
        best = std::max({best, f1, f2});
        if (f1 < f2) lo = m1;
        else hi = m2;
    }
    res.value = best;
    return res;
}

namespace {

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(uint64_t seed) : gen(seed) {}
    double uniform(double a, double b) {
        // fixed 53-bit mapping, stable across platforms
        const uint64_t bits = gen() >> 11;
        return a + (b - a) * (static_cast<double>(bits) * 0x1.0p-53);
    }
    double normal() {
        const double u1 = std::max(uniform(0.0, 1.0), 1e-300);
        const double u2 = uniform(0.0, 1.0);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
};

std::vector<Complex> random_mixture(Rng& rng, const LineKernel& grid) {
    const int n_comp = 1 + static_cast<int>(rng.uniform(0.0, 4.0));
    struct Comp {
        double center, width, mu;
        Complex amp;
    };
    std::vector<Comp> comps;
    for (int c = 0; c < n_comp; ++c) {
        Comp cm;
        cm.center = rng.uniform(-8.0, 8.0);
        cm.width = std::exp(rng.uniform(std::log(0.25), std::log(5.0)));
        cm.mu = rng.uniform(0.0, 1.0) < 0.4 ? 0.0 : rng.uniform(-16.0, 16.0);
        cm.amp = Complex(rng.normal(), rng.normal());
        comps.push_back(cm);
    }
    std::vector<Complex> f(grid.values.size(), Complex(0.0));
    for (size_t j = 0; j < f.size(); ++j) {
        const double t = grid.t_at(j);
        for (const auto& cm : comps) {
            const double g = std::exp(-0.5 * (t - cm.center) * (t - cm.center) /
                                      (cm.width * cm.width));
            f[j] += cm.amp * g * std::exp(Complex(0.0, cm.mu * t));
        }
    }
    return f;
}

double lp_norm(const std::vector<Complex>& v, double p, double h) {
    double acc = 0.0;
    for (const auto& x : v) acc += std::pow(std::abs(x), p);
    return std::pow(acc * h, 1.0 / p);
}

} // namespace

CvpBound cvp_bound(const LineKernel& kappa, const Exponent& p, uint64_t seed,
                   int n_test_functions) {
    if (p.p > 2.0 + 1e-12) throw std::domain_error("cvp_bound: p must lie in (1, 2]");
    CvpBound out;
    const double theta = 2.0 - 2.0 / p.p;  // interpolation weight between L1 and L2
    out.upper = std::pow(kappa.l1_norm(), 1.0 - theta) * std::pow(cv2_norm(kappa).value, theta);

    // FFT of the kernel once; convolve each test function in the spectral domain
    const size_t want = 2 * kappa.values.size();
    size_t n = 1;
    while (n < want) n <<= 1;
    std::vector<Complex> fk(n, Complex(0.0));
    std::copy(kappa.values.begin(), kappa.values.end(), fk.begin());
    fft_radix2(fk, -1);

    Rng rng(seed);
    double best = 0.0;
    for (int trial = 0; trial < n_test_functions; ++trial) {
        auto f = random_mixture(rng, kappa);
        const double fn = lp_norm(f, p.p, kappa.h);
        if (fn < 1e-12) continue;
        std::vector<Complex> ff(n, Complex(0.0));
        std::copy(f.begin(), f.end(), ff.begin());
        fft_radix2(ff, -1);
        for (size_t i = 0; i < n; ++i) ff[i] *= fk[i];
        fft_radix2(ff, +1);
        const double inv = 1.0 / static_cast<double>(n);
        std::vector<Complex> conv(kappa.values.size() * 2 - 1);
        for (size_t i = 0; i < conv.size(); ++i) conv[i] = ff[i] * inv * kappa.h;
        best = std::max(best, lp_norm(conv, p.p, kappa.h) / fn);
    }
    out.lower = best;
    return out;
}

LipResult lip_norm(const LineKernel& kappa) {
    auto sup_at_stride = [&](size_t stride) {
        double sup = 0.0;
        const size_t n = kappa.values.size();
        const size_t window = std::max<size_t>(1, static_cast<size_t>(1.0 / (kappa.h * stride)));
        for (size_t i = 0; i < n; i += stride) {
            for (size_t w = 1; w <= window; ++w) {
                const size_t j = i + w * stride;
                if (j >= n) break;
                const double dt = kappa.h * static_cast<double>(w * stride);
                sup = std::max(sup, std::abs(kappa.values[j] - kappa.values[i]) / dt);
            }
        }
        return sup;
    };
    const double l4 = sup_at_stride(4);
    const double l2 = sup_at_stride(2);
    const double l1 = sup_at_stride(1);
    LipResult res;
    res.value = l1;
    res.drift = std::abs(l1 - l2) / std::max(l1, 1e-300);
    if (l2 > 1.25 * l4 && l1 > 1.25 * l2) {
        res.flag = QuantityFlag::Divergent;
    } else {
        res.flag = res.drift < 0.05 ? QuantityFlag::Stable : QuantityFlag::Divergent;
    }
    return res;
}

MelProductResult mel_product_bound(const LineKernel& phi, const LineKernel& kappa) {
    MelProductResult res;
    double dlam = 0.0;
    auto mod = spectral_modulus(phi, 4, &dlam);
    double l1_mphi = 0.0;
    for (double v : mod) l1_mphi += v;
    l1_mphi *= dlam;

    res.bound = l1_mphi * cv2_norm(kappa).value;

    LineKernel prod = kappa;
    if (phi.values.size() != kappa.values.size() || phi.h != kappa.h || phi.t0 != kappa.t0)
        throw std::invalid_argument("mel_product_bound: phi and kappa must share one grid");
    for (size_t i = 0; i < prod.values.size(); ++i) prod.values[i] *= phi.values[i];
    res.cv2_product = cv2_norm(prod).value;
    res.pass = res.cv2_product <= res.bound * (1.0 + 1e-9);

    res.phi_l1 = phi.l1_norm();
    double acc = 0.0;
    for (size_t i = 1; i + 1 < phi.values.size(); ++i)
        acc += std::abs(phi.values[i + 1] - 2.0 * phi.values[i] + phi.values[i - 1]) / (phi.h * phi.h);
    res.phi_d2_l1 = acc * phi.h;
    return res;
}

double transference_bound(const std::function<Complex(const NbarPoint&, double)>& K,
                          const Exponent& p, const SpaceParams& sp, TransferenceMode mode,
                          const TransferenceOptions& opts) {
    const double rate = 2.0 * sp.rho_norm() / p.p;
    if (mode == TransferenceMode::Integral) {
        auto per_v = [&](const NbarPoint& v) {
            auto f = [&](double t) { return std::exp(rate * t) * std::abs(K(v, t)); };
            return integrate_adaptive(f, -opts.t_half_width, opts.t_half_width, opts.t_rel_tol)
                .value;
        };
        return nbar_quadrature(per_v, sp, opts.nbar_rel_tol);
    }
    auto per_v = [&](const NbarPoint& v) {
        LineKernel line = LineKernel::sample(
            [&](double t) { return std::exp(rate * t) * K(v, t); }, opts.t_half_width,
            opts.t_spacing);
        return cvp_bound(line, p, 0, 0).upper;
    };
    return nbar_quadrature(per_v, sp, opts.nbar_rel_tol);
}

} // namespace rankone

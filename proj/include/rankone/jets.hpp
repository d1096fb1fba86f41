#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace rankone {

using Complex = std::complex<double>;

/// Raised by jet arithmetic when an operation hits a singular point
/// (division by a zero value, log/sqrt/power of zero).
struct JetSingularity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Truncated Taylor expansion of an analytic function at a point.
///
/// Internally stores Taylor coefficients c_j = f^(j)/j!; derivative(j)
/// converts back.  All operations truncate at the common order.
class Jet {
  public:
    Jet() : c_(1, Complex(0.0)) {}
    Jet(std::vector<Complex> taylor) : c_(std::move(taylor)) {
        if (c_.empty()) c_.assign(1, Complex(0.0));
    }

    static Jet constant(Complex v, int order) {
        std::vector<Complex> c(static_cast<size_t>(order) + 1, Complex(0.0));
        c[0] = v;
        return Jet(std::move(c));
    }
    static Jet variable(Complex v, int order) {
        Jet j = constant(v, order);
        if (order >= 1) j.c_[1] = Complex(1.0);
        return j;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    Complex value() const { return c_[0]; }
    Complex taylor(int j) const { return c_[static_cast<size_t>(j)]; }

    /// j-th derivative f^(j) = c_j * j!.
    Complex derivative(int j) const {
        double fact = 1.0;
        for (int k = 2; k <= j; ++k) fact *= k;
        return c_[static_cast<size_t>(j)] * fact;
    }

    Jet operator-() const {
        Jet r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        Jet r = a;
        for (size_t j = 0; j < r.c_.size(); ++j) r.c_[j] += b.c_[j];
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b) {
        Jet r = a;
        for (size_t j = 0; j < r.c_.size(); ++j) r.c_[j] -= b.c_[j];
        return r;
    }
    friend Jet operator*(const Jet& a, const Jet& b) {
        const size_t n = a.c_.size();
        std::vector<Complex> c(n, Complex(0.0));
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; j + k < n; ++k) c[j + k] += a.c_[j] * b.c_[k];
        return Jet(std::move(c));
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        if (b.c_[0] == Complex(0.0)) throw JetSingularity("division by zero value");
        const size_t n = a.c_.size();
        std::vector<Complex> q(n, Complex(0.0));
        for (size_t k = 0; k < n; ++k) {
            Complex acc = a.c_[k];
            for (size_t j = 0; j < k; ++j) acc -= q[j] * b.c_[k - j];
            q[k] = acc / b.c_[0];
        }
        return Jet(std::move(q));
    }

    friend Jet operator+(const Jet& a, Complex s) { Jet r = a; r.c_[0] += s; return r; }
    friend Jet operator+(Complex s, const Jet& a) { return a + s; }
    friend Jet operator-(const Jet& a, Complex s) { Jet r = a; r.c_[0] -= s; return r; }
    friend Jet operator-(Complex s, const Jet& a) { return (-a) + s; }
    friend Jet operator*(const Jet& a, Complex s) {
        Jet r = a;
        for (auto& x : r.c_) x *= s;
        return r;
    }
    friend Jet operator*(Complex s, const Jet& a) { return a * s; }
    friend Jet operator/(const Jet& a, Complex s) {
        if (s == Complex(0.0)) throw JetSingularity("division by zero constant");
        Jet r = a;
        for (auto& x : r.c_) x /= s;
        return r;
    }
    friend Jet operator/(Complex s, const Jet& a) { return constant(s, a.order()) / a; }

  private:
    std::vector<Complex> c_;

    friend Jet exp(const Jet& a);
    friend Jet log(const Jet& a);
    friend Jet sqrt(const Jet& a);
    friend Jet sin(const Jet& a);
    friend Jet cos(const Jet& a);
};

inline Jet exp(const Jet& a) {
    const size_t n = a.c_.size();
    std::vector<Complex> e(n, Complex(0.0));
    e[0] = std::exp(a.c_[0]);
    // k e_k = sum_{j=1..k} j a_j e_{k-j}
    for (size_t k = 1; k < n; ++k) {
        Complex acc(0.0);
        for (size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * a.c_[j] * e[k - j];
        e[k] = acc / static_cast<double>(k);
    }
    return Jet(std::move(e));
}

inline Jet log(const Jet& a) {
    if (a.c_[0] == Complex(0.0)) throw JetSingularity("log of zero value");
    const size_t n = a.c_.size();
    std::vector<Complex> l(n, Complex(0.0));
    l[0] = std::log(a.c_[0]);
    // k a_k = sum_{j=1..k} j l_j a_{k-j}
    for (size_t k = 1; k < n; ++k) {
        Complex acc = static_cast<double>(k) * a.c_[k];
        for (size_t j = 1; j < k; ++j) acc -= static_cast<double>(j) * l[j] * a.c_[k - j];
        l[k] = acc / (static_cast<double>(k) * a.c_[0]);
    }
    return Jet(std::move(l));
}

inline Jet sqrt(const Jet& a) {
    if (a.c_[0] == Complex(0.0)) throw JetSingularity("sqrt of zero value");
    const size_t n = a.c_.size();
    std::vector<Complex> s(n, Complex(0.0));
    s[0] = std::sqrt(a.c_[0]);
    for (size_t k = 1; k < n; ++k) {
        Complex acc = a.c_[k];
        for (size_t j = 1; j < k; ++j) acc -= s[j] * s[k - j];
        s[k] = acc / (2.0 * s[0]);
    }
    return Jet(std::move(s));
}

inline Jet sin(const Jet& a) {
    const size_t n = a.c_.size();
    std::vector<Complex> s(n), c(n);
    s[0] = std::sin(a.c_[0]);
    c[0] = std::cos(a.c_[0]);
    for (size_t k = 1; k < n; ++k) {
        Complex as(0.0), ac(0.0);
        for (size_t j = 1; j <= k; ++j) {
            as += static_cast<double>(j) * a.c_[j] * c[k - j];
            ac += static_cast<double>(j) * a.c_[j] * s[k - j];
        }
        s[k] = as / static_cast<double>(k);
        c[k] = -ac / static_cast<double>(k);
    }
    return Jet(std::move(s));
}

inline Jet cos(const Jet& a) {
    const size_t n = a.c_.size();
    std::vector<Complex> s(n), c(n);
    s[0] = std::sin(a.c_[0]);
    c[0] = std::cos(a.c_[0]);
    for (size_t k = 1; k < n; ++k) {
        Complex as(0.0), ac(0.0);
        for (size_t j = 1; j <= k; ++j) {
            as += static_cast<double>(j) * a.c_[j] * c[k - j];
            ac += static_cast<double>(j) * a.c_[j] * s[k - j];
        }
        s[k] = as / static_cast<double>(k);
        c[k] = -ac / static_cast<double>(k);
    }
    return Jet(std::move(c));
}

/// a^w for constant exponent w: exp(w log a), with integer fast path that
/// also covers zero base.
inline Jet pow(const Jet& a, Complex w) {
    const double wr = w.real();
    if (w.imag() == 0.0 && wr == std::floor(wr) && std::abs(wr) <= 64.0) {
        int k = static_cast<int>(wr);
        if (k == 0) return Jet::constant(Complex(1.0), a.order());
        bool inv = k < 0;
        k = std::abs(k);
        Jet r = a;
        for (int i = 1; i < k; ++i) r = r * a;
        if (!inv) return r;
        return Complex(1.0) / r;  // throws on zero value
    }
    return exp(log(a) * w);
}

/// a^b with jet exponent: exp(b log a).
inline Jet pow(const Jet& a, const Jet& b) { return exp(log(a) * b); }

/// Value and derivatives of an analytic function at a complex point.
struct ComplexJet {
    Complex center;
    std::vector<Complex> derivs;  // derivs[j] = f^(j)(center), j = 0..N

    int order() const { return static_cast<int>(derivs.size()) - 1; }
    Complex value() const { return derivs.at(0); }
    Complex derivative(int j) const { return derivs.at(static_cast<size_t>(j)); }

    static ComplexJet from_jet(Complex center, const Jet& jet) {
        ComplexJet out;
        out.center = center;
        out.derivs.resize(static_cast<size_t>(jet.order()) + 1);
        for (int j = 0; j <= jet.order(); ++j) out.derivs[static_cast<size_t>(j)] = jet.derivative(j);
        return out;
    }
};

} // namespace rankone

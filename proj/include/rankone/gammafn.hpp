#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rankone/jets.hpp"

namespace rankone {

struct GammaPole : std::domain_error {
    using std::domain_error::domain_error;
};

namespace detail {

inline Complex value_of(Complex z) { return z; }
inline Complex value_of(const Jet& z) { return z.value(); }

// Lanczos coefficients, g = 7, 9 terms; relative accuracy ~1e-13 on Re z >= 1/2.
inline constexpr double kLanczos[9] = {
    0.99999999999980993,   676.5203681218851,    -1259.1392167224028,
    771.32342877765313,    -176.61502916214059,  12.507343278686905,
    -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};

inline void check_not_pole(Complex z0) {
    if (z0.imag() == 0.0 && z0.real() <= 0.0 && z0.real() == std::floor(z0.real()))
        throw GammaPole("gamma: pole at nonpositive integer");
}

} // namespace detail

/// log(sin w), stable for large |Im w| (splits off the dominant exponential).
template <class T>
T log_sin(const T& w) {
    using std::numbers::pi;
    const Complex w0 = detail::value_of(w);
    const Complex kI(0.0, 1.0);
    if (w0.imag() > 1.0) {
        // sin w = -e^{-iw} (1 - e^{2iw}) / (2i)
        return w * (-kI) + log(Complex(1.0) - exp(w * (2.0 * kI))) +
               Complex(std::log(0.5), 0.5 * pi);
    }
    if (w0.imag() < -1.0) {
        // sin w = e^{iw} (1 - e^{-2iw}) / (2i)
        return w * kI + log(Complex(1.0) - exp(w * (-2.0 * kI))) +
               Complex(std::log(0.5), -0.5 * pi);
    }
    return log(sin(w));
}

/// log Gamma by Lanczos, reflection for Re z < 1/2.  The imaginary part is not
/// reduced to a principal branch; only exp(log_gamma) and differences of sums
/// are meaningful.  Throws GammaPole at the nonpositive integers.
template <class T>
T log_gamma(const T& z) {
    using std::numbers::pi;
    const Complex z0 = detail::value_of(z);
    detail::check_not_pole(z0);
    if (z0.real() < 0.5) {
        return Complex(std::log(pi)) - log_sin(z * Complex(pi)) - log_gamma(Complex(1.0) - z);
    }
    T w = z - Complex(1.0);
    T acc = w * Complex(0.0) + Complex(detail::kLanczos[0]);
    for (int i = 1; i < 9; ++i)
        acc = acc + Complex(detail::kLanczos[i]) / (w + Complex(static_cast<double>(i)));
    T t = w + Complex(7.5);
    return Complex(0.5 * std::log(2.0 * pi)) + (w + Complex(0.5)) * log(t) - t + log(acc);
}

/// Complex gamma function by the Lanczos approximation.  Accurate to ~1e-13;
/// for arguments with large imaginary part prefer log_gamma.
template <class T>
T gamma_fn(const T& z) {
    using std::numbers::pi;
    const Complex z0 = detail::value_of(z);
    detail::check_not_pole(z0);
    if (z0.real() < 0.5) {
        return Complex(pi) / (sin(z * Complex(pi)) * gamma_fn(Complex(1.0) - z));
    }
    T w = z - Complex(1.0);
    T acc = w * Complex(0.0) + Complex(detail::kLanczos[0]);
    for (int i = 1; i < 9; ++i)
        acc = acc + Complex(detail::kLanczos[i]) / (w + Complex(static_cast<double>(i)));
    T t = w + Complex(7.5);
    return Complex(std::sqrt(2.0 * pi)) * exp((w + Complex(0.5)) * log(t) - t) * acc;
}

} // namespace rankone

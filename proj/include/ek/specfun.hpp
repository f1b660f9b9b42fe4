#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ek {

/// Termination control for the power series in hyp2f1 and mainardi_m.
struct SeriesControl {
    double tol = 1e-14;
    std::size_t max_terms = 1'000'000;

    void validate() const {
        if (!(tol > 0.0) || tol < std::numeric_limits<double>::epsilon() / 2)
            throw std::invalid_argument("SeriesControl: tol must be positive and >= eps");
        if (max_terms < 1)
            throw std::invalid_argument("SeriesControl: max_terms must be >= 1");
    }
};

namespace detail {

// Lanczos g=7, n=9 coefficients (Godfrey). Gives ~15 correct digits for
// double precision on the positive axis.
inline constexpr long double lanczos_g = 7.0L;
inline constexpr long double lanczos_coeff[9] = {
    0.99999999999980993L,
    676.5203681218851L,
    -1259.1392167224028L,
    771.32342877765313L,
    -176.61502916214059L,
    12.507343278686905L,
    -0.13857109526572012L,
    9.9843695780195716e-6L,
    1.5056327351493116e-7L,
};

inline double lanczos_gamma_positive(double x) {
    // valid for x >= 0.5; evaluated in long double so that the pow/exp
    // rounding at large arguments stays below double precision
    const long double lx = static_cast<long double>(x);
    long double a = lanczos_coeff[0];
    for (int i = 1; i < 9; ++i) a += lanczos_coeff[i] / (lx - 1.0L + i);
    const long double t = lx - 0.5L + lanczos_g;
    return static_cast<double>(std::sqrt(2.0L * std::numbers::pi_v<long double>) *
                               std::pow(t, lx - 0.5L) * std::exp(-t) * a);
}

inline bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

}  // namespace detail

/// Real gamma function via the Lanczos approximation with reflection for
/// x < 0.5. Throws on the poles at 0, -1, -2, ...
inline double gamma_real(double x) {
    if (std::isnan(x)) throw std::domain_error("gamma_real: NaN argument");
    if (detail::is_nonpositive_integer(x))
        throw std::domain_error("gamma_real: pole at non-positive integer x=" + std::to_string(x));
    if (x > 171.61447887182298)
        throw std::overflow_error("gamma_real: overflow for x=" + std::to_string(x));
    if (x < 0.5) {
        // reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x))
        return std::numbers::pi /
               (std::sin(std::numbers::pi * x) * detail::lanczos_gamma_positive(1.0 - x));
    }
    return detail::lanczos_gamma_positive(x);
}

/// Reciprocal gamma, 1/Gamma(x). Entire: returns 0 at the poles of Gamma.
inline double rgamma(double x) {
    if (detail::is_nonpositive_integer(x)) return 0.0;
    if (x < 0.5)
        return std::sin(std::numbers::pi * x) * detail::lanczos_gamma_positive(1.0 - x) /
               std::numbers::pi;
    if (x > 171.61447887182298) return 0.0;  // underflow
    return 1.0 / detail::lanczos_gamma_positive(x);
}

/// Pochhammer symbol (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1.
inline double pochhammer(double a, std::size_t k) {
    double p = 1.0;
    for (std::size_t j = 0; j < k; ++j) p *= a + static_cast<double>(j);
    return p;
}

namespace detail {

// Raw defining series of 2F1; converges for |z| < 1 and, when c-a-b > 0,
// at z = 1 as well (slowly).
inline double hyp2f1_series(double a, double b, double c, double z, const SeriesControl& ctrl) {
    double term = 1.0;
    double sum = 1.0;
    for (std::size_t k = 0; k < ctrl.max_terms; ++k) {
        const double kk = static_cast<double>(k);
        term *= (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0)) * z;
        sum += term;
        if (std::abs(term) <= ctrl.tol * std::abs(sum)) return sum;
    }
    throw std::runtime_error("hyp2f1: series did not converge within max_terms");
}

}  // namespace detail

/// Gauss hypergeometric function 2F1(a,b;c;z) for z in [0,1].
/// Near z=1 the connection formula in powers of (1-z) is used, which needs
/// c-a-b non-integer (true for the operator weights where c-a-b = beta).
inline double hyp2f1(double a, double b, double c, double z, const SeriesControl& ctrl = {}) {
    ctrl.validate();
    if (detail::is_nonpositive_integer(c))
        throw std::domain_error("hyp2f1: c is a non-positive integer");
    if (z < 0.0 || z > 1.0) throw std::domain_error("hyp2f1: z outside [0,1]");
    if (z == 0.0) return 1.0;

    const double s = c - a - b;
    if (z == 1.0) {
        if (!(s > 0.0)) throw std::domain_error("hyp2f1: divergent at z=1 (c-a-b <= 0)");
        // Gauss summation
        return gamma_real(c) * gamma_real(s) / (gamma_real(c - a) * gamma_real(c - b));
    }
    if (z > 0.9 && s != std::floor(s)) {
        // connection formula about z=1
        const double w = 1.0 - z;
        const double t1 = gamma_real(c) * gamma_real(s) /
                          (gamma_real(c - a) * gamma_real(c - b)) *
                          detail::hyp2f1_series(a, b, 1.0 - s, w, ctrl);
        const double t2 = std::pow(w, s) * gamma_real(c) * gamma_real(-s) /
                          (gamma_real(a) * gamma_real(b)) *
                          detail::hyp2f1_series(c - a, c - b, 1.0 + s, w, ctrl);
        return t1 + t2;
    }
    return detail::hyp2f1_series(a, b, c, z, ctrl);
}

/// Mainardi (M-Wright) function M_mu(z) for 0 < mu < 1, z >= 0, by the
/// series sum_n (-z)^n / (n! Gamma(-mu n + 1 - mu)). The alternating terms
/// grow before decaying; evaluation fails loudly once cancellation would
/// eat more digits than the requested tolerance.
inline double mainardi_m(double mu, double z, const SeriesControl& ctrl = {}) {
    ctrl.validate();
    if (!(mu > 0.0 && mu < 1.0)) throw std::domain_error("mainardi_m: mu outside (0,1)");
    if (z < 0.0) throw std::domain_error("mainardi_m: negative z");

    double sum = 0.0;
    double max_term = 0.0;
    double zpow = 1.0;     // (-z)^n
    double inv_fact = 1.0; // 1/n!
    int small_streak = 0;  // rgamma zeros at its poles, so one small term is not enough
    for (std::size_t n = 0; n < ctrl.max_terms; ++n) {
        const double nn = static_cast<double>(n);
        const double term = zpow * inv_fact * rgamma(-mu * nn + 1.0 - mu);
        sum += term;
        max_term = std::max(max_term, std::abs(term));
        if (n > 0 && std::abs(term) <= ctrl.tol * std::abs(sum))
            ++small_streak;
        else
            small_streak = 0;
        if (small_streak >= 3) {
            if (max_term * ctrl.tol > std::abs(sum))
                throw std::runtime_error("mainardi_m: cancellation loss beyond tolerance");
            return sum;
        }
        zpow *= -z;
        inv_fact /= (nn + 1.0);
    }
    throw std::runtime_error("mainardi_m: series did not converge within max_terms");
}

/// Alternative series for M_mu, used as a cross-check only:
/// (1/pi) sum_{n>=1} (-z)^{n-1}/(n-1)! Gamma(mu n) sin(pi mu n).
inline double mainardi_m_alt(double mu, double z, const SeriesControl& ctrl = {}) {
    ctrl.validate();
    if (!(mu > 0.0 && mu < 1.0)) throw std::domain_error("mainardi_m_alt: mu outside (0,1)");
    if (z < 0.0) throw std::domain_error("mainardi_m_alt: negative z");

    double sum = 0.0;
    double max_term = 0.0;
    double zpow = 1.0;     // (-z)^{n-1}
    double inv_fact = 1.0; // 1/(n-1)!
    int small_streak = 0;  // sin(pi mu n) vanishes periodically for rational mu
    for (std::size_t n = 1; n < ctrl.max_terms; ++n) {
        const double nn = static_cast<double>(n);
        const double term =
            zpow * inv_fact * gamma_real(mu * nn) * std::sin(std::numbers::pi * mu * nn);
        sum += term;
        max_term = std::max(max_term, std::abs(term));
        if (n > 1 && std::abs(term) <= ctrl.tol * std::abs(sum))
            ++small_streak;
        else
            small_streak = 0;
        if (small_streak >= 3) {
            if (max_term * ctrl.tol > std::abs(sum))
                throw std::runtime_error("mainardi_m_alt: cancellation loss beyond tolerance");
            return sum / std::numbers::pi;
        }
        zpow *= -z;
        inv_fact /= nn;
    }
    throw std::runtime_error("mainardi_m_alt: series did not converge within max_terms");
}

/// Closed form M_{1/2}(z) = exp(-z^2/4)/sqrt(pi).
inline double mainardi_half(double z) {
    return std::exp(-z * z / 4.0) / std::sqrt(std::numbers::pi);
}

}  // namespace ek

#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ek/quadrature.hpp"
#include "ek/specfun.hpp"

namespace ek {

/// Parameter pair (alpha, beta) of the Erdelyi-Kober diffusion problem.
struct OperatorParams {
    double alpha;
    double beta;

    double eta() const { return alpha / beta; }

    void validate() const {
        if (!(alpha > 0.0 && alpha < 2.0))
            throw std::domain_error("OperatorParams: alpha outside (0,2)");
        if (!(beta > 0.0 && beta <= 1.0))
            throw std::domain_error("OperatorParams: beta outside (0,1]");
    }
};

/// Quadrature weights c_{n,i} (i = 1..n) of the discrete EK integral
/// operator, optionally with the hypergeometric weights d_{n,i}.
struct WeightTable {
    std::size_t n = 0;
    std::vector<double> c;
    std::vector<double> d;  // empty unless derivative_weights filled it
};

/// Uniform samples phi(t_0), ..., phi(t_n) with t_i = i * tau.
struct SampleSeries {
    double tau;
    std::vector<double> values;

    std::size_t steps() const { return values.empty() ? 0 : values.size() - 1; }
};

namespace detail {

// g(x) = 1 - (1 - x^eta)^beta, accurate at both ends: for small x the
// direct form rounds to 1 - 1 = 0 even though g ~ x^{eta beta} is the
// entire first weight (e.g. eta = 9, beta = 0.1, x = 1e-2)
inline double weight_cdf(double x, double eta, double beta) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double t = eta * std::log(x);  // log(u) with u = x^eta
    const double log_one_minus_u =
        t < -0.6931 ? std::log1p(-std::exp(t)) : std::log(-std::expm1(t));
    return -std::expm1(beta * log_one_minus_u);
}

}  // namespace detail

/// Rectangle-rule weights c_{n,i} of the discrete EK integral operator:
/// c_{n,i} = [ (1-((i-1)/n)^{a/b})^b - (1-(i/n)^{a/b})^b ] / (b Gamma(b)).
inline WeightTable integral_weights(const OperatorParams& params, std::size_t n) {
    params.validate();
    if (n < 1) throw std::invalid_argument("integral_weights: n must be >= 1");
    const double eta = params.eta();
    const double beta = params.beta;
    const double norm = 1.0 / (beta * gamma_real(beta));

    WeightTable table;
    table.n = n;
    table.c.resize(n);
    // c_{n,i} = (g(i/n) - g((i-1)/n)) / (b Gamma(b)) with g = 1 - (1-x^{a/b})^b
    double prev = 0.0;  // g(0)
    for (std::size_t i = 1; i <= n; ++i) {
        const double cur =
            detail::weight_cdf(static_cast<double>(i) / static_cast<double>(n), eta, beta);
        table.c[i - 1] = (cur - prev) * norm;
        prev = cur;
    }
    return table;
}

/// Weight tables for steps n and n-1 (the G operator needs both).
inline std::pair<WeightTable, WeightTable> integral_weight_pair(const OperatorParams& params,
                                                                std::size_t n) {
    if (n < 2) throw std::invalid_argument("integral_weight_pair: n must be >= 2");
    return {integral_weights(params, n), integral_weights(params, n - 1)};
}

/// Hypergeometric weights d_{n,i} of the alternative discrete derivative:
/// the exact integral of tau^{a/b} (1 - tau^{a/b})^{b-1} over
/// [(i-1)/n, i/n], expressed through 2F1.
inline WeightTable derivative_weights(const OperatorParams& params, std::size_t n,
                                      const SeriesControl& ctrl = {}) {
    params.validate();
    if (!(params.beta < 1.0))
        throw std::domain_error("derivative_weights: beta must be < 1 for the 2F1 form");
    if (n < 1) throw std::invalid_argument("derivative_weights: n must be >= 1");
    const double eta = params.eta();
    const double a = 1.0 - params.beta;
    const double b = 1.0 + params.beta / params.alpha;
    const double c = 2.0 + params.beta / params.alpha;
    const double scale = params.beta / (params.alpha + params.beta);  // 1/(eta+1)

    WeightTable table = integral_weights(params, n);
    table.d.resize(n);
    double prev = 0.0;  // x^{eta+1} 2F1(...) at x = 0
    for (std::size_t i = 1; i <= n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n);
        const double z = std::pow(x, eta);
        const double cur = std::pow(x, eta + 1.0) * hyp2f1(a, b, c, z, ctrl);
        table.d[i - 1] = scale * (cur - prev);
        prev = cur;
    }
    return table;
}

namespace detail {

// Kahan-compensated dot product: the G operator multiplies L(t_n) - L(t_{n-1})
// by n, so the O(sqrt(n) eps) error of naive summation would be amplified to
// ~1e-8 at n ~ 1e6 and drown the Aitken differences of the smooth cases.
inline double apply_L_with(const WeightTable& table, const SampleSeries& series) {
    if (table.n > series.steps())
        throw std::invalid_argument("apply_L: weight/sample length mismatch");
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 1; i <= table.n; ++i) {
        const double y = table.c[i - 1] * series.values[i] - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

}  // namespace detail

/// Discrete EK integral L phi(t_n) = sum_{i=1}^n c_{n,i} phi(t_i).
inline double apply_L(const OperatorParams& params, const SampleSeries& series) {
    const std::size_t n = series.steps();
    if (n < 1) throw std::invalid_argument("apply_L: series needs at least one step");
    return detail::apply_L_with(integral_weights(params, n), series);
}

/// Discrete EK derivative via the backward difference of L:
/// G phi(t_n) = beta L(t_n) + (beta/alpha) (t_n/tau) (L(t_n) - L(t_{n-1})).
/// For n = 1 the L(t_0) term is the empty sum, i.e. zero.
inline double apply_G(const OperatorParams& params, const SampleSeries& series) {
    const std::size_t n = series.steps();
    if (n < 1) throw std::invalid_argument("apply_G: series needs at least one step");
    params.validate();
    const double t_n = static_cast<double>(n) * series.tau;
    const double L_n = detail::apply_L_with(integral_weights(params, n), series);
    const double L_nm1 =
        n >= 2 ? detail::apply_L_with(integral_weights(params, n - 1), series) : 0.0;
    return params.beta * L_n +
           (params.beta / params.alpha) * (t_n / series.tau) * (L_n - L_nm1);
}

/// Discrete EK derivative via the hypergeometric weights:
/// K phi(t_n) = beta L(t_n) + (1/Gamma(beta)) [ sum_{i=2}^n
///   (d_{n,i-1}-d_{n,i}) n phi(t_{i-1}) + n d_{n,n} phi(t_n) - n d_{n,1} phi(0) ].
inline double apply_K(const OperatorParams& params, const SampleSeries& series,
                      const SeriesControl& ctrl = {}) {
    const std::size_t n = series.steps();
    if (n < 1) throw std::invalid_argument("apply_K: series needs at least one step");
    const WeightTable table = derivative_weights(params, n, ctrl);
    const double L_n = detail::apply_L_with(table, series);
    const double nn = static_cast<double>(n);
    double diff_sum = 0.0, comp = 0.0;
    auto add = [&](double term) {
        const double y = term - comp;
        const double t = diff_sum + y;
        comp = (t - diff_sum) - y;
        diff_sum = t;
    };
    for (std::size_t i = 2; i <= n; ++i)
        add((table.d[i - 2] - table.d[i - 1]) * nn * series.values[i - 1]);
    add(nn * table.d[n - 1] * series.values[n]);
    add(-nn * table.d[0] * series.values[0]);
    return params.beta * L_n + diff_sum / gamma_real(params.beta);
}

namespace detail {

// x(v) = (1 - v^{1/beta})^{1/eta}, the substitution v = (1 - x^eta)^beta
// that absorbs both endpoint singularities of the EK kernel
inline double ek_kernel_substitution(double v, double eta, double beta) {
    if (v <= 0.0) return 1.0;
    if (v >= 1.0) return 0.0;
    const double one_minus = -std::expm1(std::log(v) / beta);
    return std::pow(one_minus, 1.0 / eta);
}

}  // namespace detail

/// EK integral I phi(t) by adaptive quadrature of the normalized form
/// (eta/Gamma(beta)) int_0^1 x^{eta-1} (1-x^eta)^{beta-1} phi(x t) dx.
/// The substitution v = (1-x^eta)^beta turns this into
/// (1/Gamma(beta+1)) int_0^1 phi(x(v) t) dv with a bounded integrand, so
/// no kernel mass is lost at the endpoints.
template <typename F>
    requires std::invocable<F&, double>
inline double exact_integral_quadrature(const OperatorParams& params, F&& phi, double t,
                                        double tol) {
    params.validate();
    if (!(t > 0.0)) throw std::domain_error("exact_integral_quadrature: t must be > 0");
    const double eta = params.eta();
    const double beta = params.beta;
    const double norm = 1.0 / (beta * gamma_real(beta));
    auto integrand = [&](double v) {
        return phi(detail::ek_kernel_substitution(v, eta, beta) * t);
    };
    return norm * adaptive_quadrature_unit_singular(integrand, tol / norm);
}

/// EK derivative D phi(t) by quadrature, given phi and its derivative:
/// D = beta I[phi](t) + (beta/alpha) t (eta/Gamma(beta))
///     int_0^1 x^eta (1-x^eta)^{beta-1} phi'(x t) dx,
/// with the same substitution as exact_integral_quadrature.
template <typename F, typename G>
    requires std::invocable<F&, double> && std::invocable<G&, double>
inline double exact_derivative_quadrature(const OperatorParams& params, F&& phi, G&& dphi,
                                          double t, double tol) {
    params.validate();
    if (!(t > 0.0)) throw std::domain_error("exact_derivative_quadrature: t must be > 0");
    const double eta = params.eta();
    const double beta = params.beta;
    const double norm = 1.0 / (beta * gamma_real(beta));
    auto integrand = [&](double v) {
        const double x = detail::ek_kernel_substitution(v, eta, beta);
        return x * dphi(x * t);
    };
    const double dpart = norm * adaptive_quadrature_unit_singular(integrand, tol / norm);
    return beta * exact_integral_quadrature(params, phi, t, tol) +
           (beta / params.alpha) * t * dpart;
}

/// Exact I applied to t^p: t^p Gamma(1 + p b/a) / Gamma(1 + b + p b/a).
inline double exact_integral_powerlaw(const OperatorParams& params, double p, double t) {
    params.validate();
    const double r = p * params.beta / params.alpha;
    return std::pow(t, p) * gamma_real(1.0 + r) / gamma_real(1.0 + params.beta + r);
}

/// Exact D applied to t^p: t^p Gamma(1 + p b/a) / Gamma(b + p b/a).
inline double exact_derivative_powerlaw(const OperatorParams& params, double p, double t) {
    params.validate();
    if (p < 0.0) throw std::domain_error("exact_derivative_powerlaw: p must be >= 0");
    if (!(t > 0.0)) throw std::domain_error("exact_derivative_powerlaw: t must be > 0");
    const double r = p * params.beta / params.alpha;
    return std::pow(t, p) * gamma_real(1.0 + r) / gamma_real(params.beta + r);
}

/// Tabulate phi on the uniform grid t_i = i tau, i = 0..n.
template <typename F>
    requires std::invocable<F&, double>
inline SampleSeries sample(F&& phi, double tau, std::size_t n) {
    SampleSeries series;
    series.tau = tau;
    series.values.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) series.values[i] = phi(static_cast<double>(i) * tau);
    return series;
}

}  // namespace ek

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ek {

/// Coefficients gamma_0..gamma_N of a Hermite-function expansion.
struct CoefficientVector {
    std::vector<double> gamma;

    std::size_t order() const { return gamma.empty() ? 0 : gamma.size() - 1; }

    double norm() const {
        double s = 0.0;
        for (double g : gamma) s += g * g;
        return std::sqrt(s);
    }
};

/// Hermite-function basis of truncation order N with the banded stiffness
/// entries s_{nm} = int H'_n H'_m dx (nonzero only for |n-m| in {0,2}).
struct HermiteBasis {
    std::size_t N = 0;
    std::vector<double> diag;      // s_{nn} = n + 1/2, n = 0..N
    std::vector<double> off_diag;  // s_{n,n+2} = -sqrt((n+2)(n+1))/2, n = 0..N-2

    /// y = S g for the banded stiffness matrix S.
    std::vector<double> apply(const std::vector<double>& g) const {
        if (g.size() != N + 1) throw std::invalid_argument("HermiteBasis: dimension mismatch");
        std::vector<double> y(N + 1);
        for (std::size_t i = 0; i <= N; ++i) {
            double v = diag[i] * g[i];
            if (i + 2 <= N) v += off_diag[i] * g[i + 2];
            if (i >= 2) v += off_diag[i - 2] * g[i - 2];
            y[i] = v;
        }
        return y;
    }
};

/// Gauss-Hermite rule for the weight e^{-x^2} on the real line.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Normalized Hermite function H_n(x) = pi^{-1/4} (2^n n!)^{-1/2}
/// e^{-x^2/2} H_n(x), by the stable normalized recurrence.
inline double hermite_fn(std::size_t n, double x) {
    const double h0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (n == 0) return h0;
    double prev = h0;
    double cur = std::sqrt(2.0) * x * h0;
    for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double next = x * std::sqrt(2.0 / (kk + 1.0)) * cur -
                            std::sqrt(kk / (kk + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// All of H_0(x)..H_N(x) in one recurrence pass.
inline std::vector<double> hermite_fn_all(std::size_t N, double x) {
    std::vector<double> h(N + 1);
    h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (N >= 1) h[1] = std::sqrt(2.0) * x * h[0];
    for (std::size_t k = 1; k < N; ++k) {
        const double kk = static_cast<double>(k);
        h[k + 1] = x * std::sqrt(2.0 / (kk + 1.0)) * h[k] - std::sqrt(kk / (kk + 1.0)) * h[k - 1];
    }
    return h;
}

/// Banded stiffness matrix of first-derivative inner products.
inline HermiteBasis stiffness(std::size_t N) {
    HermiteBasis basis;
    basis.N = N;
    basis.diag.resize(N + 1);
    for (std::size_t n = 0; n <= N; ++n) basis.diag[n] = static_cast<double>(n) + 0.5;
    if (N >= 2) {
        basis.off_diag.resize(N - 1);
        for (std::size_t n = 0; n + 2 <= N; ++n) {
            const double nn = static_cast<double>(n);
            basis.off_diag[n] = -std::sqrt((nn + 2.0) * (nn + 1.0)) / 2.0;
        }
    }
    return basis;
}

namespace detail {

// QL with implicit shifts for a symmetric tridiagonal matrix; computes
// eigenvalues in d and the first row of the eigenvector matrix in z.
// Adapted from the classic tql2 routine.
inline void tridiag_eigen_first_row(std::vector<double>& d, std::vector<double>& e,
                                    std::vector<double>& z) {
    const std::size_t n = d.size();
    z.assign(n, 0.0);
    if (n == 0) return;
    z[0] = 1.0;
    if (n == 1) return;
    e.push_back(0.0);

    for (std::size_t l = 0; l < n; ++l) {
        std::size_t iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw std::runtime_error("gauss_hermite: eigenvalue iteration stalled");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflowed = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflowed = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    // rotate the tracked first row
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (underflowed) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace detail

/// m-point Gauss-Hermite rule via Golub-Welsch: eigenvalues of the Jacobi
/// matrix with off-diagonals sqrt(k/2) are the nodes, weights are
/// sqrt(pi) times the squared first eigenvector components.
inline QuadratureRule gauss_hermite(std::size_t m) {
    if (m < 1) throw std::invalid_argument("gauss_hermite: m must be >= 1");
    std::vector<double> d(m, 0.0);
    std::vector<double> e(m > 1 ? m - 1 : 0);
    for (std::size_t k = 1; k < m; ++k) e[k - 1] = std::sqrt(static_cast<double>(k) / 2.0);
    std::vector<double> z;
    detail::tridiag_eigen_first_row(d, e, z);

    // sort by node
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    QuadratureRule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    for (std::size_t i = 0; i < m; ++i) {
        rule.nodes[i] = d[idx[i]];
        rule.weights[i] = sqrt_pi * z[idx[i]] * z[idx[i]];
    }
    // symmetrize: nodes come in +- pairs up to roundoff
    for (std::size_t i = 0, j = m - 1; i < j; ++i, --j) {
        const double v = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        rule.nodes[i] = -v;
        rule.nodes[j] = v;
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.weights[i] = rule.weights[j] = w;
    }
    if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
    return rule;
}

/// Projection coefficients gamma_i = int u0(x) H_i(x) dx computed as
/// sum_j w_j e^{x_j^2} u0(x_j) H_i(x_j). The rule must resolve
/// u0(x) e^{x^2/2}; slowly decaying u0 needs a large rule.
template <typename F>
    requires std::invocable<F&, double>
inline CoefficientVector project(F&& u0, std::size_t N, const QuadratureRule& rule) {
    CoefficientVector coeff;
    coeff.gamma.assign(N + 1, 0.0);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double x = rule.nodes[j];
        // w_j e^{x^2} via logs: for large rules the two factors overflow and
        // underflow separately even though their product is moderate
        if (rule.weights[j] <= 0.0) continue;
        const double f = std::exp(std::log(rule.weights[j]) + x * x) * u0(x);
        if (f == 0.0) continue;
        const std::vector<double> h = hermite_fn_all(N, x);
        for (std::size_t i = 0; i <= N; ++i) coeff.gamma[i] += f * h[i];
    }
    return coeff;
}

/// Evaluate sum_i gamma_i H_i(x).
inline double eval_expansion(const CoefficientVector& coeff, double x) {
    if (coeff.gamma.empty()) return 0.0;
    const std::vector<double> h = hermite_fn_all(coeff.order(), x);
    double s = 0.0;
    for (std::size_t i = 0; i < coeff.gamma.size(); ++i) s += coeff.gamma[i] * h[i];
    return s;
}

/// L2(R) distance between the expansion and f, by weight-compensated
/// Gauss-Hermite quadrature.
template <typename F>
    requires std::invocable<F&, double>
inline double l2_error(const CoefficientVector& coeff, F&& f, const QuadratureRule& rule) {
    double s = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double x = rule.nodes[j];
        if (rule.weights[j] <= 0.0) continue;
        const double diff = eval_expansion(coeff, x) - f(x);
        if (diff == 0.0) continue;
        s += std::exp(std::log(rule.weights[j]) + x * x) * diff * diff;
    }
    return std::sqrt(s);
}

}  // namespace ek

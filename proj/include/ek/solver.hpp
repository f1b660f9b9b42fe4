#pragma once

#include <chrono>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ek/hermite.hpp"
#include "ek/operators.hpp"

namespace ek {

/// Configuration of a Galerkin-Hermite time-marching run.
struct SolverConfig {
    OperatorParams params;
    std::size_t N = 30;        // basis truncation
    std::size_t n_steps = 100;
    double T = 1.0;
    std::size_t rule_size = 0;  // projection rule size; 0 means 2N+32

    double tau() const { return T / static_cast<double>(n_steps); }

    void validate() const {
        params.validate();
        if (n_steps < 1) throw std::invalid_argument("SolverConfig: n_steps must be >= 1");
        if (!(T > 0.0)) throw std::invalid_argument("SolverConfig: T must be > 0");
    }
};

/// Time-marching state: coefficient history gamma_0..gamma_n and the
/// cached stiffness products S gamma_l the memory term needs.
struct SpectralState {
    std::size_t step = 0;
    std::vector<CoefficientVector> history;         // gamma_0 .. gamma_step
    std::vector<std::vector<double>> cached_products;  // S gamma_l, same indexing

    static SpectralState initial(CoefficientVector gamma0, const HermiteBasis& basis) {
        SpectralState state;
        state.step = 0;
        state.cached_products.push_back(basis.apply(gamma0.gamma));
        state.history.push_back(std::move(gamma0));
        return state;
    }
};

/// Per-run report: final coefficients, the L2 norm trace, the stability
/// verdict ||U^n|| <= sqrt(2) ||U^0||, and wall-clock timings per phase.
struct SolveReport {
    CoefficientVector final;
    std::vector<double> norms;  // n_steps + 1 entries
    bool stability_ok = true;
    double max_norm_ratio = 0.0;
    double seconds_projection = 0.0;
    double seconds_marching = 0.0;
};

/// Banded dense-storage system matrix: identity plus a multiple of the
/// stiffness matrix, coupling only indices of equal parity at distance 2.
struct BandedSystem {
    std::vector<double> diag;
    std::vector<double> off_diag;  // coupling i <-> i+2
};

/// Assemble the linear system of one time step:
/// A = I + (alpha tau t_n^{alpha-1} + t_n^alpha) c_{n,n} S,
/// b = gamma_{n-1} - t_n^{alpha-1} sum_{l=1}^{n-1}
///       (alpha tau c_{n,l} + t_n (c_{n,l} - c_{n-1,l})) S gamma_l.
inline std::pair<BandedSystem, std::vector<double>> assemble_system(
    const OperatorParams& params, std::size_t n, double tau, const HermiteBasis& basis,
    const WeightTable& weights_n, const WeightTable& weights_nm1, const SpectralState& state) {
    if (state.step != n - 1)
        throw std::invalid_argument("assemble_system: state is not at step n-1");
    if (weights_n.n != n || (n >= 2 && weights_nm1.n != n - 1))
        throw std::invalid_argument("assemble_system: weight tables do not match step");

    const double t_n = static_cast<double>(n) * tau;
    const double coef = params.alpha * tau * std::pow(t_n, params.alpha - 1.0) +
                        std::pow(t_n, params.alpha);
    const double a_scale = coef * weights_n.c[n - 1];

    BandedSystem A;
    A.diag.resize(basis.N + 1);
    for (std::size_t i = 0; i <= basis.N; ++i) A.diag[i] = 1.0 + a_scale * basis.diag[i];
    A.off_diag.resize(basis.off_diag.size());
    for (std::size_t i = 0; i < basis.off_diag.size(); ++i)
        A.off_diag[i] = a_scale * basis.off_diag[i];

    std::vector<double> b = state.history[n - 1].gamma;
    const double t_pow = std::pow(t_n, params.alpha - 1.0);
    for (std::size_t l = 1; l < n; ++l) {
        const double w = t_pow * (params.alpha * tau * weights_n.c[l - 1] +
                                  t_n * (weights_n.c[l - 1] - weights_nm1.c[l - 1]));
        const std::vector<double>& sg = state.cached_products[l];
        for (std::size_t i = 0; i < b.size(); ++i) b[i] -= w * sg[i];
    }
    return {std::move(A), std::move(b)};
}

/// Solve the bandwidth-2 SPD system by splitting into the independent
/// even/odd tridiagonal systems and factorizing each (LDL^T).
inline std::vector<double> solve_banded_spd(const BandedSystem& A, const std::vector<double>& b) {
    const std::size_t n = A.diag.size();
    if (b.size() != n) throw std::invalid_argument("solve_banded_spd: dimension mismatch");
    std::vector<double> x(n);

    for (std::size_t parity = 0; parity < 2 && parity < n; ++parity) {
        // gather the tridiagonal subsystem of this parity
        std::vector<double> d, e, rhs;
        for (std::size_t i = parity; i < n; i += 2) {
            d.push_back(A.diag[i]);
            rhs.push_back(b[i]);
            if (i + 2 < n) e.push_back(A.off_diag[i]);
        }
        const std::size_t m = d.size();
        // LDL^T factorization in place
        for (std::size_t i = 1; i < m; ++i) {
            if (!(d[i - 1] > 0.0))
                throw std::runtime_error("solve_banded_spd: non-positive pivot");
            const double l = e[i - 1] / d[i - 1];
            d[i] -= l * e[i - 1];
            rhs[i] -= l * rhs[i - 1];
            e[i - 1] = l;
        }
        if (!(d[m - 1] > 0.0))
            throw std::runtime_error("solve_banded_spd: non-positive pivot");
        rhs[m - 1] /= d[m - 1];
        for (std::size_t i = m - 1; i-- > 0;) rhs[i] = rhs[i] / d[i] - e[i] * rhs[i + 1];
        for (std::size_t i = 0, j = parity; i < m; ++i, j += 2) x[j] = rhs[i];
    }
    return x;
}

/// Advance the state by one step using caller-maintained weight tables.
inline void step(SpectralState& state, const SolverConfig& config, const HermiteBasis& basis,
                 const WeightTable& weights_n, const WeightTable& weights_nm1) {
    const std::size_t n = state.step + 1;
    auto [A, b] = assemble_system(config.params, n, config.tau(), basis, weights_n, weights_nm1,
                                  state);
    CoefficientVector gamma_n;
    gamma_n.gamma = solve_banded_spd(A, b);
    state.cached_products.push_back(basis.apply(gamma_n.gamma));
    state.history.push_back(std::move(gamma_n));
    state.step = n;
}

/// Convenience single-step entry that builds the weight tables itself.
inline void step(SpectralState& state, const SolverConfig& config, const HermiteBasis& basis) {
    const std::size_t n = state.step + 1;
    const WeightTable wn = integral_weights(config.params, n);
    const WeightTable wnm1 =
        n >= 2 ? integral_weights(config.params, n - 1) : WeightTable{};
    step(state, config, basis, wn, wnm1);
}

/// March a projected initial state through all time steps.
inline SolveReport run(const SolverConfig& config, CoefficientVector gamma0) {
    config.validate();
    const HermiteBasis basis = stiffness(config.N);
    if (gamma0.gamma.size() != config.N + 1)
        throw std::invalid_argument("run: initial coefficients do not match N");
    SpectralState state = SpectralState::initial(std::move(gamma0), basis);

    SolveReport report;
    report.norms.reserve(config.n_steps + 1);
    const double norm0 = state.history[0].norm();
    report.norms.push_back(norm0);

    const auto t0 = std::chrono::steady_clock::now();
    WeightTable prev;  // table for n-1, reused across steps
    for (std::size_t n = 1; n <= config.n_steps; ++n) {
        WeightTable cur = integral_weights(config.params, n);
        step(state, config, basis, cur, prev);
        report.norms.push_back(state.history.back().norm());
        prev = std::move(cur);
    }
    report.seconds_marching =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (double nm : report.norms)
        report.max_norm_ratio = std::max(report.max_norm_ratio, norm0 > 0.0 ? nm / norm0 : 0.0);
    report.stability_ok = report.max_norm_ratio <= std::sqrt(2.0) + 1e-12;
    report.final = state.history.back();
    return report;
}

/// March from a callable initial condition (projected onto the basis).
template <typename F>
    requires std::invocable<F&, double>
inline SolveReport run(const SolverConfig& config, F&& u0) {
    config.validate();
    const std::size_t rule_size =
        config.rule_size > 0 ? config.rule_size : 2 * config.N + 32;
    const auto t0 = std::chrono::steady_clock::now();
    const QuadratureRule rule = gauss_hermite(rule_size);
    CoefficientVector gamma0 = project(u0, config.N, rule);
    const double proj_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    SolveReport report = run(config, std::move(gamma0));
    report.seconds_projection = proj_seconds;
    return report;
}

}  // namespace ek

#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ek/analytic.hpp"
#include "ek/operators.hpp"
#include "ek/solver.hpp"

namespace ek {

/// Aitken extrapolation order estimate from approximations at n, 2n, 4n:
/// p = log2((A_2n - A_n) / (A_4n - A_2n)).
/// Returns NaN for a non-positive ratio (non-monotone sequence).
inline double aitken_order(double a_n, double a_2n, double a_4n) {
    const double denom = a_4n - a_2n;
    if (denom == 0.0) throw std::domain_error("aitken_order: degenerate denominator");
    const double ratio = (a_2n - a_n) / denom;
    if (!(ratio > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log2(ratio);
}

enum class StudyKind { operator_order, solver_order, spectral_order, stability_sweep };
enum class TestFunction { exp_fn, pow32, pow2, gauss, lorentz };

inline TestFunction parse_test_function(const std::string& name) {
    if (name == "exp") return TestFunction::exp_fn;
    if (name == "pow32") return TestFunction::pow32;
    if (name == "pow2") return TestFunction::pow2;
    if (name == "gauss") return TestFunction::gauss;
    if (name == "lorentz") return TestFunction::lorentz;
    throw std::invalid_argument("unknown test function: " + name);
}

inline std::function<double(double)> test_function(TestFunction fn) {
    switch (fn) {
        case TestFunction::exp_fn: return [](double t) { return std::exp(t); };
        case TestFunction::pow32: return [](double t) { return std::pow(t, 1.5); };
        case TestFunction::pow2: return [](double t) { return t * t; };
        case TestFunction::gauss: return [](double x) { return std::exp(-0.5 * x * x); };
        case TestFunction::lorentz: return [](double x) { return 1.0 / (1.0 + x * x); };
    }
    throw std::logic_error("unreachable");
}

/// Parameters of a convergence/stability study.
struct StudySpec {
    StudyKind kind = StudyKind::operator_order;
    OperatorParams params{0.25, 0.65};
    std::vector<std::size_t> grid;     // n, n_steps, or N values per kind
    TestFunction fn = TestFunction::exp_fn;
    double t_eval = 1.0;
    std::size_t N = 30;                // basis truncation for solver studies
    std::size_t n_steps = 2000;        // fixed steps for the spectral study
    std::size_t reference_N = 60;
    std::vector<double> grid_alpha;    // stability sweep
    std::vector<double> grid_beta;
    unsigned seed = 12345;

    void validate() const {
        params.validate();
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (grid[i] <= grid[i - 1])
                throw std::invalid_argument("StudySpec: grid must be strictly increasing");
    }
};

struct OperatorOrderRow {
    std::size_t n;
    double err_L, err_K, err_G;
    double p_L, p_K, p_G;
};

struct SolverOrderRow {
    std::size_t n_steps;
    double err;
    double p;
};

struct SpectralOrderRow {
    std::size_t N;
    double err;
};

struct StabilityRow {
    double alpha, beta;
    double ratio;
    bool pass;
};

namespace detail {

// order estimate from two absolute errors on grid points n_a < n_b
inline double error_slope(double err_a, double err_b, double n_a, double n_b) {
    if (!(err_a > 0.0) || !(err_b > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log(err_a / err_b) / std::log(n_b / n_a);
}

}  // namespace detail

/// Errors of the three discrete operators against their exact values,
/// with per-row order estimates from consecutive grid points.
inline std::vector<OperatorOrderRow> operator_convergence_study(const StudySpec& spec) {
    spec.validate();
    const auto phi = test_function(spec.fn);
    const double t = spec.t_eval;

    // exact references: gamma-ratio closed forms for power laws,
    // quadrature for everything else
    double exact_I, exact_D;
    switch (spec.fn) {
        case TestFunction::pow32:
            exact_I = exact_integral_powerlaw(spec.params, 1.5, t);
            exact_D = exact_derivative_powerlaw(spec.params, 1.5, t);
            break;
        case TestFunction::pow2:
            exact_I = exact_integral_powerlaw(spec.params, 2.0, t);
            exact_D = exact_derivative_powerlaw(spec.params, 2.0, t);
            break;
        case TestFunction::exp_fn:
            exact_I = exact_integral_quadrature(spec.params, phi, t, 1e-12);
            exact_D = exact_derivative_quadrature(spec.params, phi, phi, t, 1e-12);
            break;
        default:
            throw std::invalid_argument("operator_convergence_study: fn must be a time function");
    }

    std::vector<OperatorOrderRow> rows;
    rows.reserve(spec.grid.size());
    for (std::size_t n : spec.grid) {
        const SampleSeries series = sample(phi, t / static_cast<double>(n), n);
        OperatorOrderRow row{};
        row.n = n;
        row.err_L = std::abs(apply_L(spec.params, series) - exact_I);
        row.err_K = std::abs(apply_K(spec.params, series) - exact_D);
        row.err_G = std::abs(apply_G(spec.params, series) - exact_D);
        row.p_L = row.p_K = row.p_G = std::numeric_limits<double>::quiet_NaN();
        if (!rows.empty()) {
            const OperatorOrderRow& prev = rows.back();
            const double na = static_cast<double>(prev.n), nb = static_cast<double>(n);
            row.p_L = detail::error_slope(prev.err_L, row.err_L, na, nb);
            row.p_K = detail::error_slope(prev.err_K, row.err_K, na, nb);
            row.p_G = detail::error_slope(prev.err_G, row.err_G, na, nb);
        }
        rows.push_back(row);
    }
    return rows;
}

namespace detail {

inline double coeff_distance(const CoefficientVector& a, const CoefficientVector& b) {
    const std::size_t n = std::max(a.gamma.size(), b.gamma.size());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double av = i < a.gamma.size() ? a.gamma[i] : 0.0;
        const double bv = i < b.gamma.size() ? b.gamma[i] : 0.0;
        s += (av - bv) * (av - bv);
    }
    return std::sqrt(s);
}

}  // namespace detail

/// Temporal convergence of the solver. For beta = 1 with the Gaussian
/// initial state the error is the L2 distance to the closed-form
/// solution; otherwise err at n is the coefficient-space distance
/// ||U^n - U^{2n}|| whose consecutive log2 ratios are the Aitken orders.
inline std::vector<SolverOrderRow> solver_convergence_study(const StudySpec& spec) {
    spec.validate();
    const auto u0 = test_function(spec.fn);
    const bool has_exact = spec.params.beta == 1.0 && spec.fn == TestFunction::gauss;

    std::map<std::size_t, CoefficientVector> runs;
    auto run_at = [&](std::size_t m) -> const CoefficientVector& {
        auto it = runs.find(m);
        if (it == runs.end()) {
            SolverConfig config{spec.params, spec.N, m, spec.t_eval, 0};
            it = runs.emplace(m, run(config, u0).final).first;
        }
        return it->second;
    };

    std::vector<SolverOrderRow> rows;
    rows.reserve(spec.grid.size());
    if (has_exact) {
        const QuadratureRule rule = gauss_hermite(200);
        auto exact = [&](double x) { return exact_gaussian_beta1(spec.params.alpha, spec.t_eval, x); };
        for (std::size_t m : spec.grid) {
            SolverOrderRow row{m, l2_error(run_at(m), exact, rule),
                               std::numeric_limits<double>::quiet_NaN()};
            if (!rows.empty())
                row.p = detail::error_slope(rows.back().err, row.err,
                                            static_cast<double>(rows.back().n_steps),
                                            static_cast<double>(m));
            rows.push_back(row);
        }
    } else {
        for (std::size_t m : spec.grid) {
            SolverOrderRow row{m, detail::coeff_distance(run_at(m), run_at(2 * m)),
                               std::numeric_limits<double>::quiet_NaN()};
            if (!rows.empty())
                row.p = detail::error_slope(rows.back().err, row.err,
                                            static_cast<double>(rows.back().n_steps),
                                            static_cast<double>(m));
            rows.push_back(row);
        }
    }
    return rows;
}

/// Spatial (spectral) convergence: coefficient-space error of each N in
/// the grid against a high-order reference run at the same step count.
inline std::vector<SpectralOrderRow> spectral_convergence_study(const StudySpec& spec) {
    spec.validate();
    const auto u0 = test_function(spec.fn);
    SolverConfig ref_config{spec.params, spec.reference_N, spec.n_steps, spec.t_eval, 0};
    const CoefficientVector reference = run(ref_config, u0).final;

    std::vector<SpectralOrderRow> rows;
    rows.reserve(spec.grid.size());
    for (std::size_t N : spec.grid) {
        SolverConfig config{spec.params, N, spec.n_steps, spec.t_eval, 0};
        rows.push_back({N, detail::coeff_distance(run(config, u0).final, reference)});
    }
    return rows;
}

/// Random initial coefficient vector with entries in [-1,1].
inline CoefficientVector random_coefficients(std::size_t N, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    CoefficientVector coeff;
    coeff.gamma.resize(N + 1);
    for (double& g : coeff.gamma) g = dist(rng);
    return coeff;
}

/// Stability sweep over an (alpha, beta) grid with random-coefficient
/// initial data; reports max_n ||U^n|| / ||U^0|| per run.
inline std::vector<StabilityRow> stability_sweep(const StudySpec& spec) {
    std::vector<StabilityRow> rows;
    for (double alpha : spec.grid_alpha) {
        for (double beta : spec.grid_beta) {
            SolverConfig config{{alpha, beta}, spec.N, spec.n_steps, spec.t_eval, 0};
            config.validate();
            const SolveReport report = run(config, random_coefficients(spec.N, spec.seed));
            rows.push_back({alpha, beta, report.max_norm_ratio, report.stability_ok});
        }
    }
    return rows;
}

// --- CSV emission -------------------------------------------------------

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline void write_csv(std::ostream& os, const std::vector<OperatorOrderRow>& rows) {
    os << "n,err_L,err_K,err_G,p_L,p_K,p_G\n";
    for (const auto& r : rows)
        os << r.n << ',' << detail::fmt17(r.err_L) << ',' << detail::fmt17(r.err_K) << ','
           << detail::fmt17(r.err_G) << ',' << detail::fmt17(r.p_L) << ','
           << detail::fmt17(r.p_K) << ',' << detail::fmt17(r.p_G) << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<SolverOrderRow>& rows) {
    os << "steps,err,p\n";
    for (const auto& r : rows)
        os << r.n_steps << ',' << detail::fmt17(r.err) << ',' << detail::fmt17(r.p) << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<SpectralOrderRow>& rows) {
    os << "N,err\n";
    for (const auto& r : rows) os << r.N << ',' << detail::fmt17(r.err) << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<StabilityRow>& rows) {
    os << "alpha,beta,ratio,pass\n";
    for (const auto& r : rows)
        os << detail::fmt17(r.alpha) << ',' << detail::fmt17(r.beta) << ','
           << detail::fmt17(r.ratio) << ',' << (r.pass ? 1 : 0) << '\n';
}

}  // namespace ek

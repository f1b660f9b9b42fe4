#pragma once

#include <cmath>
#include <concepts>
#include <stdexcept>

namespace ek {

namespace detail {

// Gauss 7 / Kronrod 15 node pairs on [-1,1].
inline constexpr double gk15_nodes[8] = {
    0.0,
    0.2077849550078984676006894037732449,
    0.4058451513773971669066064120769615,
    0.5860872354676911302941448382587296,
    0.7415311855993944398638647732807884,
    0.8648644233597690727897127886409262,
    0.9491079123427585245261896840478513,
    0.9914553711208126392068546975263285,
};
inline constexpr double gk15_wk[8] = {
    0.2094821410847278280129991748917143,
    0.2044329400752988924141619992346491,
    0.1903505780647854099132564024210137,
    0.1690047266392679028265834265985503,
    0.1406532597155259187451895905102379,
    0.1047900103222501838398763225415180,
    0.0630920926299785532907006631892042,
    0.0229353220105292249637320080589695,
};
inline constexpr double gk15_wg[4] = {
    0.4179591836734693877551020408163265,
    0.3818300505051189449503697754889751,
    0.2797053914892766679014677714237796,
    0.1294849661688696932706114326790820,
};

template <typename F>
inline void gk15(F&& f, double a, double b, double& result, double& err) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    const double f0 = f(c);
    double kron = gk15_wk[0] * f0;
    double gauss = gk15_wg[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double fx = f(c - h * gk15_nodes[i]) + f(c + h * gk15_nodes[i]);
        kron += gk15_wk[i] * fx;
        if (i % 2 == 0) gauss += gk15_wg[i / 2] * fx;
    }
    result = kron * h;
    err = std::abs(kron - gauss) * std::abs(h);
}

template <typename F>
inline double adaptive_gk_rec(F&& f, double a, double b, double tol, int depth) {
    double r, e;
    gk15(f, a, b, r, e);
    if (e <= tol || depth >= 48) {
        if (depth >= 48 && e > tol)
            throw std::runtime_error("adaptive_quadrature: recursion limit without convergence");
        return r;
    }
    const double m = 0.5 * (a + b);
    return adaptive_gk_rec(f, a, m, 0.5 * tol, depth + 1) +
           adaptive_gk_rec(f, m, b, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7,15) quadrature of f on [a,b] to absolute
/// tolerance tol.
template <typename F>
    requires std::invocable<F&, double>
inline double adaptive_quadrature(F&& f, double a, double b, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("adaptive_quadrature: tol must be positive");
    if (a == b) return 0.0;
    return detail::adaptive_gk_rec(f, a, b, tol, 0);
}

/// Same as adaptive_quadrature on (0,1) but with geometric pre-subdivision
/// toward both endpoints, for integrands with integrable endpoint
/// singularities such as x^{eta-1} (1-x^eta)^{beta-1}.
template <typename F>
    requires std::invocable<F&, double>
inline double adaptive_quadrature_unit_singular(F&& f, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("adaptive_quadrature: tol must be positive");
    // panels [2^-(j+1), 2^-j] and mirrored at the right endpoint
    constexpr int levels = 52;
    double total = 0.0;
    double lo = std::ldexp(1.0, -levels);
    const double panel_tol = tol / (2.0 * levels + 1.0);
    // left tail down to 2^-52; the remaining sliver is below double resolution
    for (int j = levels - 1; j >= 1; --j) {
        const double hi = std::ldexp(1.0, -j);
        total += detail::adaptive_gk_rec(f, lo, hi, panel_tol, 0);
        lo = hi;
    }
    // mirrored right panels
    double hi_r = 1.0 - std::ldexp(1.0, -levels);
    for (int j = levels - 1; j >= 1; --j) {
        const double lo_r = 1.0 - std::ldexp(1.0, -j);
        total += detail::adaptive_gk_rec(f, lo_r, hi_r, panel_tol, 0);
        hi_r = lo_r;
    }
    // left panels cover [2^-52, 1/2], right panels [1/2, 1-2^-52]
    return total;
}

}  // namespace ek

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numbers>
#include <stdexcept>

#include "ek/operators.hpp"
#include "ek/quadrature.hpp"
#include "ek/specfun.hpp"

namespace ek {

/// Green function of the EK diffusion equation:
/// G(t,x) = (1/2) t^{-alpha/2} M_{beta/2}(|x| / t^{alpha/2}).
/// beta = 1 uses the closed Gaussian form.
inline double green(const OperatorParams& params, double t, double x,
                    const SeriesControl& ctrl = {}) {
    params.validate();
    if (!(t > 0.0)) throw std::domain_error("green: t must be > 0");
    const double scale = std::pow(t, -params.alpha / 2.0);
    const double z = std::abs(x) * scale;
    if (params.beta == 1.0) return 0.5 * scale * mainardi_half(z);
    return 0.5 * scale * mainardi_m(params.beta / 2.0, z, ctrl);
}

/// Exact solution for beta = 1 with u0(x) = e^{-x^2/2}:
/// the Gaussian convolution of the Green kernel with u0,
/// u(t,x) = e^{-x^2 / (2 (1 + 2 t^alpha))} / sqrt(1 + 2 t^alpha).
inline double exact_gaussian_beta1(double alpha, double t, double x) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::domain_error("exact_gaussian_beta1: alpha outside (0,2)");
    if (t < 0.0) throw std::domain_error("exact_gaussian_beta1: negative t");
    const double v = 1.0 + 2.0 * std::pow(t, alpha);
    return std::exp(-x * x / (2.0 * v)) / std::sqrt(v);
}

/// u(t,x) = int G(t,x-y) u0(y) dy by adaptive quadrature over a window
/// wide enough for the kernel and data tails. For beta != 1 the window is
/// clamped to the Mainardi series' reliable argument range.
template <typename F>
    requires std::invocable<F&, double>
inline double convolve_oracle(const OperatorParams& params, F&& u0, double t, double x,
                              double tol) {
    params.validate();
    if (!(t > 0.0)) throw std::domain_error("convolve_oracle: t must be > 0");
    const double width = std::pow(t, params.alpha / 2.0);
    // M_{beta/2} decays stretched-exponentially; z ~ 40 is far below
    // double underflow for beta=1 and inside the series' safe range otherwise
    const double z_max = params.beta == 1.0 ? 40.0 : 14.0;
    const double half = z_max * width;
    const double a = x - half, b = x + half;

    // locate the support of u0 by a uniform pre-scan, so that narrow data
    // (Dirac-like spikes) cannot slip between the quadrature nodes of a
    // window sized for the kernel
    constexpr std::size_t scan = 4096;
    const double h = (b - a) / static_cast<double>(scan);
    double peak = 0.0;
    for (std::size_t j = 0; j <= scan; ++j)
        peak = std::max(peak, std::abs(u0(a + h * static_cast<double>(j))));
    if (peak == 0.0) return 0.0;
    const double cutoff = peak * 1e-16;
    double lo = b, hi = a;
    for (std::size_t j = 0; j <= scan; ++j) {
        const double y = a + h * static_cast<double>(j);
        if (std::abs(u0(y)) > cutoff) {
            lo = std::min(lo, y);
            hi = std::max(hi, y);
        }
    }
    lo = std::max(a, lo - h);
    hi = std::min(b, hi + h);

    SeriesControl ctrl;
    auto integrand = [&](double y) { return green(params, t, x - y, ctrl) * u0(y); };
    return adaptive_quadrature(integrand, lo, hi, tol);
}

}  // namespace ek

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "ek/analytic.hpp"
#include "ek/quadrature.hpp"

TEST_CASE("green at beta = 1 is the Gaussian heat kernel in t^alpha") {
    for (double alpha : {0.5, 0.65, 1.3}) {
        const ek::OperatorParams params{alpha, 1.0};
        for (double t : {0.2, 1.0, 2.5}) {
            for (double x : {0.0, 0.4, -1.1, 3.0}) {
                const double v = std::pow(t, alpha);
                const double expected =
                    std::exp(-x * x / (4.0 * v)) / (2.0 * std::sqrt(std::numbers::pi * v));
                CHECK(ek::green(params, t, x) == Catch::Approx(expected).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("green normalization") {
    // beta = 1: exact unit mass
    {
        const ek::OperatorParams params{0.65, 1.0};
        const double t = 0.7;
        const double half = 40.0 * std::pow(t, params.alpha / 2.0);
        const double mass = ek::adaptive_quadrature(
            [&](double x) { return ek::green(params, t, x); }, -half, half, 1e-11);
        CHECK(mass == Catch::Approx(1.0).epsilon(1e-10));
    }
    // beta = 0.5: truncated to the Mainardi series' reliable range
    // (the M_{1/4} tail beyond z = 14 carries ~1e-8 of the mass)
    {
        const ek::OperatorParams params{0.65, 0.5};
        const double half = 14.0;
        const double mass = ek::adaptive_quadrature(
            [&](double x) { return ek::green(params, 1.0, x); }, -half, half, 1e-9);
        CHECK(mass == Catch::Approx(1.0).margin(1e-6));
    }
}

TEST_CASE("green self-similarity and evenness") {
    for (double beta : {0.5, 1.0}) {
        const ek::OperatorParams params{0.65, beta};
        for (double t : {0.3, 1.7}) {
            const double scale = std::pow(t, -params.alpha / 2.0);
            for (double x : {0.0, 0.5, 2.0}) {
                CHECK(ek::green(params, t, x) ==
                      Catch::Approx(scale * ek::green(params, 1.0, x * scale)).epsilon(1e-12));
                CHECK(ek::green(params, t, x) == ek::green(params, t, -x));
            }
        }
    }
}

TEST_CASE("green at beta = 1 satisfies du/dt = alpha t^{alpha-1} d2u/dx2") {
    const ek::OperatorParams params{0.65, 1.0};
    const double t = 1.0;
    const double hx = 1e-3, ht = 1e-4;
    for (double x : {0.3, 0.7, 1.2}) {
        const double ut =
            (ek::green(params, t + ht, x) - ek::green(params, t - ht, x)) / (2.0 * ht);
        const double uxx = (ek::green(params, t, x + hx) - 2.0 * ek::green(params, t, x) +
                            ek::green(params, t, x - hx)) /
                           (hx * hx);
        CHECK(ut == Catch::Approx(params.alpha * std::pow(t, params.alpha - 1.0) * uxx)
                        .margin(1e-6));
    }
}

TEST_CASE("exact_gaussian_beta1 plug-in values") {
    for (double x : {0.0, 0.8, -2.0}) {
        CHECK(ek::exact_gaussian_beta1(0.65, 0.0, x) ==
              Catch::Approx(std::exp(-0.5 * x * x)).epsilon(1e-14));
    }
    CHECK(ek::exact_gaussian_beta1(0.65, 1.0, 0.0) ==
          Catch::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("exact_gaussian_beta1 equals the convolution oracle on a grid") {
    auto u0 = [](double y) { return std::exp(-0.5 * y * y); };
    for (double alpha : {0.5, 0.65}) {
        const ek::OperatorParams params{alpha, 1.0};
        for (double t : {0.3, 1.0}) {
            for (double x : {0.0, 0.5, 1.5}) {
                CHECK(ek::convolve_oracle(params, u0, t, x, 1e-12) ==
                      Catch::Approx(ek::exact_gaussian_beta1(alpha, t, x)).margin(1e-10));
            }
        }
    }
}

TEST_CASE("convolution with a narrow Gaussian approximates the kernel") {
    const double sigma = 1e-3;
    auto delta_like = [sigma](double y) {
        return std::exp(-0.5 * y * y / (sigma * sigma)) /
               (sigma * std::sqrt(2.0 * std::numbers::pi));
    };
    for (double beta : {1.0, 0.5}) {
        const ek::OperatorParams params{0.65, beta};
        // the beta != 1 kernel has a cusp at x = y, so mollifying by the
        // narrow Gaussian perturbs the value at O(sigma), not O(sigma^2)
        const double margin = beta == 1.0 ? 1e-4 : 1e-3;
        for (double x : {0.0, 0.6}) {
            CHECK(ek::convolve_oracle(params, delta_like, 1.0, x, 1e-10) ==
                  Catch::Approx(ek::green(params, 1.0, x)).margin(margin));
        }
    }
}

TEST_CASE("analytic error paths") {
    CHECK_THROWS_AS(ek::green({0.65, 1.0}, 0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(ek::green({0.65, 1.0}, -1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(ek::exact_gaussian_beta1(2.5, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(ek::exact_gaussian_beta1(0.65, -0.1, 0.0), std::domain_error);
    CHECK_THROWS_AS(
        ek::convolve_oracle({0.65, 1.0}, [](double) { return 1.0; }, 0.0, 0.0, 1e-8),
        std::domain_error);
}

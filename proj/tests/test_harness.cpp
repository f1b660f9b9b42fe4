#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "ek/harness.hpp"

namespace {

// minimal CSV reader for the study outputs: returns rows of doubles
std::vector<std::vector<double>> read_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);  // header
    while (std::getline(ss, line)) {
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("aitken_order on exact model sequences") {
    const double L = 3.7;
    // first order: A_m = L + C/m
    CHECK(ek::aitken_order(L + 0.8, L + 0.4, L + 0.2) == Catch::Approx(1.0).epsilon(1e-14));
    // second order: A_m = L + C/m^2
    CHECK(ek::aitken_order(L + 0.8, L + 0.2, L + 0.05) == Catch::Approx(2.0).epsilon(1e-14));
    // degenerate and non-monotone inputs
    CHECK_THROWS_AS(ek::aitken_order(1.0, 2.0, 2.0), std::domain_error);
    CHECK(std::isnan(ek::aitken_order(1.0, 2.0, 1.5)));
}

TEST_CASE("test function registry") {
    CHECK(ek::parse_test_function("exp") == ek::TestFunction::exp_fn);
    CHECK(ek::parse_test_function("pow32") == ek::TestFunction::pow32);
    CHECK(ek::parse_test_function("pow2") == ek::TestFunction::pow2);
    CHECK(ek::parse_test_function("gauss") == ek::TestFunction::gauss);
    CHECK(ek::parse_test_function("lorentz") == ek::TestFunction::lorentz);
    CHECK_THROWS_AS(ek::parse_test_function("cosh"), std::invalid_argument);

    CHECK(ek::test_function(ek::TestFunction::pow32)(4.0) == Catch::Approx(8.0).epsilon(1e-15));
    CHECK(ek::test_function(ek::TestFunction::lorentz)(1.0) == 0.5);
}

TEST_CASE("StudySpec validation") {
    ek::StudySpec spec;
    spec.grid = {8, 8};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.grid = {16, 8};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.grid = {8, 16};
    spec.params = {2.5, 0.5};
    CHECK_THROWS_AS(spec.validate(), std::domain_error);
}

TEST_CASE("operator study: emitted p matches recomputation from errors") {
    ek::StudySpec spec;
    spec.kind = ek::StudyKind::operator_order;
    spec.params = {0.25, 0.65};
    spec.fn = ek::TestFunction::exp_fn;
    spec.grid = {16, 32, 64, 128};
    const auto rows = ek::operator_convergence_study(spec);
    REQUIRE(rows.size() == 4);
    CHECK(std::isnan(rows[0].p_L));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double ln = std::log(static_cast<double>(rows[i].n) /
                                   static_cast<double>(rows[i - 1].n));
        CHECK(rows[i].p_L ==
              Catch::Approx(std::log(rows[i - 1].err_L / rows[i].err_L) / ln).epsilon(1e-12));
        CHECK(rows[i].p_G ==
              Catch::Approx(std::log(rows[i - 1].err_G / rows[i].err_G) / ln).epsilon(1e-12));
        CHECK(rows[i].p_K ==
              Catch::Approx(std::log(rows[i - 1].err_K / rows[i].err_K) / ln).epsilon(1e-12));
        // first-order scheme on a smooth function
        CHECK(rows[i].p_L > 0.7);
        CHECK(rows[i].p_L < 1.3);
    }
}

TEST_CASE("solver study: self-difference branch and exact branch") {
    // beta != 1: errors are ||U^n - U^{2n}|| distances
    ek::StudySpec spec;
    spec.kind = ek::StudyKind::solver_order;
    spec.params = {0.7, 0.15};
    spec.fn = ek::TestFunction::gauss;
    spec.N = 5;
    spec.grid = {8, 16, 32};
    const auto rows = ek::solver_convergence_study(spec);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) CHECK(r.err > 0.0);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].err < rows[i - 1].err);
        CHECK(rows[i].p ==
              Catch::Approx(std::log(rows[i - 1].err / rows[i].err) / std::log(2.0))
                  .epsilon(1e-12));
    }

    // beta = 1 with the Gaussian: error against the closed-form solution
    ek::StudySpec exact_spec = spec;
    exact_spec.params = {0.65, 1.0};
    exact_spec.N = 16;
    const auto exact_rows = ek::solver_convergence_study(exact_spec);
    for (std::size_t i = 1; i < exact_rows.size(); ++i)
        CHECK(exact_rows[i].err < exact_rows[i - 1].err);
}

TEST_CASE("spectral study: decreasing errors, zero at the reference order") {
    ek::StudySpec spec;
    spec.kind = ek::StudyKind::spectral_order;
    spec.params = {0.6, 1.0};
    spec.fn = ek::TestFunction::gauss;
    spec.n_steps = 50;
    spec.reference_N = 16;
    spec.grid = {4, 8, 16};
    const auto rows = ek::spectral_convergence_study(spec);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].err < rows[0].err);
    CHECK(rows[2].err == 0.0);
}

TEST_CASE("stability sweep rows and determinism of the seed") {
    ek::StudySpec spec;
    spec.kind = ek::StudyKind::stability_sweep;
    spec.grid_alpha = {0.35, 0.7};
    spec.grid_beta = {0.15, 0.65};
    spec.N = 8;
    spec.n_steps = 40;
    const auto rows = ek::stability_sweep(spec);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.ratio <= std::sqrt(2.0) + 1e-12);
        CHECK(r.pass);
    }

    const ek::CoefficientVector a = ek::random_coefficients(12, 12345);
    const ek::CoefficientVector b = ek::random_coefficients(12, 12345);
    CHECK(a.gamma == b.gamma);
    for (double g : a.gamma) {
        CHECK(g >= -1.0);
        CHECK(g <= 1.0);
    }
    CHECK(ek::random_coefficients(12, 54321).gamma != a.gamma);
}

TEST_CASE("CSV output: determinism, format, and round-trip") {
    ek::StudySpec spec;
    spec.kind = ek::StudyKind::operator_order;
    spec.params = {0.25, 0.65};
    spec.fn = ek::TestFunction::pow2;
    spec.grid = {16, 32, 64};

    std::ostringstream first, second;
    ek::write_csv(first, ek::operator_convergence_study(spec));
    ek::write_csv(second, ek::operator_convergence_study(spec));
    CHECK(first.str() == second.str());

    const std::string text = first.str();
    CHECK(text.rfind("n,err_L,err_K,err_G,p_L,p_K,p_G\n", 0) == 0);
    CHECK(text.find("\r") == std::string::npos);
    CHECK(text.back() == '\n');

    // %.17g round-trips doubles exactly; the emitted p must reproduce from
    // the emitted error columns
    const auto rows = read_csv(text);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double ln = std::log(rows[i][0] / rows[i - 1][0]);
        for (std::size_t c = 1; c <= 3; ++c) {
            const double recomputed = std::log(rows[i - 1][c] / rows[i][c]) / ln;
            CHECK(rows[i][c + 3] == Catch::Approx(recomputed).epsilon(1e-12));
        }
    }

    // the other row types' headers
    std::ostringstream so, sp, st;
    ek::write_csv(so, std::vector<ek::SolverOrderRow>{{10, 0.5, 1.0}});
    CHECK(so.str() == "steps,err,p\n10,0.5,1\n");
    ek::write_csv(sp, std::vector<ek::SpectralOrderRow>{{4, 0.25}});
    CHECK(sp.str() == "N,err\n4,0.25\n");
    ek::write_csv(st, std::vector<ek::StabilityRow>{{0.5, 0.5, 1.01, true}});
    CHECK(st.str() == "alpha,beta,ratio,pass\n0.5,0.5,1.01,1\n");
}

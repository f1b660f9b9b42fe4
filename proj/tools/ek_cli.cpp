// Command-line driver for the Erdelyi-Kober operator and solver studies.
// Every subcommand emits a CSV (header row, 17 significant digits, LF).
// Exit codes: 0 success, 2 invalid arguments, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ek/harness.hpp"

namespace {

std::vector<std::size_t> parse_size_list(const std::string& csv) {
    std::vector<std::size_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoul(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

template <typename Rows>
int emit(const Rows& rows, const std::string& out_path) {
    if (out_path.empty()) {
        ek::write_csv(std::cout, rows);
    } else {
        std::ofstream os(out_path, std::ios::binary);
        if (!os) {
            std::cerr << "cannot open output file: " << out_path << "\n";
            return 3;
        }
        ek::write_csv(os, rows);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete Erdelyi-Kober operators and the Galerkin-Hermite solver"};
    app.require_subcommand(1);

    double alpha = 0.25, beta = 0.65, T = 1.0;
    std::string fn = "exp", ic = "gauss", grid_str, grid_alpha_str, grid_beta_str, out_path;
    std::size_t n = 10, N = 30, steps = 100, reference_N = 60;
    bool with_d = false, large = false;

    auto* weights = app.add_subcommand("weights", "Quadrature weights c_{n,i} (and d_{n,i})");
    weights->add_option("--alpha", alpha)->required();
    weights->add_option("--beta", beta)->required();
    weights->add_option("--n", n)->required();
    weights->add_flag("--with-d", with_d, "also compute the hypergeometric weights");
    weights->add_option("--out", out_path);

    auto* op_order = app.add_subcommand("op-order", "Operator discretization errors vs n");
    op_order->add_option("--alpha", alpha)->required();
    op_order->add_option("--beta", beta)->required();
    op_order->add_option("--fn", fn)->check(CLI::IsMember({"exp", "pow32", "pow2"}));
    op_order->add_option("--t", T);
    op_order->add_option("--grid", grid_str)->required();
    op_order->add_flag("--large", large, "allow grids beyond n=10^4");
    op_order->add_option("--out", out_path);

    auto* solve = app.add_subcommand("solve", "March the Galerkin-Hermite scheme");
    solve->add_option("--alpha", alpha)->required();
    solve->add_option("--beta", beta)->required();
    solve->add_option("--N", N);
    solve->add_option("--steps", steps)->required();
    solve->add_option("--T", T);
    solve->add_option("--ic", ic)->check(CLI::IsMember({"gauss", "lorentz"}));
    solve->add_option("--out", out_path);

    auto* solver_order = app.add_subcommand("solver-order", "Temporal convergence study");
    solver_order->add_option("--alpha", alpha)->required();
    solver_order->add_option("--beta", beta)->required();
    solver_order->add_option("--N", N);
    solver_order->add_option("--ic", ic)->check(CLI::IsMember({"gauss", "lorentz"}));
    solver_order->add_option("--grid", grid_str)->required();
    solver_order->add_option("--out", out_path);

    auto* spectral = app.add_subcommand("spectral-order", "Spatial convergence study");
    spectral->add_option("--alpha", alpha)->required();
    spectral->add_option("--beta", beta)->required();
    spectral->add_option("--steps", steps)->required();
    spectral->add_option("--ic", ic)->check(CLI::IsMember({"gauss", "lorentz"}));
    spectral->add_option("--grid", grid_str)->required();
    spectral->add_option("--reference-N", reference_N);
    spectral->add_option("--out", out_path);

    auto* sweep = app.add_subcommand("stability-sweep", "Stability ratio over an (alpha,beta) grid");
    sweep->add_option("--grid-alpha", grid_alpha_str)->required();
    sweep->add_option("--grid-beta", grid_beta_str)->required();
    sweep->add_option("--steps", steps)->required();
    sweep->add_option("--N", N)->default_val(16);
    sweep->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (weights->parsed()) {
            const ek::OperatorParams params{alpha, beta};
            const ek::WeightTable table = with_d ? ek::derivative_weights(params, n)
                                                 : ek::integral_weights(params, n);
            std::ostringstream os;
            os << "i,c,d\n";
            for (std::size_t i = 1; i <= table.n; ++i) {
                os << i << ',' << ek::detail::fmt17(table.c[i - 1]) << ',';
                if (!table.d.empty()) os << ek::detail::fmt17(table.d[i - 1]);
                os << '\n';
            }
            if (out_path.empty()) {
                std::cout << os.str();
            } else {
                std::ofstream f(out_path, std::ios::binary);
                if (!f) return 3;
                f << os.str();
            }
            return 0;
        }
        if (op_order->parsed()) {
            ek::StudySpec spec;
            spec.kind = ek::StudyKind::operator_order;
            spec.params = {alpha, beta};
            spec.fn = ek::parse_test_function(fn);
            spec.t_eval = T;
            spec.grid = parse_size_list(grid_str);
            if (!large)
                for (std::size_t g : spec.grid)
                    if (g > 10000) {
                        std::cerr << "grid point " << g << " exceeds 10^4; pass --large\n";
                        return 2;
                    }
            return emit(ek::operator_convergence_study(spec), out_path);
        }
        if (solve->parsed()) {
            ek::SolverConfig config{{alpha, beta}, N, steps, T, 0};
            const ek::SolveReport report =
                ek::run(config, ek::test_function(ek::parse_test_function(ic)));
            std::ostringstream os;
            os << "step,t,norm,stable\n";
            for (std::size_t i = 0; i < report.norms.size(); ++i)
                os << i << ',' << ek::detail::fmt17(static_cast<double>(i) * config.tau()) << ','
                   << ek::detail::fmt17(report.norms[i]) << ',' << (report.stability_ok ? 1 : 0)
                   << '\n';
            if (out_path.empty()) {
                std::cout << os.str();
            } else {
                std::ofstream f(out_path, std::ios::binary);
                if (!f) return 3;
                f << os.str();
            }
            return 0;
        }
        if (solver_order->parsed()) {
            ek::StudySpec spec;
            spec.kind = ek::StudyKind::solver_order;
            spec.params = {alpha, beta};
            spec.fn = ek::parse_test_function(ic);
            spec.N = N;
            spec.t_eval = 1.0;
            spec.grid = parse_size_list(grid_str);
            return emit(ek::solver_convergence_study(spec), out_path);
        }
        if (spectral->parsed()) {
            ek::StudySpec spec;
            spec.kind = ek::StudyKind::spectral_order;
            spec.params = {alpha, beta};
            spec.fn = ek::parse_test_function(ic);
            spec.n_steps = steps;
            spec.t_eval = 1.0;
            spec.reference_N = reference_N;
            spec.grid = parse_size_list(grid_str);
            return emit(ek::spectral_convergence_study(spec), out_path);
        }
        if (sweep->parsed()) {
            ek::StudySpec spec;
            spec.kind = ek::StudyKind::stability_sweep;
            spec.grid_alpha = parse_double_list(grid_alpha_str);
            spec.grid_beta = parse_double_list(grid_beta_str);
            spec.N = N;
            spec.n_steps = steps;
            spec.t_eval = 1.0;
            return emit(ek::stability_sweep(spec), out_path);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

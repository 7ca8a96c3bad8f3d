#pragma once

// Command-line front end: solve / sweep / compare. Exit codes: 0 success
// (for solve: converged), 2 solve finished without converging, 1 usage or
// I/O errors. All numeric output is in round-trip decimal form.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shootbvp/analysis.hpp"
#include "shootbvp/ivp.hpp"
#include "shootbvp/problems.hpp"
#include "shootbvp/shooting.hpp"

namespace shootbvp::cli {

struct CompareRow {
    std::string method;
    std::string status;
    int iterations;
    std::optional<double> root;
    std::optional<double> final_abs_deviation;
};

namespace run_detail {

struct ProblemArgs {
    std::string name;
    std::string file;
    std::size_t steps = 1000;
    double guard = 1e8;
    int max_iters = 100;
};

inline void add_common(CLI::App* cmd, ProblemArgs& args) {
    cmd->add_option("problem", args.name,
                    "built-in problem name (paper-ex1, paper-ex2, paper-ex3)");
    cmd->add_option("--problem-file", args.file, "problem config file (key = value format)");
    cmd->add_option("--steps", args.steps, "RK4 steps")->capture_default_str();
    cmd->add_option("--guard", args.guard, "blow-up guard on |u|, |u'|, |v|")
        ->capture_default_str();
    cmd->add_option("--max-iters", args.max_iters, "iteration limit")->capture_default_str();
}

inline problems::Tpbvp resolve_problem(const ProblemArgs& args) {
    if (args.name.empty() == args.file.empty())
        throw std::runtime_error(
            "specify exactly one of: a built-in problem name, or --problem-file");
    if (!args.name.empty()) return problems::builtin(args.name);
    return problems::load(args.file);
}

inline std::optional<double> final_abs_deviation(const shooting::SolveResult& result) {
    for (auto it = result.trace.rbegin(); it != result.trace.rend(); ++it)
        if (std::isfinite(it->deviation)) return std::fabs(it->deviation);
    return std::nullopt;
}

inline std::string fd(double x) { return detail::format_double(x); }

struct MethodArgs {
    std::string method;
    double fixed_slope = 1.0;
    double fd_step = 1e-6;
    std::vector<double> secant_seed;
};

inline shooting::MethodSpec method_spec(shooting::MethodKind kind, const MethodArgs& args) {
    shooting::MethodSpec spec;
    spec.kind = kind;
    spec.fixed_slope = args.fixed_slope;
    spec.fd_step = args.fd_step;
    if (args.secant_seed.size() == 2)
        spec.secant_seed = {args.secant_seed[0], args.secant_seed[1]};
    return spec;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

inline void print_solve_summary(std::ostream& out, const problems::Tpbvp& problem,
                                const shooting::MethodSpec& spec, double v0, double tol,
                                const ProblemArgs& pargs,
                                const shooting::SolveResult& result) {
    out << "problem     " << problem.name << "  on [" << fd(problem.a) << ", " << fd(problem.b)
        << "]  u(a) = " << fd(problem.u_a) << "  u(b) = " << fd(problem.u_b) << '\n';
    out << "method      " << shooting::method_name(spec.kind);
    if (spec.kind == shooting::MethodKind::Projection)
        out << "  (k = " << fd(problem.b - problem.a) << ")";
    if (spec.kind == shooting::MethodKind::FixedPoint)
        out << "  (k = " << fd(spec.fixed_slope) << ")";
    if (spec.kind == shooting::MethodKind::Secant) {
        const auto seed = spec.secant_seed.value_or(std::pair{v0 - 0.2, v0});
        out << "  (seeds " << fd(seed.first) << ", " << fd(seed.second) << ")";
    }
    out << "  v0 = " << fd(v0) << "  tol = " << fd(tol) << "  steps = " << pargs.steps << '\n';
    out << "status      " << shooting::status_name(result.status) << '\n';
    out << "iterations  " << result.iterations << '\n';
    if (result.root) out << "root        " << fd(*result.root) << '\n';
    if (const auto dev = final_abs_deviation(result)) out << "final |E|   " << fd(*dev) << '\n';
}

inline void print_compare_table(std::ostream& out, const std::vector<CompareRow>& rows) {
    out << std::left << std::setw(24) << "method" << std::setw(16) << "status" << std::setw(12)
        << "iterations" << std::setw(24) << "root" << "final|E|" << '\n';
    for (const CompareRow& row : rows) {
        out << std::left << std::setw(24) << row.method << std::setw(16) << row.status
            << std::setw(12) << row.iterations << std::setw(24)
            << (row.root ? fd(*row.root) : std::string("-"))
            << (row.final_abs_deviation ? fd(*row.final_abs_deviation) : std::string("-"))
            << '\n';
    }
}

inline void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
    out << "method,status,iterations,root,final_abs_E\n";
    for (const CompareRow& row : rows) {
        out << row.method << ',' << row.status << ',' << row.iterations << ','
            << (row.root ? fd(*row.root) : std::string()) << ','
            << (row.final_abs_deviation ? fd(*row.final_abs_deviation) : std::string()) << '\n';
    }
}

}  // namespace run_detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace run_detail;

    CLI::App app{"shooting-method solver for two-point boundary value problems"};
    app.name("shootbvp");
    app.require_subcommand(1);

    const std::vector<std::string> method_names = {"projection", "fixed-point", "newton",
                                                   "constant-slope-newton", "secant"};

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "run one shooting method");
    ProblemArgs solve_problem;
    MethodArgs solve_method;
    double v0 = 0.0;
    double tol = 1e-3;
    std::string trace_json, solution_csv;
    add_common(solve_cmd, solve_problem);
    solve_cmd->add_option("--method", solve_method.method, "shooting method")
        ->required()
        ->check(CLI::IsMember(method_names));
    solve_cmd->add_option("--v0", v0, "starting guess for u'(a)")->required();
    solve_cmd->add_option("--tol", tol, "convergence tolerance on |E|")->capture_default_str();
    solve_cmd->add_option("--k", solve_method.fixed_slope, "fixed-point slope")
        ->capture_default_str();
    solve_cmd->add_option("--fd-step", solve_method.fd_step,
                          "relative finite-difference step for Newton slopes")
        ->capture_default_str();
    solve_cmd
        ->add_option("--secant-seed", solve_method.secant_seed,
                     "two seed values for the secant method")
        ->expected(2);
    solve_cmd->add_option("--trace-json", trace_json, "write the solve result as JSON");
    solve_cmd->add_option("--solution-csv", solution_csv,
                          "write the converged trajectory as CSV");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "tabulate E(v) over a range");
    ProblemArgs sweep_problem;
    double sweep_from = 0.0, sweep_to = 0.0;
    std::size_t sweep_points = 0;
    std::string sweep_output;
    add_common(sweep_cmd, sweep_problem);
    sweep_cmd->add_option("--from", sweep_from, "lower end of the v range")->required();
    sweep_cmd->add_option("--to", sweep_to, "upper end of the v range")->required();
    sweep_cmd->add_option("--points", sweep_points, "number of sample points")->required();
    sweep_cmd->add_option("-o,--output", sweep_output, "output CSV path (default: stdout)");

    // compare
    auto* compare_cmd = app.add_subcommand("compare", "run all five methods side by side");
    ProblemArgs compare_problem;
    MethodArgs compare_method;
    double compare_v0 = 0.0;
    double compare_tol = 1e-3;
    std::string compare_csv;
    add_common(compare_cmd, compare_problem);
    compare_cmd->add_option("--v0", compare_v0, "starting guess for u'(a)")->required();
    compare_cmd->add_option("--tol", compare_tol, "convergence tolerance on |E|")
        ->capture_default_str();
    compare_cmd->add_option("--k", compare_method.fixed_slope, "fixed-point slope")
        ->capture_default_str();
    compare_cmd->add_option("--fd-step", compare_method.fd_step,
                            "relative finite-difference step for Newton slopes")
        ->capture_default_str();
    compare_cmd
        ->add_option("--secant-seed", compare_method.secant_seed,
                     "two seed values for the secant method")
        ->expected(2);
    compare_cmd->add_option("--csv", compare_csv, "also write the table as CSV");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("shootbvp");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve_cmd->parsed()) {
            const auto problem = resolve_problem(solve_problem);
            const ivp::IntegratorConfig cfg{solve_problem.steps, solve_problem.guard};
            const auto kind = shooting::method_from_name(solve_method.method);
            const auto spec = method_spec(*kind, solve_method);
            const auto result =
                shooting::solve(problem, spec, v0, tol, solve_problem.max_iters, cfg);
            print_solve_summary(out, problem, spec, v0, tol, solve_problem, result);
            if (!trace_json.empty()) {
                auto f = open_output(trace_json);
                shooting::write_trace_json(result, f);
            }
            if (!solution_csv.empty()) {
                if (result.final_trajectory) {
                    auto f = open_output(solution_csv);
                    ivp::write_csv(*result.final_trajectory, f);
                } else {
                    out << "note        no converged trajectory; '" << solution_csv
                        << "' not written\n";
                }
            }
            return result.status == shooting::SolveStatus::Converged ? 0 : 2;
        }

        if (sweep_cmd->parsed()) {
            const auto problem = resolve_problem(sweep_problem);
            const ivp::IntegratorConfig cfg{sweep_problem.steps, sweep_problem.guard};
            const auto table = analysis::sweep(problem, sweep_from, sweep_to, sweep_points, cfg);
            if (sweep_output.empty()) {
                analysis::write_csv(table, out);
            } else {
                auto f = open_output(sweep_output);
                analysis::write_csv(table, f);
            }
            return 0;
        }

        // compare
        const auto problem = resolve_problem(compare_problem);
        const ivp::IntegratorConfig cfg{compare_problem.steps, compare_problem.guard};
        std::vector<CompareRow> rows;
        for (const std::string& name : method_names) {
            const auto kind = *shooting::method_from_name(name);
            const auto spec = method_spec(kind, compare_method);
            const auto result = shooting::solve(problem, spec, compare_v0, compare_tol,
                                                compare_problem.max_iters, cfg);
            rows.push_back({name, shooting::status_name(result.status), result.iterations,
                            result.root, final_abs_deviation(result)});
        }
        print_compare_table(out, rows);
        if (!compare_csv.empty()) {
            auto f = open_output(compare_csv);
            write_compare_csv(f, rows);
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

inline int run(int argc, const char* const* argv) {
    return run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}

}  // namespace shootbvp::cli

// fdoc: solve fractional delay control problems and screen candidate
// controls against first- and second-order necessary conditions.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdoc/adjoint.hpp"
#include "fdoc/conditions.hpp"
#include "fdoc/csv.hpp"
#include "fdoc/forward.hpp"
#include "fdoc/problem.hpp"
#include "fdoc/reference.hpp"
#include "fdoc/variation.hpp"

namespace {

using nlohmann::json;
using namespace fdoc;

struct ProblemOpts {
    std::string config;
    std::string example;
    double alpha = 0.5;
    int steps = 200;
};

struct ControlOpts {
    std::vector<double> constant;
    std::string csv_path;
};

void add_problem_flags(CLI::App* cmd, ProblemOpts& p) {
    auto* c = cmd->add_option("--config", p.config, "problem config file (fdoc-problem v1)");
    auto* e = cmd->add_option("--example", p.example, "built-in problem name: ex1 or ex2");
    cmd->add_option("--alpha", p.alpha, "fractional order, used with --example (default 0.5)");
    cmd->add_option("--N", p.steps, "grid steps, used with --example (default 200)");
    c->excludes(e);
    e->excludes(c);
}

void add_control_flags(CLI::App* cmd, ControlOpts& u) {
    auto* k = cmd->add_option("--u", u.constant, "constant control value(s)");
    auto* f = cmd->add_option("--control", u.csv_path, "control CSV (schema control v1)");
    k->excludes(f);
    f->excludes(k);
}

ProblemSpec resolve_problem(const ProblemOpts& p, json& manifest) {
    ProblemSpec spec = [&] {
        if (!p.config.empty()) return load_problem_file(p.config);
        if (!p.example.empty()) return builtin_example(p.example, Order(p.alpha), p.steps);
        throw std::invalid_argument("one of --config or --example is required");
    }();
    manifest["problem"] = p.config.empty() ? "builtin " + p.example : p.config;
    try {
        manifest["resolved_config"] = render_problem(spec);
    } catch (const std::exception&) {
        // non-renderable inputs keep just the source reference
    }
    manifest["grid"] = {{"T", spec.grid.horizon},
                        {"h", spec.grid.delay},
                        {"N", spec.grid.steps},
                        {"dt", spec.grid.dt}};
    manifest["alpha"] = spec.alpha.value;
    manifest["beta"] = spec.cost.beta.value;
    return spec;
}

ControlSignal resolve_control(const ControlOpts& opts, const ProblemSpec& spec, json& manifest) {
    if (!opts.csv_path.empty()) {
        manifest["control"] = opts.csv_path;
        return read_control_csv(opts.csv_path, spec);
    }
    Vec u = Vec::Zero(spec.control_dim());
    if (!opts.constant.empty()) {
        if (static_cast<int>(opts.constant.size()) != spec.control_dim())
            throw std::invalid_argument("--u expects " + std::to_string(spec.control_dim()) +
                                        " value(s)");
        u = Eigen::Map<const Vec>(opts.constant.data(), opts.constant.size());
    }
    if (!spec.controls.contains(u))
        throw std::domain_error("requested constant control is outside the admissible box");
    std::string desc = "constant";
    for (int i = 0; i < u.size(); ++i) desc += " " + format_sig(u[i]);
    manifest["control"] = desc;
    return ControlSignal::constant(spec.grid, u);
}

void write_manifest(json& manifest, const std::string& command, const std::string& out_base,
                    const std::vector<std::string>& outputs,
                    std::chrono::steady_clock::time_point start) {
    manifest["command"] = command;
    manifest["outputs"] = outputs;
    manifest["duration_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string path =
        out_base.empty() ? "fdoc-" + command + "-manifest.json" : out_base + ".manifest.json";
    std::ofstream os(path);
    os << manifest.dump(2) << "\n";
    if (!os) throw std::runtime_error("failed writing " + path);
}

int cmd_solve(const ProblemOpts& popts, const ControlOpts& uopts, const std::string& out) {
    auto start = std::chrono::steady_clock::now();
    json manifest;
    ProblemSpec spec = resolve_problem(popts, manifest);
    ControlSignal u = resolve_control(uopts, spec, manifest);
    Trajectory traj = solve_fdde(spec, u);
    write_trajectory_csv(out, traj);
    std::cout << "J = " << format_sig(evaluate_cost(spec, traj, u)) << "\n";
    std::cout << "wrote " << out << "\n";
    write_manifest(manifest, "solve", out, {out}, start);
    return 0;
}

int cmd_adjoint(const ProblemOpts& popts, const ControlOpts& uopts, const std::string& out) {
    auto start = std::chrono::steady_clock::now();
    json manifest;
    ProblemSpec spec = resolve_problem(popts, manifest);
    ControlSignal u = resolve_control(uopts, spec, manifest);
    Trajectory traj = solve_fdde(spec, u);
    AdjointPath psi = solve_adjoint(spec, traj, u);
    write_adjoint_csv(out, psi);
    std::cout << "psi(0) =";
    for (int i = 0; i < psi.values.front().size(); ++i)
        std::cout << " " << format_sig(psi.values.front()[i]);
    std::cout << "\nwrote " << out << "\n";
    write_manifest(manifest, "adjoint", out, {out}, start);
    return 0;
}

int cmd_check(const ProblemOpts& popts, const ControlOpts& uopts, const std::string& out,
              const ConditionTolerances& tol) {
    auto start = std::chrono::steady_clock::now();
    json manifest;
    ProblemSpec spec = resolve_problem(popts, manifest);
    ControlSignal u = resolve_control(uopts, spec, manifest);
    Trajectory traj = solve_fdde(spec, u);
    AdjointPath psi = solve_adjoint(spec, traj, u);
    ConditionReport rep = check_all(spec, traj, u, psi, tol);
    write_condition_csv(out, rep);

    double max_gap = 0.0, max_abs = 0.0, max_s = 0.0;
    for (const auto& rec : rep.nodes) {
        max_gap = std::max(max_gap, rec.gap);
        max_abs = std::max(max_abs, rec.delta_abs);
        if (rec.second_order_tested) max_s = std::max(max_s, rec.s_max);
    }
    std::cout << "first-order: max gap = " << format_sig(max_gap) << " (tol "
              << format_sig(rep.tol_pmp) << ") -> " << (rep.pmp_satisfied ? "PASS" : "VIOLATED")
              << "\n";
    std::cout << "singular: " << (rep.singular_everywhere ? "yes" : "no")
              << " (max |dH| = " << format_sig(max_abs) << ", tol " << format_sig(rep.tol_sing)
              << ")\n";
    std::cout << "second-order: max score = " << format_sig(max_s) << " (tol "
              << format_sig(rep.tol_second) << ") -> "
              << (rep.second_order_satisfied ? "PASS" : "VIOLATED");
    if (rep.second_order_advisory) std::cout << " [advisory: process is not singular]";
    std::cout << "\nwrote " << out << "\n";

    manifest["tolerances"] = {
        {"pmp", rep.tol_pmp}, {"singular", rep.tol_sing}, {"second", rep.tol_second}};
    manifest["singular_everywhere"] = rep.singular_everywhere;

    int code = 0;
    if (!rep.pmp_satisfied) {
        std::cout << "verdict: candidate rejected: first-order maximum condition violated\n";
        code = 1;
    } else if (!rep.second_order_satisfied) {
        if (rep.singular_everywhere)
            std::cout << "verdict: candidate rejected: second-order condition violated on "
                         "singular control\n";
        else
            std::cout << "verdict: candidate rejected: second-order condition violated\n";
        code = 1;
    } else {
        std::cout << "verdict: all necessary conditions pass\n";
    }
    manifest["verdict"] = code == 0 ? "pass" : "rejected";
    write_manifest(manifest, "check", out, {out}, start);
    return code;
}

int cmd_spike(const ProblemOpts& popts, const ControlOpts& uopts, const std::string& out,
              double theta, const std::vector<double>& v_raw, double eps0, int ladder) {
    auto start = std::chrono::steady_clock::now();
    json manifest;
    ProblemSpec spec = resolve_problem(popts, manifest);
    ControlSignal base = resolve_control(uopts, spec, manifest);
    if (static_cast<int>(v_raw.size()) != spec.control_dim())
        throw std::invalid_argument("--v expects " + std::to_string(spec.control_dim()) +
                                    " value(s)");
    Vec v = Eigen::Map<const Vec>(v_raw.data(), v_raw.size());

    Trajectory traj = solve_fdde(spec, base);
    AdjointPath psi = solve_adjoint(spec, traj, base);
    std::vector<SpikeExperiment> runs;
    for (double eps : make_eps_ladder(spec, theta, eps0, ladder)) {
        runs.push_back(run_spike(spec, base, traj, psi, theta, v, eps));
        const SpikeExperiment& r = runs.back();
        std::cout << "eps = " << format_sig(r.eps) << "  dJ_actual = " << format_sig(r.dJ_actual)
                  << "  dJ_first = " << format_sig(r.dJ_first)
                  << "  dJ_second = " << format_sig(r.dJ_second)
                  << "  residual_ratio = " << format_sig(r.residual_ratio) << "\n";
    }
    write_spike_csv(out, runs);
    std::cout << "wrote " << out << "\n";
    manifest["theta"] = theta;
    manifest["eps0"] = eps0;
    manifest["ladder"] = ladder;
    write_manifest(manifest, "spike", out, {out}, start);
    return 0;
}

struct TableRow {
    std::string name;
    bool pass;
    std::string detail;
};

int cmd_example(const std::string& name, double alpha_v, int steps) {
    auto start = std::chrono::steady_clock::now();
    json manifest;
    Order alpha(alpha_v);
    ProblemSpec spec = builtin_example(name, alpha, steps);
    manifest["problem"] = "builtin " + name;
    manifest["alpha"] = alpha_v;
    manifest["grid"] = {{"N", steps}};
    std::vector<TableRow> rows;

    if (name == "ex1") {
        ControlSignal base = ControlSignal::constant(spec.grid, Vec::Zero(1));
        Trajectory traj = solve_fdde(spec, base);
        AdjointPath psi = solve_adjoint(spec, traj, base);
        double err1 = 0.0, err2 = 0.0;
        for (int i = 0; i <= spec.grid.steps; ++i) {
            const double t = spec.grid.node(i);
            err1 = std::max(err1, std::abs(psi.values[i][0] + 1.0));
            if (t <= reference::horizon - reference::delay)
                err2 = std::max(err2, std::abs(psi.values[i][1] - reference::ex1_costate2(t, alpha)));
        }
        rows.push_back({"costate_1 == -1", err1 <= 1e-9, "max err " + format_sig(err1)});
        rows.push_back({"costate_2 closed form", err2 <= 1e-2, "max err " + format_sig(err2)});
        ConditionReport rep = check_pmp(spec, traj, base, psi);
        rows.push_back({"first-order condition violated at u == 0", !rep.pmp_satisfied,
                        std::string("pmp_satisfied = ") + (rep.pmp_satisfied ? "true" : "false")});
    } else if (name == "ex2") {
        ControlSignal half = ControlSignal::constant(spec.grid, Vec::Constant(1, -0.5));
        Trajectory traj_half = solve_fdde(spec, half);
        const double J = evaluate_cost(spec, traj_half, half);
        const double J_ref = reference::ex2_cost(alpha, -0.5);
        const double jtol = alpha_v < 0.4 ? 2e-3 : 1e-3;
        rows.push_back({"cost at u == -1/2 matches closed form", std::abs(J - J_ref) <= jtol,
                        "J = " + format_sig(J) + ", reference " + format_sig(J_ref)});

        ControlSignal base = ControlSignal::constant(spec.grid, Vec::Zero(1));
        Trajectory traj = solve_fdde(spec, base);
        AdjointPath psi = solve_adjoint(spec, traj, base);
        ConditionReport rep = check_second_order(spec, traj, base, psi);
        rows.push_back({"u == 0 is singular", rep.singular_everywhere, ""});
        rows.push_back({"second-order condition violated at u == 0", !rep.second_order_satisfied,
                        ""});
    } else {
        throw std::invalid_argument("unknown example '" + name + "'");
    }

    bool all = true;
    for (const TableRow& row : rows) {
        all = all && row.pass;
        std::cout << (row.pass ? "PASS" : "FAIL") << "  " << row.name;
        if (!row.detail.empty()) std::cout << "  (" << row.detail << ")";
        std::cout << "\n";
    }
    manifest["all_pass"] = all;
    write_manifest(manifest, "example", "", {}, start);
    return all ? 0 : 1;
}

int cmd_convergence(double alpha_v, const std::string& out) {
    auto start = std::chrono::steady_clock::now();
    json manifest;
    std::vector<ConvergenceRecord> records =
        manufactured_convergence(Order(alpha_v), {50, 100, 200, 400});
    std::ofstream os = open_csv(out, "convergence");
    os << "N,max_error\n";
    double prev = 0.0;
    for (const ConvergenceRecord& rec : records) {
        std::cout << "N = " << rec.steps << "  max_error = " << format_sig(rec.max_error);
        if (prev > 0.0)
            std::cout << "  order = " << format_sig(std::log2(prev / rec.max_error));
        std::cout << "\n";
        write_csv_row(os, std::vector<double>{static_cast<double>(rec.steps), rec.max_error});
        prev = rec.max_error;
    }
    std::cout << "wrote " << out << "\n";
    manifest["alpha"] = alpha_v;
    write_manifest(manifest, "convergence", out, {out}, start);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional delay optimal-control toolkit"};
    app.require_subcommand(1);

    ProblemOpts popts;
    ControlOpts uopts;
    std::string out;
    ConditionTolerances tol;
    double theta = 0.0, eps0 = 0.0;
    std::vector<double> v_raw;
    int ladder = 3;
    std::string example_name;

    auto* solve = app.add_subcommand("solve", "solve the state equation, write trajectory CSV");
    add_problem_flags(solve, popts);
    add_control_flags(solve, uopts);
    solve->add_option("--out", out, "output CSV path")->default_val("trajectory.csv");

    auto* adj = app.add_subcommand("adjoint", "solve fwd + costate, write adjoint CSV");
    add_problem_flags(adj, popts);
    add_control_flags(adj, uopts);
    adj->add_option("--out", out, "output CSV path")->default_val("adjoint.csv");

    auto* check = app.add_subcommand("check", "screen a candidate control; exit 1 if rejected");
    add_problem_flags(check, popts);
    add_control_flags(check, uopts);
    check->add_option("--out", out, "report CSV path")->default_val("conditions.csv");
    check->add_option("--tol-pmp", tol.pmp, "first-order tolerance (default: scaled)");
    check->add_option("--tol-sing", tol.sing, "singularity tolerance (default: scaled)");
    check->add_option("--tol-2nd", tol.second, "second-order tolerance (default 1e-8)");

    auto* spike = app.add_subcommand("spike", "needle-variation experiment ladder");
    add_problem_flags(spike, popts);
    add_control_flags(spike, uopts);
    spike->add_option("--out", out, "output CSV path")->default_val("spike.csv");
    spike->add_option("--theta", theta, "spike start (grid node)")->required();
    spike->add_option("--v", v_raw, "spike control value(s)")->required();
    spike->add_option("--eps", eps0, "largest spike width (whole cells)")->required();
    spike->add_option("--ladder", ladder, "halving ladder length (default 3)");

    auto* example = app.add_subcommand("example", "reproduce a built-in problem's known results");
    example->add_option("name", example_name, "ex1 or ex2")->required();
    example->add_option("--alpha", popts.alpha, "fractional order (default 0.5)");
    example->add_option("--N", popts.steps, "grid steps (default 200)");

    auto* conv = app.add_subcommand("convergence", "manufactured-solution error ladder");
    conv->add_option("--alpha", popts.alpha, "fractional order (default 0.5)");
    conv->add_option("--out", out, "output CSV path")->default_val("convergence.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(popts, uopts, out);
        if (adj->parsed()) return cmd_adjoint(popts, uopts, out);
        if (check->parsed()) return cmd_check(popts, uopts, out, tol);
        if (spike->parsed()) return cmd_spike(popts, uopts, out, theta, v_raw, eps0, ladder);
        if (example->parsed()) return cmd_example(example_name, popts.alpha, popts.steps);
        if (conv->parsed()) return cmd_convergence(popts.alpha, out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

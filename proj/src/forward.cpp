#include "fdoc/forward.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fdoc/csv.hpp"

namespace fdoc {

namespace {

Trajectory march(const ProblemSpec& spec, const ControlSignal& u, const Trajectory* base,
                 int start_node) {
    const TimeGrid& g = spec.grid;
    if (u.cells() != g.steps)
        throw std::invalid_argument("solve_fdde: control has " + std::to_string(u.cells()) +
                                    " cells, grid has " + std::to_string(g.steps));
    for (const auto& val : u.values)
        if (!spec.controls.contains(val))
            throw std::domain_error("solve_fdde: control leaves the admissible set");

    const RieszWeightTable& table = riesz_table(g, spec.alpha);
    double inv_gamma = 1.0 / gamma_fn(spec.alpha.value);

    Trajectory traj;
    traj.grid = g;
    traj.history = spec.history;
    traj.states.assign(g.steps + 1, Vec());
    traj.states[0] = spec.history.y0;
    if (base)
        for (int i = 0; i < start_node && i <= g.steps; ++i) traj.states[i] = base->states[i];

    std::vector<Vec> fvals(g.steps + 1);
    for (int j = 0; j < start_node; ++j)
        fvals[j] = spec.dynamics.f(g.node(j), traj.states[j], traj.delayed(j), u.at_node(j));

    for (int i = std::max(start_node, 1); i <= g.steps; ++i) {
        const SingularWeightRow& row = table.row(i);
        Vec partial = Vec::Zero(spec.state_dim());
        for (int j = 0; j < i; ++j) partial += row.weights[j] * fvals[j];
        const Vec& yh = traj.delayed(i);
        const Vec& ui = u.at_node(i);
        double ti = g.node(i);
        double wii = row.weights[i];

        Vec guess = traj.states[i - 1];
        double first_residual = -1.0, residual = 0.0;
        bool converged = false;
        for (int sweep = 0; sweep < 50; ++sweep) {
            Vec next = traj.history.y0 +
                       inv_gamma * (partial + wii * spec.dynamics.f(ti, guess, yh, ui));
            residual = (next - guess).cwiseAbs().maxCoeff();
            guess = next;
            if (first_residual < 0.0) first_residual = residual;
            if (residual <= 1e-12) {
                converged = true;
                break;
            }
        }
        if (!converged && residual > first_residual)
            throw std::runtime_error("solve_fdde: corrector diverged at step " +
                                     std::to_string(i) + " (t = " + format_sig(ti) + ")");
        traj.states[i] = guess;
        fvals[i] = spec.dynamics.f(ti, guess, yh, ui);
    }
    return traj;
}

}  // namespace

Trajectory solve_fdde(const ProblemSpec& spec, const ControlSignal& u) {
    return march(spec, u, nullptr, 1);
}

Trajectory solve_fdde_resume(const ProblemSpec& spec, const ControlSignal& u,
                             const Trajectory& base, int first_changed_cell) {
    if (first_changed_cell < 0 || first_changed_cell > spec.grid.steps)
        throw std::invalid_argument("solve_fdde_resume: resume index out of range");
    return march(spec, u, &base, std::max(first_changed_cell, 1));
}

double evaluate_cost(const ProblemSpec& spec, const Trajectory& traj, const ControlSignal& u) {
    const TimeGrid& g = spec.grid;
    if (static_cast<int>(traj.states.size()) != g.steps + 1)
        throw std::invalid_argument("evaluate_cost: trajectory does not match the grid");
    double J = spec.cost.terminal(traj.states[g.steps]);
    if (spec.cost.has_running) {
        SingularWeightRow tw = terminal_weights(g, spec.cost.beta);
        double acc = 0.0;
        for (int j = 0; j <= g.steps; ++j)
            acc += tw.weights[j] *
                   spec.cost.running(g.node(j), traj.states[j], traj.delayed(j), u.at_node(j));
        J += acc / gamma_fn(spec.cost.beta.value);
    }
    return J;
}

std::vector<ConvergenceRecord> manufactured_convergence(Order alpha,
                                                        const std::vector<int>& ladder) {
    const double a = 0.6, b = -0.4, T = 1.0, h = 0.5;
    double a_v = alpha.value;
    double dcoef = 2.0 / gamma_fn(3.0 - a_v);
    auto forcing = [=](double t) -> Vec {
        Vec c(1);
        c[0] = dcoef * std::pow(t, 2.0 - a_v) - a * t * t - b * (t - h) * (t - h);
        return c;
    };
    std::vector<ConvergenceRecord> out;
    for (int N : ladder) {
        TimeGrid grid = TimeGrid::make(T, h, N);
        Mat A0(1, 1), A1(1, 1), B(1, 1);
        A0 << a;
        A1 << b;
        B << 0.0;
        auto phi = [](double s) -> Vec { return Vec::Constant(1, s * s); };
        ProblemSpec spec = make_problem(
            alpha, grid, HistorySegment::sampled(Vec::Zero(1), phi, grid),
            Dynamics::linear_forced(A0, A1, B, forcing), CostSpec::none(1, alpha),
            ControlSet{Vec::Zero(1), Vec::Zero(1)});
        Trajectory traj = solve_fdde(spec, ControlSignal::constant(grid, Vec::Zero(1)));
        double err = 0.0;
        for (int i = 0; i <= N; ++i) {
            double t = grid.node(i);
            err = std::max(err, std::abs(traj.states[i][0] - t * t));
        }
        out.push_back({N, err});
    }
    return out;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out = open_csv(path, "trajectory");
    int n = traj.states.empty() ? 0 : static_cast<int>(traj.states[0].size());
    std::vector<std::string> header{"t"};
    for (int i = 1; i <= n; ++i) header.push_back("y_" + std::to_string(i));
    write_csv_row(out, header);
    for (int j = 0; j < static_cast<int>(traj.states.size()); ++j) {
        std::vector<std::string> row{format_sig(traj.grid.node(j))};
        for (int i = 0; i < n; ++i) row.push_back(format_sig(traj.states[j][i]));
        write_csv_row(out, row);
    }
}

}  // namespace fdoc

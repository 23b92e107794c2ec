#include "fdoc/adjoint.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fdoc/csv.hpp"

namespace fdoc {

namespace {

// (Gamma(alpha)/Gamma(beta)) (T-t)^(beta-alpha); identically 1 when the two
// orders coincide, including at t = T.
double running_weight(const ProblemSpec& spec, double t) {
    double a = spec.alpha.value, b = spec.cost.beta.value;
    if (a == b) return 1.0;
    return gamma_fn(a) / gamma_fn(b) * std::pow(spec.grid.horizon - t, b - a);
}

}  // namespace

double hamiltonian(const ProblemSpec& spec, double t, const Vec& y, const Vec& yh, const Vec& u,
                   const Vec& psi) {
    double H = psi.dot(spec.dynamics.f(t, y, yh, u));
    if (spec.cost.has_running) H -= running_weight(spec, t) * spec.cost.running(t, y, yh, u);
    return H;
}

Vec hamiltonian_state_gradient(const ProblemSpec& spec, double t, const Vec& y, const Vec& yh,
                               const Vec& u, const Vec& psi) {
    Vec g = spec.dynamics.f_y(t, y, yh, u).transpose() * psi;
    if (spec.cost.has_running) g -= running_weight(spec, t) * spec.cost.running_y(t, y, yh, u);
    return g;
}

Vec hamiltonian_delayed_gradient(const ProblemSpec& spec, double t, const Vec& y, const Vec& yh,
                                 const Vec& u, const Vec& psi) {
    Vec g = spec.dynamics.f_yh(t, y, yh, u).transpose() * psi;
    if (spec.cost.has_running) g -= running_weight(spec, t) * spec.cost.running_yh(t, y, yh, u);
    return g;
}

AdjointPath solve_adjoint(const ProblemSpec& spec, const Trajectory& traj,
                          const ControlSignal& u) {
    const TimeGrid& g = spec.grid;
    const int N = g.steps, m = g.delay_steps, n = spec.state_dim();
    if (static_cast<int>(traj.states.size()) != N + 1)
        throw std::invalid_argument("solve_adjoint: trajectory does not match the grid");
    if (u.cells() != N) throw std::invalid_argument("solve_adjoint: control does not match grid");

    const DoubleSingularTable& ds = double_singular_table(g, spec.alpha);
    double inv_gamma = 1.0 / gamma_fn(spec.alpha.value);
    double T = g.horizon;
    double a = spec.alpha.value;

    AdjointPath psi;
    psi.grid = g;
    psi.values.assign(N + 1, Vec());
    psi.values[N] = -spec.cost.terminal_grad(traj.states[N]);

    // Jacobians along the process, and the H gradients at nodes where the
    // costate is already known.
    std::vector<Mat> fyT(N + 1), fyhT(N + 1);
    std::vector<Vec> w1(N + 1, Vec::Zero(n)), w2(N + 1, Vec::Zero(n));
    for (int k = 0; k <= N; ++k) {
        double tk = g.node(k);
        const Vec& yk = traj.states[k];
        const Vec& yhk = traj.delayed(k);
        const Vec& uk = u.at_node(k);
        fyT[k] = spec.dynamics.f_y(tk, yk, yhk, uk).transpose();
        fyhT[k] = spec.dynamics.f_yh(tk, yk, yhk, uk).transpose();
        if (spec.cost.has_running) {
            double wt = running_weight(spec, tk);
            w1[k] = wt * spec.cost.running_y(tk, yk, yhk, uk);
            w2[k] = wt * spec.cost.running_yh(tk, yk, yhk, uk);
        }
    }
    std::vector<Vec> grad_y(N + 1), grad_yh(N + 1);
    grad_y[N] = fyT[N] * psi.values[N] - w1[N];
    grad_yh[N] = fyhT[N] * psi.values[N] - w2[N];

    for (int i = N - 1; i >= 0; --i) {
        double prefac = inv_gamma * std::pow(T - g.node(i), 1.0 - a);
        Vec known = Vec::Zero(n);
        // First kernel, cells beyond the implicit one at tau ~ t_i: average
        // of the endpoint H_y values times the exact cell mass.
        for (int j = i + 1; j < N; ++j)
            known += ds.cell(i, j, N) * 0.5 * (grad_y[j] + grad_y[j + 1]);
        // Delayed kernel: lower limit t_i + h, nothing once it reaches T.
        for (int j = i + m; j < N; ++j)
            known += ds.cell(i + m, j, N) * 0.5 * (grad_yh[j] + grad_yh[j + 1]);
        double c_implicit = ds.cell(i, i, N);
        Vec rhs = -spec.cost.terminal_grad(traj.states[N]) + prefac * known -
                  prefac * c_implicit * w1[i];
        Mat M = Mat::Identity(n, n) - prefac * c_implicit * fyT[i];
        Eigen::FullPivLU<Mat> lu(M);
        if (lu.isInvertible()) {
            psi.values[i] = lu.solve(rhs);
        } else {
            // Damped sweeps as a fallback when the block degenerates.
            Vec guess = psi.values[i + 1];
            bool ok = false;
            for (int sweep = 0; sweep < 500; ++sweep) {
                Vec next = 0.5 * guess + 0.5 * (rhs + prefac * c_implicit * (fyT[i] * guess));
                double res = (next - guess).cwiseAbs().maxCoeff();
                guess = next;
                if (res <= 1e-10) {
                    ok = true;
                    break;
                }
            }
            if (!ok)
                throw std::runtime_error("solve_adjoint: implicit block failed at node " +
                                         std::to_string(i) + " (t = " +
                                         format_sig(g.node(i)) + ")");
            psi.values[i] = guess;
        }
        grad_y[i] = fyT[i] * psi.values[i] - w1[i];
        grad_yh[i] = fyhT[i] * psi.values[i] - w2[i];
    }
    return psi;
}

void write_adjoint_csv(const std::string& path, const AdjointPath& psi) {
    std::ofstream out = open_csv(path, "adjoint");
    int n = psi.values.empty() ? 0 : static_cast<int>(psi.values[0].size());
    std::vector<std::string> header{"t"};
    for (int i = 1; i <= n; ++i) header.push_back("psi_" + std::to_string(i));
    write_csv_row(out, header);
    for (int j = 0; j < static_cast<int>(psi.values.size()); ++j) {
        std::vector<std::string> row{format_sig(psi.grid.node(j))};
        for (int i = 0; i < n; ++i) row.push_back(format_sig(psi.values[j][i]));
        write_csv_row(out, row);
    }
}

}  // namespace fdoc

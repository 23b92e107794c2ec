#include "fdoc/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "fdoc/csv.hpp"

namespace fdoc {
namespace {

struct BoxMax {
    Vec arg;
    double value = -std::numeric_limits<double>::infinity();
};

// Golden-section maximization on [a, b]; returns the better of the interior
// probes and updates (best_x, best_val) only on improvement.
void golden_refine(const std::function<double(double)>& f, double a, double b, int iters,
                   double& best_x, double& best_val) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < iters && (b - a) > 0.0; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    if (fc > best_val) {
        best_val = fc;
        best_x = c;
    }
    if (fd > best_val) {
        best_val = fd;
        best_x = d;
    }
}

// Coordinate-sweep maximizer over the control box. Deterministic: starts at
// the current control (clamped), so the reported maximum never undershoots
// the value at the process control.
BoxMax maximize_over_box(const ControlSet& box, const Vec& start,
                         const std::function<double(const Vec&)>& obj, const ScanSettings& scan) {
    const int r = static_cast<int>(box.lower.size());
    BoxMax out;
    Vec x = start.cwiseMax(box.lower).cwiseMin(box.upper);
    out.arg = x;
    out.value = obj(x);
    const int sweeps = r == 1 ? 1 : std::max(1, scan.sweeps);
    const int npts = std::max(3, scan.points_per_dim);
    for (int pass = 0; pass < sweeps; ++pass) {
        for (int k = 0; k < r; ++k) {
            const double lo = box.lower[k], hi = box.upper[k];
            if (!(hi > lo)) {
                x[k] = lo;
                double fx = obj(x);
                if (fx > out.value) {
                    out.value = fx;
                    out.arg = x;
                }
                continue;
            }
            Vec probe = x;
            auto along = [&](double s) {
                probe[k] = s;
                return obj(probe);
            };
            int best_j = 0;
            double best = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < npts; ++j) {
                const double s = lo + (hi - lo) * j / (npts - 1);
                const double fs = along(s);
                if (fs > best) {
                    best = fs;
                    best_j = j;
                }
            }
            double bx = lo + (hi - lo) * best_j / (npts - 1);
            double bv = best;
            const double a = lo + (hi - lo) * std::max(0, best_j - 1) / (npts - 1);
            const double b = lo + (hi - lo) * std::min(npts - 1, best_j + 1) / (npts - 1);
            golden_refine(along, a, b, scan.golden_iters, bx, bv);
            if (bv > out.value) {
                x[k] = bx;
                out.value = bv;
                out.arg = x;
            } else {
                x = out.arg;
            }
        }
    }
    return out;
}

ConditionReport run_checks(const ProblemSpec& spec, const Trajectory& traj, const ControlSignal& u,
                           const AdjointPath& psi, ConditionTolerances tol, ScanSettings scan,
                           bool do_pmp, bool do_sing, bool do_second) {
    const int N = spec.grid.steps;
    const int m = spec.grid.delay_steps;
    if (static_cast<int>(traj.states.size()) != N + 1 || static_cast<int>(psi.values.size()) != N + 1)
        throw std::invalid_argument("condition check: trajectory/adjoint not on the problem grid");

    std::vector<double> H_u(N + 1);
    double h_scale = 0.0;
    for (int i = 0; i <= N; ++i) {
        H_u[i] = hamiltonian(spec, spec.grid.node(i), traj.states[i], traj.delayed(i),
                             u.at_node(i), psi.values[i]);
        h_scale = std::max(h_scale, std::abs(H_u[i]));
    }

    ConditionReport rep;
    rep.has_pmp = do_pmp;
    rep.has_singular = do_sing;
    rep.has_second = do_second;
    rep.tol_pmp = tol.pmp >= 0.0 ? tol.pmp : 1e-6 * (1.0 + h_scale);
    rep.tol_sing = tol.sing >= 0.0 ? tol.sing : 1e-6 * (1.0 + h_scale);
    rep.tol_second = tol.second >= 0.0 ? tol.second : 1e-8;
    rep.nodes.resize(N + 1);

    bool pmp_ok = true, sing_ok = true, second_ok = true;
    for (int i = 0; i <= N; ++i) {
        NodeConditionRecord& rec = rep.nodes[i];
        rec.t = spec.grid.node(i);
        rec.gap_argmax = u.at_node(i);
        rec.s_argmax = Vec::Zero(spec.dynamics.control_dim);
        if (do_pmp || do_sing) {
            auto obj = [&](const Vec& v) {
                return hamiltonian(spec, rec.t, traj.states[i], traj.delayed(i), v, psi.values[i]);
            };
            BoxMax mx = maximize_over_box(spec.controls, u.at_node(i), obj, scan);
            rec.gap = mx.value - H_u[i];
            rec.gap_argmax = mx.arg;
            if (rec.gap > rep.tol_pmp) pmp_ok = false;
            if (do_sing) {
                auto neg = [&](const Vec& v) { return -obj(v); };
                BoxMax mn = maximize_over_box(spec.controls, u.at_node(i), neg, scan);
                rec.delta_abs = std::max(rec.gap, H_u[i] + mn.value);
                rec.singular = rec.delta_abs <= rep.tol_sing;
                if (!rec.singular) sing_ok = false;
            }
        }
        // The terminal node carries no second-order information: the score's
        // kernel weight is anchored at T itself.
        if (do_second && i < N) {
            auto obj = [&](const Vec& v) { return second_order_score(spec, traj, u, psi, i, v); };
            BoxMax ms = maximize_over_box(spec.controls, u.at_node(i), obj, scan);
            rec.s_max = ms.value;
            rec.s_argmax = ms.arg;
            rec.second_order_tested = true;
            if (rec.s_max > rep.tol_second) second_ok = false;
        }
        (void)m;
    }
    rep.pmp_satisfied = do_pmp && pmp_ok;
    rep.singular_everywhere = do_sing && sing_ok;
    rep.second_order_satisfied = do_second && second_ok;
    rep.second_order_advisory = do_second && do_sing && !sing_ok;
    return rep;
}

}  // namespace

double delta_hamiltonian(const ProblemSpec& spec, const Trajectory& traj, const ControlSignal& u,
                         const AdjointPath& psi, int i, const Vec& v) {
    const double t = spec.grid.node(i);
    return hamiltonian(spec, t, traj.states[i], traj.delayed(i), v, psi.values[i]) -
           hamiltonian(spec, t, traj.states[i], traj.delayed(i), u.at_node(i), psi.values[i]);
}

Vec delta_hamiltonian_y(const ProblemSpec& spec, const Trajectory& traj, const ControlSignal& u,
                        const AdjointPath& psi, int i, const Vec& v) {
    const double t = spec.grid.node(i);
    return hamiltonian_state_gradient(spec, t, traj.states[i], traj.delayed(i), v, psi.values[i]) -
           hamiltonian_state_gradient(spec, t, traj.states[i], traj.delayed(i), u.at_node(i),
                                      psi.values[i]);
}

Vec delta_hamiltonian_yh(const ProblemSpec& spec, const Trajectory& traj, const ControlSignal& u,
                         const AdjointPath& psi, int i, const Vec& v) {
    const double t = spec.grid.node(i);
    return hamiltonian_delayed_gradient(spec, t, traj.states[i], traj.delayed(i), v, psi.values[i]) -
           hamiltonian_delayed_gradient(spec, t, traj.states[i], traj.delayed(i), u.at_node(i),
                                        psi.values[i]);
}

Vec delta_dynamics(const ProblemSpec& spec, const Trajectory& traj, const ControlSignal& u,
                   int i, const Vec& v) {
    const double t = spec.grid.node(i);
    return spec.dynamics.f(t, traj.states[i], traj.delayed(i), v) -
           spec.dynamics.f(t, traj.states[i], traj.delayed(i), u.at_node(i));
}

double second_order_score(const ProblemSpec& spec, const Trajectory& traj, const ControlSignal& u,
                          const AdjointPath& psi, int i, const Vec& v) {
    const int N = spec.grid.steps;
    const int m = spec.grid.delay_steps;
    if (i < 0 || i >= N) throw std::invalid_argument("second_order_score: node outside [0, N)");
    const double T = spec.grid.horizon;
    const double t = spec.grid.node(i);
    const double am1 = spec.alpha.value - 1.0;
    const Vec df = delta_dynamics(spec, traj, u, i, v);
    double s = std::pow(T - t, am1) * delta_hamiltonian_y(spec, traj, u, psi, i, v).dot(df);
    if (i + m < N)
        s += std::pow(T - t - spec.grid.delay, am1) *
             delta_hamiltonian_yh(spec, traj, u, psi, i + m, v).dot(df);
    return s;
}

ConditionReport check_pmp(const ProblemSpec& spec, const Trajectory& traj, const ControlSignal& u,
                          const AdjointPath& psi, ConditionTolerances tol, ScanSettings scan) {
    return run_checks(spec, traj, u, psi, tol, scan, true, false, false);
}

ConditionReport check_singular(const ProblemSpec& spec, const Trajectory& traj,
                               const ControlSignal& u, const AdjointPath& psi,
                               ConditionTolerances tol, ScanSettings scan) {
    return run_checks(spec, traj, u, psi, tol, scan, false, true, false);
}

ConditionReport check_second_order(const ProblemSpec& spec, const Trajectory& traj,
                                   const ControlSignal& u, const AdjointPath& psi,
                                   ConditionTolerances tol, ScanSettings scan) {
    return run_checks(spec, traj, u, psi, tol, scan, false, true, true);
}

ConditionReport check_all(const ProblemSpec& spec, const Trajectory& traj, const ControlSignal& u,
                          const AdjointPath& psi, ConditionTolerances tol, ScanSettings scan) {
    return run_checks(spec, traj, u, psi, tol, scan, true, true, true);
}

void write_condition_csv(const std::string& path, const ConditionReport& report) {
    const int r = report.nodes.empty() ? 0 : static_cast<int>(report.nodes.front().gap_argmax.size());
    std::ofstream os = open_csv(path, "conditions");
    std::string header = "t,gap";
    for (int k = 0; k < r; ++k) header += ",gap_v" + std::to_string(k + 1);
    header += ",delta_abs,singular,second_tested,S_max";
    for (int k = 0; k < r; ++k) header += ",S_v" + std::to_string(k + 1);
    os << header << "\n";
    for (const NodeConditionRecord& rec : report.nodes) {
        std::vector<double> row{rec.t, rec.gap};
        for (int k = 0; k < r; ++k) row.push_back(rec.gap_argmax.size() > k ? rec.gap_argmax[k] : 0.0);
        row.push_back(rec.delta_abs);
        row.push_back(rec.singular ? 1.0 : 0.0);
        row.push_back(rec.second_order_tested ? 1.0 : 0.0);
        row.push_back(rec.s_max);
        for (int k = 0; k < r; ++k) row.push_back(rec.s_argmax.size() > k ? rec.s_argmax[k] : 0.0);
        write_csv_row(os, row);
    }
    auto verdict = [](bool pass) { return pass ? "pass" : "fail"; };
    if (report.has_pmp)
        os << "# verdict first_order " << verdict(report.pmp_satisfied) << " tol "
           << format_sig(report.tol_pmp) << "\n";
    if (report.has_singular)
        os << "# verdict singular " << verdict(report.singular_everywhere) << " tol "
           << format_sig(report.tol_sing) << "\n";
    if (report.has_second) {
        os << "# verdict second_order " << verdict(report.second_order_satisfied) << " tol "
           << format_sig(report.tol_second) << "\n";
        if (report.second_order_advisory)
            os << "# note second_order advisory: process is not singular\n";
    }
    if (!os) throw std::runtime_error("failed writing " + path);
}

}  // namespace fdoc

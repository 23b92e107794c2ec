#pragma once

#include <string>
#include <vector>

#include "fdoc/problem.hpp"

namespace fdoc {

// Node values of a state path, plus the history needed to answer delayed
// reads near the left end.
struct Trajectory {
    TimeGrid grid;
    HistorySegment history;
    std::vector<Vec> states;  // size N + 1

    // y(t_i - h): a computed state when t_i >= h, otherwise a history sample.
    const Vec& delayed(int i) const {
        int m = grid.delay_steps;
        return i >= m ? states[i - m] : history.samples[i];
    }
};

// Marches the fractional delay equation with product-integration weights and
// an implicit corrector per step.
Trajectory solve_fdde(const ProblemSpec& spec, const ControlSignal& u);

// Same march, but states before node `first_changed_cell` are copied from
// `base` instead of recomputed.  Valid whenever `u` agrees with the control
// that produced `base` on every cell before that index (causality).
Trajectory solve_fdde_resume(const ProblemSpec& spec, const ControlSignal& u,
                             const Trajectory& base, int first_changed_cell);

double evaluate_cost(const ProblemSpec& spec, const Trajectory& traj, const ControlSignal& u);

// Solves a problem with known exact solution y(t) = t^2 (scalar, delayed
// linear term, history s^2) on each ladder grid and reports max node errors.
struct ConvergenceRecord {
    int steps;
    double max_error;
};
std::vector<ConvergenceRecord> manufactured_convergence(Order alpha,
                                                        const std::vector<int>& ladder);

// Schema "trajectory v1": t, y_1..y_n.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

}  // namespace fdoc

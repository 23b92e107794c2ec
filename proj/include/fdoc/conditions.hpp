#pragma once

#include <string>
#include <vector>

#include "fdoc/adjoint.hpp"
#include "fdoc/forward.hpp"
#include "fdoc/problem.hpp"

namespace fdoc {

// Deterministic box maximizer: a dense scan per control coordinate plus
// golden-section refinement around the best bracket, repeated in coordinate
// sweeps for multi-input problems.
struct ScanSettings {
    int points_per_dim = 201;
    int golden_iters = 80;
    int sweeps = 3;
};

// Negative entries mean "derive from the process": the first-order and
// singularity tolerances scale with 1 + max |H| along the process, the
// second-order tolerance is absolute.
struct ConditionTolerances {
    double pmp = -1.0;
    double sing = -1.0;
    double second = -1.0;
};

struct NodeConditionRecord {
    double t = 0.0;
    double gap = 0.0;            // max_v H(v) - H(u)
    Vec gap_argmax;
    double delta_abs = 0.0;      // max_v |H(v) - H(u)|
    bool singular = false;
    bool second_order_tested = false;
    double s_max = 0.0;          // max_v of the second-order score
    Vec s_argmax;
};

struct ConditionReport {
    std::vector<NodeConditionRecord> nodes;
    bool has_pmp = false, has_singular = false, has_second = false;
    bool pmp_satisfied = false;
    bool singular_everywhere = false;
    bool second_order_satisfied = false;
    bool second_order_advisory = false;  // set when the process is not singular
    double tol_pmp = 0.0, tol_sing = 0.0, tol_second = 0.0;
};

// Control-increment differences along the process at grid node `i`, with the
// control argument replaced by v (all state/costate data from the process).
double delta_hamiltonian(const ProblemSpec& spec, const Trajectory& traj, const ControlSignal& u,
                         const AdjointPath& psi, int i, const Vec& v);
Vec delta_hamiltonian_y(const ProblemSpec& spec, const Trajectory& traj, const ControlSignal& u,
                        const AdjointPath& psi, int i, const Vec& v);
Vec delta_hamiltonian_yh(const ProblemSpec& spec, const Trajectory& traj, const ControlSignal& u,
                         const AdjointPath& psi, int i, const Vec& v);
Vec delta_dynamics(const ProblemSpec& spec, const Trajectory& traj, const ControlSignal& u,
                   int i, const Vec& v);

// Second-order score at node i (t_i < T):
//   S(t_i, v) = (T-t_i)^(alpha-1) dHy(t_i, v) . df(t_i, v)
//             + (T-t_i-h)^(alpha-1) dHyh(t_i+h, v) . df(t_i, v),
// the delayed term dropped once t_i + h >= T.
double second_order_score(const ProblemSpec& spec, const Trajectory& traj,
                          const ControlSignal& u, const AdjointPath& psi, int i, const Vec& v);

ConditionReport check_pmp(const ProblemSpec& spec, const Trajectory& traj,
                          const ControlSignal& u, const AdjointPath& psi,
                          ConditionTolerances tol = {}, ScanSettings scan = {});
ConditionReport check_singular(const ProblemSpec& spec, const Trajectory& traj,
                               const ControlSignal& u, const AdjointPath& psi,
                               ConditionTolerances tol = {}, ScanSettings scan = {});
ConditionReport check_second_order(const ProblemSpec& spec, const Trajectory& traj,
                                   const ControlSignal& u, const AdjointPath& psi,
                                   ConditionTolerances tol = {}, ScanSettings scan = {});
ConditionReport check_all(const ProblemSpec& spec, const Trajectory& traj,
                          const ControlSignal& u, const AdjointPath& psi,
                          ConditionTolerances tol = {}, ScanSettings scan = {});

// Schema "conditions v1"; verdicts and tolerances go in trailing comments.
void write_condition_csv(const std::string& path, const ConditionReport& report);

}  // namespace fdoc

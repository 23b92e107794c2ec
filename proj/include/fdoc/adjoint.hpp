#pragma once

#include <string>
#include <vector>

#include "fdoc/forward.hpp"
#include "fdoc/problem.hpp"

namespace fdoc {

// Costate at the grid nodes.  Beyond the horizon the costate is zero by
// convention; callers never index past N.
struct AdjointPath {
    TimeGrid grid;
    std::vector<Vec> values;  // size N + 1
};

// H(t, y, y_h, u, psi) = psi . f - (Gamma(alpha)/Gamma(beta)) (T-t)^(beta-alpha) f0.
double hamiltonian(const ProblemSpec& spec, double t, const Vec& y, const Vec& yh, const Vec& u,
                   const Vec& psi);

// dH/dy and dH/dy_h at a point of the process.
Vec hamiltonian_state_gradient(const ProblemSpec& spec, double t, const Vec& y, const Vec& yh,
                               const Vec& u, const Vec& psi);
Vec hamiltonian_delayed_gradient(const ProblemSpec& spec, double t, const Vec& y, const Vec& yh,
                                 const Vec& u, const Vec& psi);

// Solves the backward integral equation for the costate along (traj, u):
// terminal value -grad Phi, doubly singular kernels handled with exact cell
// masses, one implicit n-by-n block per backward step.  The delayed kernel
// contributes nothing once t + h >= T.
AdjointPath solve_adjoint(const ProblemSpec& spec, const Trajectory& traj,
                          const ControlSignal& u);

// Schema "adjoint v1": t, psi_1..psi_n.
void write_adjoint_csv(const std::string& path, const AdjointPath& psi);

}  // namespace fdoc

#pragma once

#include <string>
#include <vector>

#include "fdoc/forward.hpp"
#include "fdoc/problem.hpp"

namespace fdoc {

// Normalized state-transition kernel for the linear delay system
//   D^alpha y = a(t) y + b(t) y(t-h) + g(t),  zero pre-history.
// F(t,s) solves, for fixed s,
//   F(t,s) = E + ((t-s)^(1-alpha)/Gamma(alpha)) *
//            [ int_s^t (t-tau)^(a-1) (tau-s)^(a-1) a(tau) F(tau,s) dtau
//            + int_s^{t-h} (t-tau-h)^(a-1) (tau-s)^(a-1) b(tau+h) F(tau,s) dtau ]
// and the homogeneous factor F1 collects the initial-state response:
//   F1(t) = E + (1/Gamma(alpha)) int_0^t (t-s)^(a-1) F(t,s) [a(s) + 1_{s>=h} b(s)] ds.
struct FundamentalMatrices {
    TimeGrid grid;
    std::vector<std::vector<Mat>> F;  // F[i][j] = F(t_i, t_j), 0 <= j <= i
    std::vector<Mat> F1;              // F1[i] = F1(t_i)
};

FundamentalMatrices solve_fundamental(const TimeGrid& grid, Order alpha, int dim,
                                      const MatrixFn& a, const MatrixFn& b);

// Convenience wrapper reading the coefficient matrices off a linear problem.
FundamentalMatrices solve_fundamental(const ProblemSpec& spec);

// Rebuilds the trajectory from the kernels:
//   y(t_i) = F1(t_i) y0 + (1/Gamma(alpha)) int_0^{t_i} (t_i-s)^(a-1) F(t_i,s) g(s) ds,
// g(s) = B u(s) + c(s). Requires a linear problem with zero pre-history.
Trajectory representation_solution(const ProblemSpec& spec, const ControlSignal& u,
                                   const FundamentalMatrices& fm);

// Schema "fundmatrix v1": the final-time slice F(T, t_j) alongside F1(t_j).
void write_fundamental_csv(const std::string& path, const FundamentalMatrices& fm);

}  // namespace fdoc

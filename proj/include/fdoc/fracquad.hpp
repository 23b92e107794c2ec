#pragma once

#include <vector>

#include "fdoc/time_grid.hpp"

namespace fdoc {

// Fractional order in (0, 1).  Used both for the state equation order alpha
// and the cost integral order beta (beta >= alpha is checked where the two
// meet, in the problem layer).
struct Order {
    explicit Order(double v);
    double value;
};

// Gamma(x) for x > 0.
double gamma_fn(double x);

// Incomplete symmetric beta integral B_z(a, a) = int_0^z s^(a-1) (1-s)^(a-1) ds
// for z in [0, 1].  B_1(a, a) = Gamma(a)^2 / Gamma(2a).
double beta_incomplete(Order alpha, double z);

// Exact integral of the doubly singular kernel over one cell:
//   int_a^b (t_eff - tau)^(alpha-1) * (tau - t)^(alpha-1) dtau
// with t <= a < b <= t_eff.  Reduces to incomplete-beta differences under
// z = (tau - t) / (t_eff - t).
double double_singular_cell(double t, double a, double b, double t_eff, Order alpha);

// Quadrature row: weights w_j such that sum_j w_j g(t_j) approximates a
// weakly singular integral of g, exactly when g is piecewise linear on the
// grid cells covered by the row.
struct SingularWeightRow {
    int target_index = 0;          // node the singularity sits at
    double exponent = 0.0;         // kernel exponent (alpha - 1)
    std::vector<double> weights;   // one weight per node 0..size-1
};

// Row i discretizes int_0^{t_i} (t_i - s)^(alpha-1) g(s) ds over nodes 0..i.
SingularWeightRow riesz_weights(const TimeGrid& grid, Order alpha, int i);

// Weights for int_0^T (T - t)^(beta-1) g(t) dt over nodes 0..N (identical to
// riesz_weights at i = N: the kernel shape is the same).
SingularWeightRow terminal_weights(const TimeGrid& grid, Order beta);

// All rows for one (grid, alpha) pair, built once and reused.  Memory is
// O(N^2); fine at the desk scales this library targets.
class RieszWeightTable {
  public:
    RieszWeightTable(const TimeGrid& grid, Order alpha);
    const SingularWeightRow& row(int i) const;
    int rows() const { return static_cast<int>(rows_.size()); }

  private:
    std::vector<SingularWeightRow> rows_;
};

// Cell masses of the doubly singular kernel for grid-aligned arguments:
//   cell(k, j, e) = int_{t_j}^{t_{j+1}} (t_e - tau)^(alpha-1) (tau - t_k)^(alpha-1) dtau,
// k <= j < e.  The value only depends on (e - k, j - k), so one triangular
// table serves every (singular point, endpoint) pair on the grid.
class DoubleSingularTable {
  public:
    DoubleSingularTable(const TimeGrid& grid, Order alpha);
    double cell(int sing_index, int j, int end_index) const;

  private:
    double dt_pow_ = 0.0;                      // dt^(2*alpha - 1)
    std::vector<std::vector<double>> mass_;    // mass_[span][offset], span >= 1
};

// Shared, lazily built caches keyed by (grid, alpha).  Returned references
// stay valid for the lifetime of the process.
const RieszWeightTable& riesz_table(const TimeGrid& grid, Order alpha);
const DoubleSingularTable& double_singular_table(const TimeGrid& grid, Order alpha);

}  // namespace fdoc

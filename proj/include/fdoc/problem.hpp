#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fdoc/fracquad.hpp"
#include "fdoc/time_grid.hpp"

namespace fdoc {

// State history on [-h, 0).  Samples are taken at the m grid nodes
// -h, -h+dt, ..., -dt; the initial state y(0) lives separately as y0.
struct HistorySegment {
    Eigen::VectorXd y0;
    std::vector<Eigen::VectorXd> samples;

    static HistorySegment constant(const Eigen::VectorXd& y0, const Eigen::VectorXd& phi,
                                   const TimeGrid& grid);
    static HistorySegment sampled(const Eigen::VectorXd& y0,
                                  const std::function<Eigen::VectorXd(double)>& phi,
                                  const TimeGrid& grid);
    bool is_zero() const;
};

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using MatrixFn = std::function<Mat(double)>;

// Right-hand side f(t, y, y_h, u) together with its first partials.  The
// coefficient matrices are kept when the dynamics came from one of the two
// structured forms, so such specs can be rendered back to config text.
struct Dynamics {
    enum class Kind { linear_delay, bilinear_delay, custom };

    Kind kind = Kind::custom;
    int state_dim = 0;
    int control_dim = 0;

    std::function<Vec(double, const Vec&, const Vec&, const Vec&)> f;
    std::function<Mat(double, const Vec&, const Vec&, const Vec&)> f_y;
    std::function<Mat(double, const Vec&, const Vec&, const Vec&)> f_yh;
    std::function<Mat(double, const Vec&, const Vec&, const Vec&)> f_u;

    // f = A0 y + A1 y_h + B u + c(t)
    static Dynamics linear(const Mat& A0, const Mat& A1, const Mat& B, const Vec& c);
    static Dynamics linear_forced(const Mat& A0, const Mat& A1, const Mat& B,
                                  const std::function<Vec(double)>& c);
    // f = (A + sum_i y_h[i] * B_i) u + A0 y + A1 y_h
    static Dynamics bilinear(const Mat& A, const std::vector<Mat>& B, const Mat& A0,
                             const Mat& A1);

    // Present only for the structured forms with constant coefficients.
    std::optional<Mat> const_A0, const_A1, const_B, const_bilinear_A;
    std::optional<std::vector<Mat>> const_bilinear_B;
    std::optional<Vec> const_c;
};

// Cost J = Phi(y(T)) + (1/Gamma(beta)) int_0^T (T-t)^(beta-1) f0(t, y, y_h, u) dt.
struct CostSpec {
    Order beta;
    std::function<double(const Vec&)> terminal;
    std::function<Vec(const Vec&)> terminal_grad;
    std::function<Mat(const Vec&)> terminal_hess;

    bool has_running = false;
    std::function<double(double, const Vec&, const Vec&, const Vec&)> running;
    std::function<Vec(double, const Vec&, const Vec&, const Vec&)> running_y;
    std::function<Vec(double, const Vec&, const Vec&, const Vec&)> running_yh;
    std::function<Vec(double, const Vec&, const Vec&, const Vec&)> running_u;

    // Present for the renderable forms.
    std::optional<Vec> linear_coeffs;
    std::optional<Mat> quadratic_matrix;

    static CostSpec mayer_linear(const Vec& c, Order beta);
    static CostSpec mayer_quadratic(const Mat& Q, Order beta);
    static CostSpec none(int n, Order beta);
};

// Box of admissible control values.
struct ControlSet {
    Vec lower, upper;
    bool contains(const Vec& u, double tol = 1e-12) const;
    int dim() const { return static_cast<int>(lower.size()); }
};

// Piecewise-constant control: values[j] holds on [t_j, t_{j+1}).  The node
// sample at t_j is the value of the cell starting there; at t_N the last
// cell's value is reused.
struct ControlSignal {
    std::vector<Vec> values;

    static ControlSignal constant(const TimeGrid& grid, const Vec& u);
    const Vec& at_node(int i) const {
        return values[i < static_cast<int>(values.size()) ? i : values.size() - 1];
    }
    int cells() const { return static_cast<int>(values.size()); }
};

struct ProblemSpec {
    Order alpha;
    TimeGrid grid;
    HistorySegment history;
    Dynamics dynamics;
    CostSpec cost;
    ControlSet controls;
    std::optional<std::string> builtin_name;

    int state_dim() const { return dynamics.state_dim; }
    int control_dim() const { return dynamics.control_dim; }
};

// Assembles and validates a problem; throws std::domain_error /
// std::invalid_argument with the offending field in the message.
ProblemSpec make_problem(Order alpha, const TimeGrid& grid, HistorySegment history,
                         Dynamics dynamics, CostSpec cost, ControlSet controls);

// Flat key/value config format (versioned, first line "fdoc-problem v1").
ProblemSpec load_problem(const std::string& config_text);
ProblemSpec load_problem_file(const std::string& path);
std::string render_problem(const ProblemSpec& spec);

// Named built-in problems "ex1" and "ex2" on T = 1, h = 1/2 (N must be even).
ProblemSpec builtin_example(const std::string& name, Order alpha, int N);

// Needle variation: replace base on [theta, theta+eps) by v.  theta and eps
// must be whole numbers of cells and v admissible.
ControlSignal spike_control(const ProblemSpec& spec, const ControlSignal& base, double theta,
                            double eps, const Vec& v);

// Control CSV (schema "control v1": t_start, u_1..u_r).
void write_control_csv(const std::string& path, const TimeGrid& grid, const ControlSignal& u);
ControlSignal read_control_csv(const std::string& path, const ProblemSpec& spec);

}  // namespace fdoc

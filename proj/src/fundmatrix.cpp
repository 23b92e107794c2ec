#include "fdoc/fundmatrix.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

#include "fdoc/csv.hpp"
#include "fdoc/fracquad.hpp"

namespace fdoc {
namespace {

bool prehistory_zero(const HistorySegment& history) {
    for (const auto& s : history.samples)
        if (s.size() && s.cwiseAbs().maxCoeff() != 0.0) return false;
    return true;
}

}  // namespace

FundamentalMatrices solve_fundamental(const TimeGrid& grid, Order alpha, int dim,
                                      const MatrixFn& a, const MatrixFn& b) {
    if (dim < 1) throw std::invalid_argument("fundamental kernel: state dimension must be positive");
    const int N = grid.steps;
    const int m = grid.delay_steps;
    const double al = alpha.value;
    const double inv_gamma = 1.0 / gamma_fn(al);
    const DoubleSingularTable& ds = double_singular_table(grid, alpha);
    const Mat E = Mat::Identity(dim, dim);

    std::vector<Mat> av(N + 1), bv(N + 1);
    for (int i = 0; i <= N; ++i) {
        av[i] = a(grid.node(i));
        bv[i] = b(grid.node(i));
        if (av[i].rows() != dim || av[i].cols() != dim || bv[i].rows() != dim ||
            bv[i].cols() != dim)
            throw std::invalid_argument("fundamental kernel: coefficient matrix has wrong shape");
    }

    FundamentalMatrices fm;
    fm.grid = grid;
    fm.F.resize(N + 1);
    for (int i = 0; i <= N; ++i) {
        fm.F[i].resize(i + 1);
        fm.F[i][i] = E;
    }

    // Column march: fix the source node k, step the first argument forward.
    // gv[j] = a(t_j) F(t_j, t_k); dv[j] = b(t_j + h) F(t_j, t_k).
    std::vector<Mat> gv(N + 1), dv(N + 1);
    for (int k = 0; k < N; ++k) {
        gv[k] = av[k];
        if (k + m <= N) dv[k] = bv[k + m];
        for (int i = k + 1; i <= N; ++i) {
            Mat known = Mat::Zero(dim, dim);
            double c_implicit = 0.0;
            for (int j = k; j < i; ++j) {
                const double half = 0.5 * ds.cell(k, j, i);
                known.noalias() += half * gv[j];
                if (j + 1 < i)
                    known.noalias() += half * gv[j + 1];
                else
                    c_implicit = half;
            }
            if (i - k > m) {
                for (int j = k; j < i - m; ++j) {
                    const double half = 0.5 * ds.cell(k, j, i - m);
                    known.noalias() += half * dv[j];
                    known.noalias() += half * dv[j + 1];
                }
            }
            const double prefac = inv_gamma * std::pow(grid.dt * (i - k), 1.0 - al);
            Mat M = E - (prefac * c_implicit) * av[i];
            Eigen::FullPivLU<Mat> lu(M);
            if (!lu.isInvertible())
                throw std::domain_error("fundamental kernel: implicit step is singular");
            fm.F[i][k] = lu.solve(E + prefac * known);
            gv[i] = av[i] * fm.F[i][k];
            if (i + m <= N) dv[i] = bv[i + m] * fm.F[i][k];
        }
    }

    // Homogeneous factor from the kernel-weighted coefficient row.
    const RieszWeightTable& rt = riesz_table(grid, alpha);
    fm.F1.resize(N + 1);
    fm.F1[0] = E;
    for (int i = 1; i <= N; ++i) {
        const SingularWeightRow& row = rt.row(i);
        Mat acc = Mat::Zero(dim, dim);
        for (int j = 0; j <= i; ++j) {
            Mat coef = av[j];
            if (j >= m) coef += bv[j];
            acc.noalias() += row.weights[j] * (fm.F[i][j] * coef);
        }
        fm.F1[i] = E + inv_gamma * acc;
    }
    return fm;
}

FundamentalMatrices solve_fundamental(const ProblemSpec& spec) {
    if (spec.dynamics.kind != Dynamics::Kind::linear_delay || !spec.dynamics.const_A0 ||
        !spec.dynamics.const_A1)
        throw std::invalid_argument("fundamental kernel: needs linear dynamics with constant matrices");
    const Mat A0 = *spec.dynamics.const_A0;
    const Mat A1 = *spec.dynamics.const_A1;
    return solve_fundamental(spec.grid, spec.alpha, spec.state_dim(),
                             [A0](double) { return A0; }, [A1](double) { return A1; });
}

Trajectory representation_solution(const ProblemSpec& spec, const ControlSignal& u,
                                   const FundamentalMatrices& fm) {
    if (spec.dynamics.kind != Dynamics::Kind::linear_delay)
        throw std::invalid_argument("representation: dynamics are not linear");
    if (!prehistory_zero(spec.history))
        throw std::domain_error("representation: pre-history must vanish");
    if (fm.grid.steps != spec.grid.steps || fm.grid.horizon != spec.grid.horizon)
        throw std::invalid_argument("representation: kernel grid does not match the problem");
    const int N = spec.grid.steps;
    const int n = spec.state_dim();
    const double inv_gamma = 1.0 / gamma_fn(spec.alpha.value);
    const Vec zero = Vec::Zero(n);

    // Affine part of the right-hand side: g(s) = f(s, 0, 0, u(s)).
    std::vector<Vec> g(N + 1);
    for (int j = 0; j <= N; ++j) g[j] = spec.dynamics.f(spec.grid.node(j), zero, zero, u.at_node(j));

    const RieszWeightTable& rt = riesz_table(spec.grid, spec.alpha);
    Trajectory out;
    out.grid = spec.grid;
    out.history = spec.history;
    out.states.resize(N + 1);
    out.states[0] = spec.history.y0;
    for (int i = 1; i <= N; ++i) {
        const SingularWeightRow& row = rt.row(i);
        Vec acc = Vec::Zero(n);
        for (int j = 0; j <= i; ++j) acc.noalias() += row.weights[j] * (fm.F[i][j] * g[j]);
        out.states[i] = fm.F1[i] * spec.history.y0 + inv_gamma * acc;
    }
    return out;
}

void write_fundamental_csv(const std::string& path, const FundamentalMatrices& fm) {
    const int N = fm.grid.steps;
    const int n = fm.F1.empty() ? 0 : static_cast<int>(fm.F1.front().rows());
    std::ofstream os = open_csv(path, "fundmatrix");
    std::string header = "t";
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            header += ",F_T_" + std::to_string(r + 1) + std::to_string(c + 1);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            header += ",F1_" + std::to_string(r + 1) + std::to_string(c + 1);
    os << header << "\n";
    for (int j = 0; j <= N; ++j) {
        std::vector<double> row{fm.grid.node(j)};
        const Mat& FT = fm.F[N][j];
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) row.push_back(FT(r, c));
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) row.push_back(fm.F1[j](r, c));
        write_csv_row(os, row);
    }
    if (!os) throw std::runtime_error("failed writing " + path);
}

}  // namespace fdoc

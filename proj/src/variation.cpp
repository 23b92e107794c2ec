#include "fdoc/variation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

#include "fdoc/csv.hpp"
#include "fdoc/fracquad.hpp"

namespace fdoc {
namespace {

// big^e - small^e without cancellation (0 <= small <= big).
double powa_diff(double big, double small, double e) {
    if (big <= 0.0) return 0.0;
    if (small <= 0.0) return std::pow(big, e);
    return -std::pow(big, e) * std::expm1(e * std::log1p(-(big - small) / big));
}

// Exact kernel moments over [a, b] (b <= T) against (T-t)^(alpha-1):
//   A = int (T-t)^(alpha-1) dt,  M = int (T-t)^(alpha-1) (t-a) dt.
void kernel_moments(double T, double alpha, double a, double b, double& A, double& M) {
    A = powa_diff(T - a, T - b, alpha) / alpha;
    M = (T - a) * A - powa_diff(T - a, T - b, alpha + 1.0) / (alpha + 1.0);
}

int cell_of(const TimeGrid& grid, double t, const char* what) {
    const double pos = t / grid.dt;
    const long idx = std::lround(pos);
    if (std::abs(pos - idx) > 1e-9 * std::max(1.0, std::abs(pos)))
        throw std::domain_error(std::string(what) + " is not grid aligned");
    return static_cast<int>(idx);
}

}  // namespace

SpikeExperiment run_spike(const ProblemSpec& spec, const ControlSignal& base_u,
                          const Trajectory& base_traj, const AdjointPath& psi, double theta,
                          const Vec& v, double eps) {
    const TimeGrid& grid = spec.grid;
    const double alpha = spec.alpha.value;
    const double T = grid.horizon;
    const int k = cell_of(grid, theta, "spike start");
    const int l = cell_of(grid, eps, "spike width");
    if (k + l >= grid.steps)
        throw std::domain_error("spike window must end strictly before the horizon");
    ControlSignal spiked = spike_control(spec, base_u, theta, eps, v);

    Trajectory perturbed = solve_fdde_resume(spec, spiked, base_traj, k);
    SpikeExperiment out;
    out.theta = theta;
    out.eps = eps;
    out.v = v;
    out.dJ_actual = evaluate_cost(spec, perturbed, spiked) - evaluate_cost(spec, base_traj, base_u);

    // First-order prediction: kernel-weighted integral of the Hamiltonian
    // increment over the needle window, piecewise linear between nodes.
    double acc = 0.0;
    double g_left = delta_hamiltonian(spec, base_traj, base_u, psi, k, v);
    for (int j = k; j < k + l; ++j) {
        const double g_right = delta_hamiltonian(spec, base_traj, base_u, psi, j + 1, v);
        double A, M;
        kernel_moments(T, alpha, grid.node(j), grid.node(j + 1), A, M);
        acc += g_left * A + (g_right - g_left) * M / grid.dt;
        g_left = g_right;
    }
    out.dJ_first = -acc / gamma_fn(alpha);

    const double s = second_order_score(spec, base_traj, base_u, psi, k, v);
    const double eps_pow = std::pow(eps, 1.0 + alpha);
    out.dJ_second = -eps_pow / (gamma_fn(alpha) * gamma_fn(alpha + 1.0)) * s;
    out.residual_ratio = (out.dJ_actual - out.dJ_first - out.dJ_second) / eps_pow;
    return out;
}

std::vector<double> make_eps_ladder(const ProblemSpec& spec, double theta, double eps0, int count) {
    const TimeGrid& grid = spec.grid;
    if (count < 1) throw std::invalid_argument("eps ladder needs at least one entry");
    std::vector<double> ladder;
    double eps = eps0;
    const int k = cell_of(grid, theta, "spike start");
    for (int j = 0; j < count; ++j, eps *= 0.5) {
        const int l = cell_of(grid, eps, "eps ladder entry");
        if (l < 1) throw std::domain_error("eps ladder entry below one grid cell");
        if (k + l >= grid.steps)
            throw std::domain_error("eps ladder entry must end strictly before the horizon");
        ladder.push_back(l * grid.dt);
    }
    return ladder;
}

GronwallProbe gronwall_probe(const ProblemSpec& spec, const ControlSignal& base_u, double theta,
                             const Vec& v, const std::vector<double>& eps_ladder) {
    Trajectory base = solve_fdde(spec, base_u);
    const int k = cell_of(spec.grid, theta, "spike start");
    GronwallProbe probe;
    for (double eps : eps_ladder) {
        ControlSignal spiked = spike_control(spec, base_u, theta, eps, v);
        Trajectory pert = solve_fdde_resume(spec, spiked, base, k);
        double norm = 0.0;
        for (std::size_t i = 0; i < base.states.size(); ++i)
            norm = std::max(norm, (pert.states[i] - base.states[i]).cwiseAbs().maxCoeff());
        probe.eps.push_back(eps);
        probe.norms.push_back(norm);
        if (eps > 0.0) probe.linear_constant = std::max(probe.linear_constant, norm / eps);
    }
    // Log-log least-squares slope over the entries with a measurable response.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t j = 0; j < probe.eps.size(); ++j) {
        if (probe.norms[j] <= 0.0) continue;
        const double x = std::log(probe.eps[j]), y = std::log(probe.norms[j]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    probe.exponent = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx)
                              : std::numeric_limits<double>::quiet_NaN();
    return probe;
}

LebesgueCheck lebesgue_asymptotic_check(const std::function<double(double)>& a, double horizon,
                                        Order alpha, double theta,
                                        const std::vector<double>& eps_ladder) {
    const double al = alpha.value;
    const double R = horizon - theta;
    LebesgueCheck out;
    for (double eps : eps_ladder) {
        if (theta + eps >= horizon)
            throw std::domain_error("window must end strictly before the horizon");
        // Both kernel factors folded into exact cell moments (incomplete
        // betas); only a(t) is interpolated, so a modest subdivision suffices.
        const int cells = 256;
        const double w = eps / cells;
        double acc = 0.0;
        double g_left = a(theta);
        double b0_left = boost::math::beta(al + 1.0, al, 0.0);
        double b1_left = boost::math::beta(al + 2.0, al, 0.0);
        for (int j = 0; j < cells; ++j) {
            const double s_lo = j * w, s_hi = (j + 1) * w;
            const double g_right = a(theta + s_hi);
            const double b0_right = boost::math::beta(al + 1.0, al, s_hi / R);
            const double b1_right = boost::math::beta(al + 2.0, al, s_hi / R);
            const double M0 = std::pow(R, 2.0 * al) * (b0_right - b0_left);
            const double M1 = std::pow(R, 2.0 * al + 1.0) * (b1_right - b1_left);
            acc += g_left * M0 + (g_right - g_left) * (M1 - s_lo * M0) / w;
            g_left = g_right;
            b0_left = b0_right;
            b1_left = b1_right;
        }
        out.integral.push_back(acc);
        out.leading.push_back(a(theta) * std::pow(R, al - 1.0) * std::pow(eps, al + 1.0) /
                              (al + 1.0));
    }
    return out;
}

void write_spike_csv(const std::string& path, const std::vector<SpikeExperiment>& runs) {
    const int r = runs.empty() ? 0 : static_cast<int>(runs.front().v.size());
    std::ofstream os = open_csv(path, "spike");
    std::string header = "theta,eps";
    for (int k = 0; k < r; ++k) header += ",v" + std::to_string(k + 1);
    header += ",dJ_actual,dJ_first,dJ_second,residual_ratio";
    os << header << "\n";
    for (const SpikeExperiment& run : runs) {
        std::vector<double> row{run.theta, run.eps};
        for (int k = 0; k < r; ++k) row.push_back(run.v[k]);
        row.push_back(run.dJ_actual);
        row.push_back(run.dJ_first);
        row.push_back(run.dJ_second);
        row.push_back(run.residual_ratio);
        write_csv_row(os, row);
    }
    if (!os) throw std::runtime_error("failed writing " + path);
}

}  // namespace fdoc

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fdoc/adjoint.hpp"
#include "fdoc/conditions.hpp"
#include "fdoc/forward.hpp"
#include "fdoc/problem.hpp"

namespace fdoc {

// One needle-variation run: the control is replaced by v on [theta, theta+eps),
// the cost increment is measured exactly and compared against the first- and
// second-order predictions built from the unperturbed process.
struct SpikeExperiment {
    double theta = 0.0;
    double eps = 0.0;
    Vec v;
    double dJ_actual = 0.0;
    double dJ_first = 0.0;
    double dJ_second = 0.0;
    double residual_ratio = 0.0;  // (actual - first - second) / eps^(1+alpha)
};

SpikeExperiment run_spike(const ProblemSpec& spec, const ControlSignal& base_u,
                          const Trajectory& base_traj, const AdjointPath& psi, double theta,
                          const Vec& v, double eps);

// Halving ladder eps0, eps0/2, ... (count entries), every entry a whole number
// of grid cells with theta + eps strictly before the horizon.
std::vector<double> make_eps_ladder(const ProblemSpec& spec, double theta, double eps0, int count);

// Empirical state-perturbation growth: max-norm of the trajectory difference
// per ladder entry, the log-log slope, and the constant a linear-in-eps bound
// would need.
struct GronwallProbe {
    std::vector<double> eps;
    std::vector<double> norms;
    double exponent = 0.0;
    double linear_constant = 0.0;  // max norms[j] / eps[j]
};

GronwallProbe gronwall_probe(const ProblemSpec& spec, const ControlSignal& base_u, double theta,
                             const Vec& v, const std::vector<double>& eps_ladder);

// Shrinking-window behaviour of
//   int_theta^{theta+eps} (T-t)^(alpha-1) (t-theta)^alpha a(t) dt:
// `integral` holds accurate values, `leading` the frozen-integrand prediction
// a(theta) (T-theta)^(alpha-1) eps^(alpha+1) / (alpha+1).
struct LebesgueCheck {
    std::vector<double> integral;
    std::vector<double> leading;
};

LebesgueCheck lebesgue_asymptotic_check(const std::function<double(double)>& a, double horizon,
                                        Order alpha, double theta,
                                        const std::vector<double>& eps_ladder);

// Schema "spike v1".
void write_spike_csv(const std::string& path, const std::vector<SpikeExperiment>& runs);

}  // namespace fdoc

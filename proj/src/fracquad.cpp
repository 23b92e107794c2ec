#include "fdoc/fracquad.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace fdoc {

TimeGrid TimeGrid::make(double T, double h, int N) {
    if (!(T > 0.0)) throw std::domain_error("TimeGrid: horizon must be positive");
    if (N < 1) throw std::domain_error("TimeGrid: need at least one step");
    if (!(h > 0.0) || !(h < T)) throw std::domain_error("TimeGrid: delay must lie in (0, T)");
    TimeGrid g;
    g.horizon = T;
    g.delay = h;
    g.steps = N;
    g.dt = T / N;
    double ratio = h / g.dt;
    int m = static_cast<int>(std::lround(ratio));
    if (m < 1 || std::abs(m * g.dt - h) > 1e-9 * std::max(1.0, T))
        throw std::domain_error("TimeGrid: delay is not a whole number of steps (h = " +
                                std::to_string(h) + ", dt = " + std::to_string(g.dt) + ")");
    g.delay_steps = m;
    return g;
}

Order::Order(double v) : value(v) {
    if (!(v > 0.0) || !(v < 1.0))
        throw std::domain_error("Order: value must lie in (0, 1), got " + std::to_string(v));
}

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("gamma_fn: argument must be positive");
    return std::tgamma(x);
}

double beta_incomplete(Order alpha, double z) {
    if (z < 0.0 || z > 1.0) throw std::domain_error("beta_incomplete: z must lie in [0, 1]");
    double a = alpha.value;
    if (z == 0.0) return 0.0;
    if (z == 1.0) return gamma_fn(a) * gamma_fn(a) / gamma_fn(2.0 * a);
    // Non-normalized incomplete beta; boost evaluates it by continued
    // fraction / series to near machine precision.
    return boost::math::beta(a, a, z);
}

double double_singular_cell(double t, double a, double b, double t_eff, Order alpha) {
    if (a == b) return 0.0;
    if (!(t <= a && a < b && b <= t_eff))
        throw std::domain_error("double_singular_cell: need t <= a < b <= t_eff");
    double span = t_eff - t;
    double za = (a - t) / span;
    double zb = (b - t) / span;
    return std::pow(span, 2.0 * alpha.value - 1.0) *
           (beta_incomplete(alpha, zb) - beta_incomplete(alpha, za));
}

namespace {

// p^e - (p-1)^e for integer p >= 1 without cancellation at large p.
double pow_diff(double p, double e) {
    if (p <= 1.0) return std::pow(p, e);
    return -std::pow(p, e) * std::expm1(e * std::log1p(-1.0 / p));
}

struct CellPrimitives {
    // A(p) = int_{p-1}^{p} s^alpha ds, B(p) = int_{p-1}^{p} s^(alpha-1) ds,
    // in units of the grid step.
    std::vector<double> A, B;
    CellPrimitives(int n, double alpha) : A(n + 1, 0.0), B(n + 1, 0.0) {
        for (int p = 1; p <= n; ++p) {
            A[p] = pow_diff(p, alpha + 1.0) / (alpha + 1.0);
            B[p] = pow_diff(p, alpha) / alpha;
        }
    }
    // Weight that cell p gives to the node at its left / right end when the
    // integrand is interpolated linearly across the cell.
    double left(int p) const { return A[p] - (p - 1) * B[p]; }
    double right(int p) const { return p * B[p] - A[p]; }
};

}  // namespace

SingularWeightRow riesz_weights(const TimeGrid& grid, Order alpha, int i) {
    if (i < 0 || i > grid.steps) throw std::domain_error("riesz_weights: node index out of range");
    SingularWeightRow row;
    row.target_index = i;
    row.exponent = alpha.value - 1.0;
    row.weights.assign(i + 1, 0.0);
    if (i == 0) return row;
    CellPrimitives prim(i, alpha.value);
    double scale = std::pow(grid.dt, alpha.value);
    // Cell p = i - j spans [t_{j}, t_{j+1}] seen from the singular node t_i.
    row.weights[0] = scale * prim.left(i);
    for (int j = 1; j < i; ++j)
        row.weights[j] = scale * (prim.right(i - j + 1) + prim.left(i - j));
    row.weights[i] = scale * prim.right(1);
    return row;
}

SingularWeightRow terminal_weights(const TimeGrid& grid, Order beta) {
    // (T - t)^(beta-1) is singular at the upper end exactly like the final
    // riesz row's kernel, so that row already is the terminal rule.
    return riesz_weights(grid, beta, grid.steps);
}

RieszWeightTable::RieszWeightTable(const TimeGrid& grid, Order alpha) {
    rows_.reserve(grid.steps + 1);
    // Shared per-cell primitives keep the full build at O(N^2) additions.
    CellPrimitives prim(grid.steps, alpha.value);
    double scale = std::pow(grid.dt, alpha.value);
    for (int i = 0; i <= grid.steps; ++i) {
        SingularWeightRow row;
        row.target_index = i;
        row.exponent = alpha.value - 1.0;
        row.weights.assign(i + 1, 0.0);
        if (i > 0) {
            row.weights[0] = scale * prim.left(i);
            for (int j = 1; j < i; ++j)
                row.weights[j] = scale * (prim.right(i - j + 1) + prim.left(i - j));
            row.weights[i] = scale * prim.right(1);
        }
        rows_.push_back(std::move(row));
    }
}

const SingularWeightRow& RieszWeightTable::row(int i) const {
    if (i < 0 || i >= static_cast<int>(rows_.size()))
        throw std::domain_error("RieszWeightTable: node index out of range");
    return rows_[i];
}

DoubleSingularTable::DoubleSingularTable(const TimeGrid& grid, Order alpha) {
    double a = alpha.value;
    dt_pow_ = std::pow(grid.dt, 2.0 * a - 1.0);
    mass_.resize(grid.steps + 1);
    std::vector<double> binc;
    for (int span = 1; span <= grid.steps; ++span) {
        binc.assign(span + 1, 0.0);
        for (int p = 1; p < span; ++p)
            binc[p] = beta_incomplete(alpha, static_cast<double>(p) / span);
        binc[span] = beta_incomplete(alpha, 1.0);
        double scale = std::pow(static_cast<double>(span), 2.0 * a - 1.0);
        mass_[span].assign(span, 0.0);
        for (int p = 0; p < span; ++p) mass_[span][p] = scale * (binc[p + 1] - binc[p]);
    }
}

double DoubleSingularTable::cell(int sing_index, int j, int end_index) const {
    int span = end_index - sing_index;
    int p = j - sing_index;
    if (span < 1 || span >= static_cast<int>(mass_.size()) || p < 0 || p >= span)
        throw std::domain_error("DoubleSingularTable: cell indices out of range");
    return dt_pow_ * mass_[span][p];
}

namespace {

struct CacheKey {
    int steps;
    std::uint64_t dt_bits;
    std::uint64_t alpha_bits;
    bool operator<(const CacheKey& o) const {
        if (steps != o.steps) return steps < o.steps;
        if (dt_bits != o.dt_bits) return dt_bits < o.dt_bits;
        return alpha_bits < o.alpha_bits;
    }
};

CacheKey make_key(const TimeGrid& grid, Order alpha) {
    CacheKey k;
    k.steps = grid.steps;
    static_assert(sizeof(double) == sizeof(std::uint64_t));
    std::memcpy(&k.dt_bits, &grid.dt, sizeof(double));
    std::memcpy(&k.alpha_bits, &alpha.value, sizeof(double));
    return k;
}

}  // namespace

const RieszWeightTable& riesz_table(const TimeGrid& grid, Order alpha) {
    static std::mutex mu;
    static std::map<CacheKey, std::unique_ptr<RieszWeightTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[make_key(grid, alpha)];
    if (!slot) slot = std::make_unique<RieszWeightTable>(grid, alpha);
    return *slot;
}

const DoubleSingularTable& double_singular_table(const TimeGrid& grid, Order alpha) {
    static std::mutex mu;
    static std::map<CacheKey, std::unique_ptr<DoubleSingularTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[make_key(grid, alpha)];
    if (!slot) slot = std::make_unique<DoubleSingularTable>(grid, alpha);
    return *slot;
}

}  // namespace fdoc

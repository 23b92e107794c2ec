#include "fdoc/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fdoc/csv.hpp"

namespace fdoc {

HistorySegment HistorySegment::constant(const Vec& y0, const Vec& phi, const TimeGrid& grid) {
    HistorySegment h;
    h.y0 = y0;
    h.samples.assign(grid.delay_steps, phi);
    return h;
}

HistorySegment HistorySegment::sampled(const Vec& y0, const std::function<Vec(double)>& phi,
                                       const TimeGrid& grid) {
    HistorySegment h;
    h.y0 = y0;
    h.samples.reserve(grid.delay_steps);
    for (int k = 0; k < grid.delay_steps; ++k) h.samples.push_back(phi(-grid.delay + k * grid.dt));
    return h;
}

bool HistorySegment::is_zero() const {
    if (y0.size() && y0.cwiseAbs().maxCoeff() != 0.0) return false;
    for (const auto& s : samples)
        if (s.size() && s.cwiseAbs().maxCoeff() != 0.0) return false;
    return true;
}

Dynamics Dynamics::linear(const Mat& A0, const Mat& A1, const Mat& B, const Vec& c) {
    Dynamics d = linear_forced(A0, A1, B, [c](double) { return c; });
    d.const_c = c;
    return d;
}

Dynamics Dynamics::linear_forced(const Mat& A0, const Mat& A1, const Mat& B,
                                 const std::function<Vec(double)>& c) {
    int n = static_cast<int>(A0.rows());
    int r = static_cast<int>(B.cols());
    if (A0.cols() != n || A1.rows() != n || A1.cols() != n || B.rows() != n)
        throw std::invalid_argument("Dynamics::linear: inconsistent matrix shapes");
    Dynamics d;
    d.kind = Kind::linear_delay;
    d.state_dim = n;
    d.control_dim = r;
    d.f = [A0, A1, B, c](double t, const Vec& y, const Vec& yh, const Vec& u) -> Vec {
        return A0 * y + A1 * yh + B * u + c(t);
    };
    d.f_y = [A0](double, const Vec&, const Vec&, const Vec&) -> Mat { return A0; };
    d.f_yh = [A1](double, const Vec&, const Vec&, const Vec&) -> Mat { return A1; };
    d.f_u = [B](double, const Vec&, const Vec&, const Vec&) -> Mat { return B; };
    d.const_A0 = A0;
    d.const_A1 = A1;
    d.const_B = B;
    return d;
}

Dynamics Dynamics::bilinear(const Mat& A, const std::vector<Mat>& B, const Mat& A0,
                            const Mat& A1) {
    int n = static_cast<int>(A.rows());
    int r = static_cast<int>(A.cols());
    if (static_cast<int>(B.size()) != n)
        throw std::invalid_argument("Dynamics::bilinear: need one gain matrix per state");
    for (const auto& Bi : B)
        if (Bi.rows() != n || Bi.cols() != r)
            throw std::invalid_argument("Dynamics::bilinear: gain matrix shape mismatch");
    if (A0.rows() != n || A0.cols() != n || A1.rows() != n || A1.cols() != n)
        throw std::invalid_argument("Dynamics::bilinear: inconsistent matrix shapes");
    Dynamics d;
    d.kind = Kind::bilinear_delay;
    d.state_dim = n;
    d.control_dim = r;
    auto gain = [A, B, n](const Vec& yh) -> Mat {
        Mat G = A;
        for (int i = 0; i < n; ++i) G += yh[i] * B[i];
        return G;
    };
    d.f = [gain, A0, A1](double, const Vec& y, const Vec& yh, const Vec& u) -> Vec {
        return gain(yh) * u + A0 * y + A1 * yh;
    };
    d.f_y = [A0](double, const Vec&, const Vec&, const Vec&) -> Mat { return A0; };
    d.f_yh = [B, A1, n](double, const Vec&, const Vec&, const Vec& u) -> Mat {
        Mat J = A1;
        for (int i = 0; i < n; ++i) J.col(i) += B[i] * u;
        return J;
    };
    d.f_u = [gain](double, const Vec&, const Vec& yh, const Vec&) -> Mat { return gain(yh); };
    d.const_bilinear_A = A;
    d.const_bilinear_B = B;
    d.const_A0 = A0;
    d.const_A1 = A1;
    return d;
}

CostSpec CostSpec::mayer_linear(const Vec& c, Order beta) {
    CostSpec s = none(static_cast<int>(c.size()), beta);
    s.terminal = [c](const Vec& y) { return c.dot(y); };
    s.terminal_grad = [c](const Vec&) { return c; };
    int n = static_cast<int>(c.size());
    s.terminal_hess = [n](const Vec&) { return Mat::Zero(n, n); };
    s.linear_coeffs = c;
    return s;
}

CostSpec CostSpec::mayer_quadratic(const Mat& Q, Order beta) {
    if (Q.rows() != Q.cols()) throw std::invalid_argument("CostSpec: quadratic matrix not square");
    CostSpec s = none(static_cast<int>(Q.rows()), beta);
    Mat sym = 0.5 * (Q + Q.transpose());
    s.terminal = [sym](const Vec& y) { return 0.5 * y.dot(sym * y); };
    s.terminal_grad = [sym](const Vec& y) -> Vec { return sym * y; };
    s.terminal_hess = [sym](const Vec&) { return sym; };
    s.quadratic_matrix = sym;
    return s;
}

CostSpec CostSpec::none(int n, Order beta) {
    CostSpec s{beta};
    s.terminal = [](const Vec&) { return 0.0; };
    s.terminal_grad = [n](const Vec&) { return Vec::Zero(n); };
    s.terminal_hess = [n](const Vec&) { return Mat::Zero(n, n); };
    s.has_running = false;
    return s;
}

bool ControlSet::contains(const Vec& u, double tol) const {
    if (u.size() != lower.size()) return false;
    for (int i = 0; i < u.size(); ++i)
        if (u[i] < lower[i] - tol || u[i] > upper[i] + tol) return false;
    return true;
}

ControlSignal ControlSignal::constant(const TimeGrid& grid, const Vec& u) {
    ControlSignal s;
    s.values.assign(grid.steps, u);
    return s;
}

ProblemSpec make_problem(Order alpha, const TimeGrid& grid, HistorySegment history,
                         Dynamics dynamics, CostSpec cost, ControlSet controls) {
    int n = dynamics.state_dim;
    int r = dynamics.control_dim;
    if (n < 1 || r < 1) throw std::invalid_argument("make_problem: empty state or control space");
    if (cost.beta.value + 1e-15 < alpha.value)
        throw std::domain_error("make_problem: cost order beta must satisfy beta >= alpha");
    if (history.y0.size() != n)
        throw std::invalid_argument("make_problem: y0 dimension mismatch");
    if (static_cast<int>(history.samples.size()) != grid.delay_steps)
        throw std::invalid_argument("make_problem: history must cover every node in [-h, 0)");
    for (const auto& s : history.samples)
        if (s.size() != n) throw std::invalid_argument("make_problem: history sample dimension");
    if (controls.lower.size() != r || controls.upper.size() != r)
        throw std::invalid_argument("make_problem: control bounds dimension mismatch");
    for (int i = 0; i < r; ++i)
        if (!(controls.lower[i] <= controls.upper[i]))
            throw std::domain_error("make_problem: control.lower exceeds control.upper");

    // Probe the right-hand side once for shape sanity.
    Vec probe = dynamics.f(0.0, Vec::Zero(n), Vec::Zero(n), controls.lower);
    if (probe.size() != n) throw std::invalid_argument("make_problem: f returns wrong dimension");

    // The terminal gradient must agree with central differences; catches
    // mismatched handwritten derivatives in custom costs.
    std::mt19937 rng(7201);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        Vec y(n);
        for (int i = 0; i < n; ++i) y[i] = unit(rng);
        Vec g = cost.terminal_grad(y);
        if (g.size() != n) throw std::invalid_argument("make_problem: terminal gradient dimension");
        const double step = 1e-6;
        for (int i = 0; i < n; ++i) {
            Vec yp = y, ym = y;
            yp[i] += step;
            ym[i] -= step;
            double fd = (cost.terminal(yp) - cost.terminal(ym)) / (2.0 * step);
            if (std::abs(fd - g[i]) > 1e-6 * (1.0 + std::abs(g[i])))
                throw std::invalid_argument(
                    "make_problem: terminal gradient disagrees with finite differences");
        }
    }

    ProblemSpec spec{alpha, grid, std::move(history), std::move(dynamics), std::move(cost),
                     std::move(controls)};
    return spec;
}

// ---------------------------------------------------------------------------
// Config text format
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kConfigVersion = "fdoc-problem v1";

struct RawConfig {
    std::map<std::string, std::vector<double>> numeric;
    std::map<std::string, std::string> text;
    bool has(const std::string& k) const {
        return numeric.count(k) > 0 || text.count(k) > 0;
    }
};

RawConfig tokenize_config(const std::string& body) {
    RawConfig raw;
    std::istringstream in(body);
    std::string line;
    bool version_seen = false;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (!version_seen) {
            std::string ver;
            ls >> ver;
            if (key + " " + ver != kConfigVersion)
                throw std::invalid_argument("config: first line must be '" +
                                            std::string(kConfigVersion) + "'");
            version_seen = true;
            continue;
        }
        std::vector<std::string> words;
        std::string w;
        while (ls >> w) words.push_back(w);
        if (words.empty()) throw std::invalid_argument("config: key '" + key + "' has no value");
        if (raw.has(key)) throw std::invalid_argument("config: duplicate key '" + key + "'");
        // Keys whose payload is a word rather than numbers.
        if (key == "dynamics.kind" || key == "dynamics.name") {
            raw.text[key] = words[0];
            continue;
        }
        if (key == "cost.terminal") {
            raw.text[key] = words[0];
            words.erase(words.begin());
        }
        std::vector<double> vals;
        for (const auto& token : words) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(token, &used);
            } catch (const std::exception&) {
                throw std::invalid_argument("config: key '" + key + "': bad number '" + token +
                                            "'");
            }
            if (used != token.size())
                throw std::invalid_argument("config: key '" + key + "': bad number '" + token +
                                            "'");
            vals.push_back(v);
        }
        raw.numeric[key] = vals;
    }
    if (!version_seen) throw std::invalid_argument("config: empty input");
    return raw;
}

double scalar_of(const RawConfig& raw, const std::string& key) {
    auto it = raw.numeric.find(key);
    if (it == raw.numeric.end() || it->second.size() != 1)
        throw std::invalid_argument("config: missing scalar key '" + key + "'");
    return it->second[0];
}

Vec vector_of(const RawConfig& raw, const std::string& key, int len) {
    auto it = raw.numeric.find(key);
    if (it == raw.numeric.end())
        throw std::invalid_argument("config: missing key '" + key + "'");
    if (static_cast<int>(it->second.size()) != len)
        throw std::invalid_argument("config: key '" + key + "' expects " + std::to_string(len) +
                                    " values");
    return Eigen::Map<const Vec>(it->second.data(), len);
}

Vec vector_or_zero(const RawConfig& raw, const std::string& key, int len) {
    if (!raw.has(key)) return Vec::Zero(len);
    return vector_of(raw, key, len);
}

Mat matrix_of(const RawConfig& raw, const std::string& key, int rows, int cols) {
    Vec flat = vector_of(raw, key, rows * cols);
    Mat M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) M(i, j) = flat[i * cols + j];
    return M;
}

Mat matrix_or_zero(const RawConfig& raw, const std::string& key, int rows, int cols) {
    if (!raw.has(key)) return Mat::Zero(rows, cols);
    return matrix_of(raw, key, rows, cols);
}

void append_matrix(std::ostringstream& out, const std::string& key, const Mat& M) {
    out << key;
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) out << ' ' << format_sig(M(i, j));
    out << '\n';
}

}  // namespace

ProblemSpec load_problem(const std::string& config_text) {
    RawConfig raw = tokenize_config(config_text);

    auto kind_it = raw.text.find("dynamics.kind");
    if (kind_it == raw.text.end())
        throw std::invalid_argument("config: missing key 'dynamics.kind'");
    const std::string& kind = kind_it->second;

    double alpha_v = scalar_of(raw, "alpha");
    int N = static_cast<int>(std::lround(scalar_of(raw, "N")));

    if (kind == "builtin") {
        auto name_it = raw.text.find("dynamics.name");
        if (name_it == raw.text.end())
            throw std::invalid_argument("config: builtin dynamics need 'dynamics.name'");
        for (const auto& [key, _] : raw.numeric)
            if (key != "alpha" && key != "beta" && key != "N" && key != "T" && key != "h" &&
                key != "n" && key != "r")
                throw std::invalid_argument("config: key '" + key +
                                            "' conflicts with builtin dynamics");
        ProblemSpec spec = builtin_example(name_it->second, Order(alpha_v), N);
        if (raw.has("beta")) {
            double beta_v = scalar_of(raw, "beta");
            if (std::abs(beta_v - spec.cost.beta.value) > 1e-12)
                throw std::invalid_argument("config: builtin problems fix beta = alpha");
        }
        if (raw.has("T") && std::abs(scalar_of(raw, "T") - spec.grid.horizon) > 1e-12)
            throw std::invalid_argument("config: builtin problems fix T = 1");
        if (raw.has("h") && std::abs(scalar_of(raw, "h") - spec.grid.delay) > 1e-12)
            throw std::invalid_argument("config: builtin problems fix h = 1/2");
        return spec;
    }

    Order alpha(alpha_v);
    Order beta(raw.has("beta") ? scalar_of(raw, "beta") : alpha_v);
    double T = scalar_of(raw, "T");
    double h = scalar_of(raw, "h");
    int n = static_cast<int>(std::lround(scalar_of(raw, "n")));
    int r = static_cast<int>(std::lround(scalar_of(raw, "r")));
    if (n < 1 || r < 1) throw std::invalid_argument("config: n and r must be positive");
    TimeGrid grid = TimeGrid::make(T, h, N);

    Dynamics dyn;
    if (kind == "linear_delay") {
        dyn = Dynamics::linear(matrix_or_zero(raw, "dynamics.A0", n, n),
                               matrix_or_zero(raw, "dynamics.A1", n, n),
                               matrix_or_zero(raw, "dynamics.B", n, r),
                               vector_or_zero(raw, "dynamics.c", n));
    } else if (kind == "bilinear_delay") {
        std::vector<Mat> gains;
        for (int i = 1; i <= n; ++i)
            gains.push_back(matrix_or_zero(raw, "dynamics.B" + std::to_string(i), n, r));
        dyn = Dynamics::bilinear(matrix_of(raw, "dynamics.A", n, r), gains,
                                 matrix_or_zero(raw, "dynamics.A0", n, n),
                                 matrix_or_zero(raw, "dynamics.A1", n, n));
    } else {
        throw std::invalid_argument("config: unknown dynamics.kind '" + kind + "'");
    }

    CostSpec cost = CostSpec::none(n, beta);
    auto cost_it = raw.text.find("cost.terminal");
    if (cost_it != raw.text.end()) {
        if (cost_it->second == "linear")
            cost = CostSpec::mayer_linear(vector_of(raw, "cost.terminal", n), beta);
        else if (cost_it->second == "quadratic")
            cost = CostSpec::mayer_quadratic(matrix_of(raw, "cost.terminal", n, n), beta);
        else if (cost_it->second == "none")
            cost = CostSpec::none(n, beta);
        else
            throw std::invalid_argument("config: unknown cost.terminal form '" + cost_it->second +
                                        "'");
    }

    ControlSet controls{vector_of(raw, "control.lower", r), vector_of(raw, "control.upper", r)};
    HistorySegment hist = HistorySegment::constant(vector_or_zero(raw, "y0", n),
                                                   vector_or_zero(raw, "history", n), grid);

    std::vector<std::string> allowed{"alpha",         "beta",          "T",
                                     "h",             "N",             "n",
                                     "r",             "y0",            "history",
                                     "control.lower", "control.upper", "cost.terminal",
                                     "dynamics.kind", "dynamics.A0",   "dynamics.A1"};
    if (kind == "linear_delay") {
        allowed.push_back("dynamics.B");
        allowed.push_back("dynamics.c");
    } else {
        allowed.push_back("dynamics.A");
        for (int i = 1; i <= n; ++i) allowed.push_back("dynamics.B" + std::to_string(i));
    }
    auto check_known = [&](const std::string& key) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw std::invalid_argument("config: unknown key '" + key + "'");
    };
    for (const auto& [key, value] : raw.numeric) check_known(key);
    for (const auto& [key, value] : raw.text) check_known(key);

    return make_problem(alpha, grid, std::move(hist), std::move(dyn), std::move(cost),
                        std::move(controls));
}

ProblemSpec load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream body;
    body << in.rdbuf();
    return load_problem(body.str());
}

std::string render_problem(const ProblemSpec& spec) {
    std::ostringstream out;
    out << kConfigVersion << '\n';
    out << "alpha " << format_sig(spec.alpha.value) << '\n';
    out << "beta " << format_sig(spec.cost.beta.value) << '\n';
    out << "T " << format_sig(spec.grid.horizon) << '\n';
    out << "h " << format_sig(spec.grid.delay) << '\n';
    out << "N " << spec.grid.steps << '\n';

    if (spec.builtin_name) {
        out << "dynamics.kind builtin\n";
        out << "dynamics.name " << *spec.builtin_name << '\n';
        return out.str();
    }

    int n = spec.state_dim();
    int r = spec.control_dim();
    out << "n " << n << '\n';
    out << "r " << r << '\n';
    const Dynamics& d = spec.dynamics;
    if (d.kind == Dynamics::Kind::linear_delay && d.const_c) {
        out << "dynamics.kind linear_delay\n";
        append_matrix(out, "dynamics.A0", *d.const_A0);
        append_matrix(out, "dynamics.A1", *d.const_A1);
        append_matrix(out, "dynamics.B", *d.const_B);
        append_matrix(out, "dynamics.c", d.const_c->transpose());
    } else if (d.kind == Dynamics::Kind::bilinear_delay && d.const_bilinear_A) {
        out << "dynamics.kind bilinear_delay\n";
        append_matrix(out, "dynamics.A", *d.const_bilinear_A);
        for (int i = 0; i < n; ++i)
            append_matrix(out, "dynamics.B" + std::to_string(i + 1), (*d.const_bilinear_B)[i]);
        append_matrix(out, "dynamics.A0", *d.const_A0);
        append_matrix(out, "dynamics.A1", *d.const_A1);
    } else {
        throw std::invalid_argument("render_problem: dynamics are not expressible as config text");
    }

    if (spec.cost.linear_coeffs)
        append_matrix(out, "cost.terminal linear", spec.cost.linear_coeffs->transpose());
    else if (spec.cost.quadratic_matrix)
        append_matrix(out, "cost.terminal quadratic", *spec.cost.quadratic_matrix);
    else
        out << "cost.terminal none\n";

    append_matrix(out, "control.lower", spec.controls.lower.transpose());
    append_matrix(out, "control.upper", spec.controls.upper.transpose());
    append_matrix(out, "y0", spec.history.y0.transpose());
    // Only constant histories are expressible in config text.
    Vec phi0 = spec.history.samples.empty() ? Vec::Zero(n) : spec.history.samples.front();
    for (const auto& s : spec.history.samples)
        if ((s - phi0).cwiseAbs().maxCoeff() != 0.0)
            throw std::invalid_argument("render_problem: non-constant history");
    append_matrix(out, "history", phi0.transpose());
    return out.str();
}

ProblemSpec builtin_example(const std::string& name, Order alpha, int N) {
    if (N < 2 || N % 2 != 0)
        throw std::domain_error("builtin_example: N must be even so h = 1/2 is grid-aligned");
    TimeGrid grid = TimeGrid::make(1.0, 0.5, N);
    Vec zero2 = Vec::Zero(2);
    HistorySegment hist = HistorySegment::constant(zero2, zero2, grid);
    Vec lo = Vec::Constant(1, -1.0), hi = Vec::Constant(1, 1.0);

    ProblemSpec spec = [&] {
        if (name == "ex1") {
            Mat A1(2, 2);
            A1 << 0, 1, 0, 0;
            Mat B(2, 1);
            B << 1, 1;
            Vec c0(2);
            c0 << 1, 0;
            return make_problem(alpha, grid, hist,
                                Dynamics::linear(Mat::Zero(2, 2), A1, B, Vec::Zero(2)),
                                CostSpec::mayer_linear(c0, alpha), ControlSet{lo, hi});
        }
        if (name == "ex2") {
            Mat A(2, 1);
            A << 1, 0;
            Mat B1(2, 1);
            B1 << 0, -1;
            std::vector<Mat> gains{B1, Mat::Zero(2, 1)};
            Vec c1(2);
            c1 << 0, 1;
            return make_problem(alpha, grid, hist,
                                Dynamics::bilinear(A, gains, Mat::Zero(2, 2), Mat::Zero(2, 2)),
                                CostSpec::mayer_linear(c1, alpha), ControlSet{lo, hi});
        }
        throw std::invalid_argument("builtin_example: unknown name '" + name +
                                    "' (expected ex1 or ex2)");
    }();
    spec.builtin_name = name;
    return spec;
}

ControlSignal spike_control(const ProblemSpec& spec, const ControlSignal& base, double theta,
                            double eps, const Vec& v) {
    const TimeGrid& g = spec.grid;
    if (base.cells() != g.steps)
        throw std::invalid_argument("spike_control: base control does not match the grid");
    if (!spec.controls.contains(v))
        throw std::domain_error("spike_control: spike value outside the control set");
    double tol = 1e-9 * std::max(1.0, g.horizon);
    int i0 = static_cast<int>(std::lround(theta / g.dt));
    if (std::abs(i0 * g.dt - theta) > tol || i0 < 0)
        throw std::domain_error("spike_control: theta is not a grid node");
    int k = static_cast<int>(std::lround(eps / g.dt));
    if (k < 1 || std::abs(k * g.dt - eps) > tol)
        throw std::domain_error("spike_control: eps is not a whole number of cells");
    if (theta + eps > g.horizon + tol)
        throw std::domain_error("spike_control: spike window [theta, theta+eps) leaves [0, T]");
    if (i0 + k > g.steps) throw std::domain_error("spike_control: spike window leaves the grid");
    ControlSignal out = base;
    for (int j = i0; j < i0 + k; ++j) out.values[j] = v;
    return out;
}

void write_control_csv(const std::string& path, const TimeGrid& grid, const ControlSignal& u) {
    std::ofstream out = open_csv(path, "control");
    std::vector<std::string> header{"t_start"};
    int r = u.values.empty() ? 0 : static_cast<int>(u.values[0].size());
    for (int i = 1; i <= r; ++i) header.push_back("u_" + std::to_string(i));
    write_csv_row(out, header);
    for (int j = 0; j < u.cells(); ++j) {
        std::vector<std::string> row{format_sig(grid.node(j))};
        for (int i = 0; i < r; ++i) row.push_back(format_sig(u.values[j][i]));
        write_csv_row(out, row);
    }
}

ControlSignal read_control_csv(const std::string& path, const ProblemSpec& spec) {
    CsvContent content = read_csv(path);
    const TimeGrid& g = spec.grid;
    int r = spec.control_dim();
    if (static_cast<int>(content.rows.size()) != g.steps)
        throw std::invalid_argument("control csv: expected one row per grid cell");
    ControlSignal u;
    u.values.reserve(g.steps);
    for (int j = 0; j < g.steps; ++j) {
        const auto& row = content.rows[j];
        if (static_cast<int>(row.size()) != r + 1)
            throw std::invalid_argument("control csv: wrong column count at row " +
                                        std::to_string(j));
        double t = std::stod(row[0]);
        if (std::abs(t - g.node(j)) > 1e-9 * std::max(1.0, g.horizon))
            throw std::invalid_argument("control csv: cell start times do not match the grid");
        Vec val(r);
        for (int i = 0; i < r; ++i) val[i] = std::stod(row[i + 1]);
        u.values.push_back(val);
    }
    return u;
}

}  // namespace fdoc

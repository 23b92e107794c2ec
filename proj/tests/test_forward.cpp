#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fdoc/forward.hpp"
#include "fdoc/reference.hpp"

using namespace fdoc;

namespace {

// D^a y = y(t-h) with unit history and y(0) = 0: the right-hand side is
// exactly 1 until t = h, so y(t) = t^a / Gamma(1+a) there.
ProblemSpec unit_history_feedback(double alpha, int N) {
    TimeGrid grid = TimeGrid::make(1.0, 0.5, N);
    Mat A0 = Mat::Zero(1, 1), A1 = Mat::Ones(1, 1), B = Mat::Zero(1, 1);
    B(0, 0) = 1.0;
    return make_problem(Order(alpha), grid,
                        HistorySegment::constant(Vec::Zero(1), Vec::Ones(1), grid),
                        Dynamics::linear(A0, A1, B, Vec::Zero(1)),
                        CostSpec::mayer_linear(Vec::Ones(1), Order(alpha)),
                        ControlSet{Vec::Constant(1, -2.0), Vec::Constant(1, 2.0)});
}

}  // namespace

TEST_CASE("delayed feedback of the history is integrated exactly while it is constant") {
    for (double alpha : {0.3, 0.5, 0.8}) {
        CAPTURE(alpha);
        ProblemSpec spec = unit_history_feedback(alpha, 40);
        ControlSignal u = ControlSignal::constant(spec.grid, Vec::Zero(1));
        Trajectory traj = solve_fdde(spec, u);
        const double ga = std::tgamma(1.0 + alpha);
        // strictly below h every delayed sample is the history value 1; at
        // t = h the read switches to y(0) = 0, so exactness stops there
        for (int i = 0; i < spec.grid.delay_steps; ++i) {
            const double t = spec.grid.node(i);
            CHECK(traj.states[i][0] == doctest::Approx(std::pow(t, alpha) / ga).epsilon(1e-10));
        }
        // the jump contributes one O(dt^alpha) node error, nothing worse
        const double th = spec.grid.node(spec.grid.delay_steps);
        CHECK(std::abs(traj.states[spec.grid.delay_steps][0] - std::pow(th, alpha) / ga) <
              2.0 * std::pow(spec.grid.dt, alpha));
        // past t = h the delayed term starts reading computed states, so the
        // pure-power law must break
        CHECK(std::abs(traj.states[spec.grid.steps][0] - 1.0 / ga) > 1e-3);
    }
}

TEST_CASE("bilinear benchmark matches its closed forms") {
    const double u0 = -0.5;
    for (double alpha : {0.3, 0.5, 0.7}) {
        CAPTURE(alpha);
        ProblemSpec spec = builtin_example("ex2", Order(alpha), 200);
        ControlSignal u = ControlSignal::constant(spec.grid, Vec::Constant(1, u0));
        Trajectory traj = solve_fdde(spec, u);
        for (int i = 0; i <= spec.grid.steps; i += 25) {
            const double t = spec.grid.node(i);
            // first state integrates a constant: exact up to rounding
            CHECK(traj.states[i][0] ==
                  doctest::Approx(reference::ex2_y1(t, Order(alpha), u0)).epsilon(1e-11));
            CHECK(std::abs(traj.states[i][1] - reference::ex2_y2(t, Order(alpha), u0)) < 5e-3);
        }
        const double J = evaluate_cost(spec, traj, u);
        CHECK(std::abs(J - reference::ex2_cost(Order(alpha), u0)) < 5e-4);
    }
}

TEST_CASE("manufactured solution converges at first order or better") {
    for (double alpha : {0.4, 0.7}) {
        CAPTURE(alpha);
        auto ladder = manufactured_convergence(Order(alpha), {32, 64, 128, 256});
        REQUIRE(ladder.size() == 4);
        for (std::size_t k = 1; k < ladder.size(); ++k) {
            CAPTURE(k);
            const double rate = std::log2(ladder[k - 1].max_error / ladder[k].max_error);
            CHECK(rate > 1.0);
        }
        CHECK(ladder.back().max_error < 1e-4);
    }
}

TEST_CASE("linear dynamics respond linearly to the control") {
    ProblemSpec spec = builtin_example("ex1", Order(0.6), 80);
    ControlSignal u1 = ControlSignal::constant(spec.grid, Vec::Constant(1, 0.3));
    ControlSignal u2 = ControlSignal::constant(spec.grid, Vec::Constant(1, 0.9));
    Trajectory t1 = solve_fdde(spec, u1);
    Trajectory t2 = solve_fdde(spec, u2);
    // zero history and f linear homogeneous in (y, y_h, u) => y scales with u
    for (int i = 0; i <= spec.grid.steps; i += 10)
        CHECK((t2.states[i] - 3.0 * t1.states[i]).cwiseAbs().maxCoeff() <
              1e-11 * (1.0 + t2.states[i].cwiseAbs().maxCoeff()));
}

TEST_CASE("states before a control change are untouched") {
    ProblemSpec spec = builtin_example("ex2", Order(0.5), 64);
    ControlSignal base = ControlSignal::constant(spec.grid, Vec::Constant(1, -1.0));
    Trajectory ref = solve_fdde(spec, base);

    ControlSignal bumped = base;
    const int cell = 40;
    bumped.values[cell] = Vec::Constant(1, 1.0);
    Trajectory full = solve_fdde(spec, bumped);
    // the corrector at node i samples the cell starting at t_i, so the last
    // unaffected state is the one at the changed cell's left node minus one
    for (int i = 0; i < cell; ++i)
        CHECK(full.states[i] == ref.states[i]);  // bitwise: same arithmetic path
    CHECK((full.states[spec.grid.steps] - ref.states[spec.grid.steps]).cwiseAbs().maxCoeff() >
          1e-4);

    SUBCASE("resume reproduces the full march bitwise") {
        Trajectory fast = solve_fdde_resume(spec, bumped, ref, cell);
        for (int i = 0; i <= spec.grid.steps; ++i) CHECK(fast.states[i] == full.states[i]);
    }
    SUBCASE("resume from cell zero equals a fresh solve") {
        Trajectory fresh = solve_fdde_resume(spec, bumped, ref, 0);
        for (int i = 0; i <= spec.grid.steps; ++i) CHECK(fresh.states[i] == full.states[i]);
    }
}

TEST_CASE("zero right-hand side keeps the state at y0") {
    TimeGrid grid = TimeGrid::make(1.0, 0.25, 16);
    Vec y0 = Vec::Constant(2, 1.5);
    ProblemSpec spec = make_problem(
        Order(0.5), grid, HistorySegment::constant(y0, Vec::Zero(2), grid),
        Dynamics::linear(Mat::Zero(2, 2), Mat::Zero(2, 2), Mat::Zero(2, 1), Vec::Zero(2)),
        CostSpec::mayer_linear(Vec::Ones(2), Order(0.5)),
        ControlSet{Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)});
    ControlSignal u = ControlSignal::constant(grid, Vec::Zero(1));
    Trajectory traj = solve_fdde(spec, u);
    for (const auto& y : traj.states) CHECK((y - y0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("delayed read before h comes from the history") {
    ProblemSpec spec = unit_history_feedback(0.5, 16);
    ControlSignal u = ControlSignal::constant(spec.grid, Vec::Zero(1));
    Trajectory traj = solve_fdde(spec, u);
    CHECK(traj.delayed(0)[0] == doctest::Approx(1.0));      // history sample at -h
    CHECK(traj.delayed(3)[0] == doctest::Approx(1.0));      // still history
    CHECK(traj.delayed(8)[0] == traj.states[0][0]);         // m = 8: first computed state
    CHECK(traj.delayed(12)[0] == traj.states[4][0]);
}

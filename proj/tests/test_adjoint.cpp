#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fdoc/adjoint.hpp"
#include "fdoc/reference.hpp"

using namespace fdoc;

TEST_CASE("linear benchmark costate matches the closed form") {
    for (double a : {0.4, 0.5, 0.7}) {
        CAPTURE(a);
        ProblemSpec spec = builtin_example("ex1", Order(a), 200);
        ControlSignal u = ControlSignal::constant(spec.grid, Vec::Zero(1));
        Trajectory traj = solve_fdde(spec, u);
        AdjointPath psi = solve_adjoint(spec, traj, u);

        double worst = 0.0;
        for (int i = 0; i <= spec.grid.steps; ++i) {
            const double t = spec.grid.node(i);
            // first component solves a kernel equation with zero coupling:
            // it stays at the terminal value
            CHECK(psi.values[i][0] == doctest::Approx(-1.0).epsilon(1e-9));
            if (t < reference::horizon - reference::delay - 1e-12)
                worst = std::max(worst,
                                 std::abs(psi.values[i][1] - reference::ex1_costate2(t, Order(a))));
            else
                CHECK(std::abs(psi.values[i][1]) < 1e-9);  // delayed window closed
        }
        CHECK(worst < 1e-2);
    }
}

TEST_CASE("half order costate is reproduced to rounding") {
    // at alpha = 1/2 the closed form is constant on [0, T-h); the scheme's
    // cell masses are exact there, so the march is discretization-exact
    ProblemSpec spec = builtin_example("ex1", Order(0.5), 200);
    ControlSignal u = ControlSignal::constant(spec.grid, Vec::Zero(1));
    Trajectory traj = solve_fdde(spec, u);
    AdjointPath psi = solve_adjoint(spec, traj, u);
    for (int i = 0; i <= spec.grid.steps; ++i) {
        const double t = spec.grid.node(i);
        CHECK(std::abs(psi.values[i][1] - reference::ex1_costate2(t, Order(0.5))) < 1e-10);
    }
}

TEST_CASE("terminal costate equals minus the terminal cost gradient") {
    ProblemSpec spec = builtin_example("ex2", Order(0.6), 40);
    ControlSignal u = ControlSignal::constant(spec.grid, Vec::Constant(1, -0.5));
    Trajectory traj = solve_fdde(spec, u);
    AdjointPath psi = solve_adjoint(spec, traj, u);
    Vec g = spec.cost.terminal_grad(traj.states.back());
    CHECK((psi.values.back() + g).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("bilinear benchmark costate is constant") {
    // dynamics do not depend on y, and y_h feeds only the second equation
    // whose costate is constant -1; the delayed coupling gradient vanishes
    // along u = 0 and is integrated exactly otherwise
    for (double u0 : {0.0, -1.0}) {
        CAPTURE(u0);
        ProblemSpec spec = builtin_example("ex2", Order(0.5), 80);
        ControlSignal u = ControlSignal::constant(spec.grid, Vec::Constant(1, u0));
        Trajectory traj = solve_fdde(spec, u);
        AdjointPath psi = solve_adjoint(spec, traj, u);
        for (int i = 0; i <= spec.grid.steps; ++i) {
            CHECK(std::abs(psi.values[i][1] + 1.0) < 1e-12);
            if (u0 == 0.0) CHECK(std::abs(psi.values[i][0]) < 1e-12);
        }
    }
}

TEST_CASE("costate scales linearly with the terminal cost") {
    Mat A0(2, 2), A1(2, 2), B(2, 1);
    A0 << 0.2, -0.1, 0.3, 0.0;
    A1 << 0.0, 0.5, -0.4, 0.1;
    B << 1.0, 0.5;
    TimeGrid grid = TimeGrid::make(1.0, 0.25, 64);
    Vec y0(2);
    y0 << 1.0, -0.5;
    auto problem_with_cost = [&](const Vec& c) {
        return make_problem(Order(0.6), grid, HistorySegment::constant(y0, Vec::Zero(2), grid),
                            Dynamics::linear(A0, A1, B, Vec::Zero(2)),
                            CostSpec::mayer_linear(c, Order(0.6)),
                            ControlSet{Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)});
    };
    Vec c1(2), c3(2);
    c1 << 1.0, -2.0;
    c3 = 3.0 * c1;
    ProblemSpec p1 = problem_with_cost(c1);
    ProblemSpec p3 = problem_with_cost(c3);
    ControlSignal u = ControlSignal::constant(grid, Vec::Constant(1, 0.4));
    Trajectory traj = solve_fdde(p1, u);
    AdjointPath psi1 = solve_adjoint(p1, traj, u);
    AdjointPath psi3 = solve_adjoint(p3, traj, u);
    for (int i = 0; i <= grid.steps; ++i)
        CHECK((psi3.values[i] - 3.0 * psi1.values[i]).cwiseAbs().maxCoeff() <
              1e-10 * (1.0 + psi3.values[i].cwiseAbs().maxCoeff()));
}

TEST_CASE("zero cost gives a zero costate") {
    ProblemSpec spec = builtin_example("ex1", Order(0.5), 32);
    spec.cost = CostSpec::none(2, Order(0.5));
    ControlSignal u = ControlSignal::constant(spec.grid, Vec::Constant(1, 0.7));
    Trajectory traj = solve_fdde(spec, u);
    AdjointPath psi = solve_adjoint(spec, traj, u);
    for (const auto& p : psi.values) CHECK(p.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hamiltonian assembles costate dot dynamics minus weighted running cost") {
    ProblemSpec spec = builtin_example("ex2", Order(0.5), 16);
    Vec y(2), yh(2), u(1), psi(2);
    y << 0.5, -0.2;
    yh << 1.5, 0.3;
    u << -0.75;
    psi << 0.25, -1.0;
    // f = (u, -yh_1 u); no running cost on the builtins
    const double expect = 0.25 * (-0.75) + (-1.0) * (-1.5 * -0.75);
    CHECK(hamiltonian(spec, 0.3, y, yh, u, psi) == doctest::Approx(expect).epsilon(1e-14));
    Vec gy = hamiltonian_state_gradient(spec, 0.3, y, yh, u, psi);
    CHECK(gy.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    Vec gh = hamiltonian_delayed_gradient(spec, 0.3, y, yh, u, psi);
    CHECK(gh[0] == doctest::Approx(-0.75));  // psi_2 * (-u)
    CHECK(gh[1] == doctest::Approx(0.0));
}

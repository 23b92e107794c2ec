#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fdoc/fracquad.hpp"
#include "oracles.hpp"

using namespace fdoc;

TEST_CASE("order validates its range") {
    CHECK_NOTHROW(Order(0.5));
    CHECK_NOTHROW(Order(1e-6));
    CHECK_THROWS_AS(Order(0.0), std::domain_error);
    CHECK_THROWS_AS(Order(1.0), std::domain_error);
    CHECK_THROWS_AS(Order(-0.2), std::domain_error);
    CHECK_THROWS_AS(Order(1.5), std::domain_error);
}

TEST_CASE("gamma recurrence and anchors") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
    for (double x : {0.3, 0.7, 1.4, 2.9})
        CHECK(gamma_fn(x + 1.0) == doctest::Approx(x * gamma_fn(x)).epsilon(1e-13));
    CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(-1.5), std::domain_error);
}

TEST_CASE("incomplete beta against independent quadrature") {
    // frozen: int_0^0.2 s^-0.7 (1-s)^-0.7 ds, 40-digit incomplete beta
    CHECK(beta_incomplete(Order(0.3), 0.2) ==
          doctest::Approx(2.13054972180896307073663272071).epsilon(1e-12));
    for (double a : {0.3, 0.5, 0.85}) {
        for (double z : {0.05, 0.4, 0.9}) {
            const double ref = oracle::integrate(
                [a](double s) { return std::pow(s, a - 1.0) * std::pow(1.0 - s, a - 1.0); }, 0.0,
                z);
            CHECK(beta_incomplete(Order(a), z) == doctest::Approx(ref).epsilon(1e-11));
        }
        // complete integral collapses to the gamma quotient
        CHECK(beta_incomplete(Order(a), 1.0) ==
              doctest::Approx(gamma_fn(a) * gamma_fn(a) / gamma_fn(2.0 * a)).epsilon(1e-12));
    }
    CHECK(beta_incomplete(Order(0.4), 0.0) == 0.0);
    CHECK_THROWS_AS(beta_incomplete(Order(0.4), -0.1), std::domain_error);
    CHECK_THROWS_AS(beta_incomplete(Order(0.4), 1.1), std::domain_error);
}

TEST_CASE("double singular cell") {
    // frozen: int_0.3^0.5 (0.9-tau)^-0.3 (tau-0.1)^-0.3 dtau
    CHECK(double_singular_cell(0.1, 0.3, 0.5, 0.9, Order(0.7)) ==
          doctest::Approx(0.356219730677599796110651120387).epsilon(1e-11));

    SUBCASE("full range is the closed-form beta value") {
        for (double a : {0.3, 0.5, 0.7}) {
            const double t = 0.2, te = 1.1;
            const double ref =
                std::pow(te - t, 2.0 * a - 1.0) * gamma_fn(a) * gamma_fn(a) / gamma_fn(2.0 * a);
            CHECK(double_singular_cell(t, t, te, te, Order(a)) ==
                  doctest::Approx(ref).epsilon(1e-12));
        }
    }
    SUBCASE("partition sums reproduce the whole integral") {
        const double t = 0.0, te = 0.64;
        for (double a : {0.35, 0.5, 0.8}) {
            const double whole = double_singular_cell(t, t, te, te, Order(a));
            for (int parts : {3, 7, 64}) {
                double sum = 0.0;
                for (int j = 0; j < parts; ++j)
                    sum += double_singular_cell(t, t + (te - t) * j / parts,
                                                t + (te - t) * (j + 1) / parts, te, Order(a));
                CHECK(sum == doctest::Approx(whole).epsilon(1e-10));
            }
        }
    }
    SUBCASE("degenerate cell is zero") {
        CHECK(double_singular_cell(0.1, 0.4, 0.4, 0.9, Order(0.6)) == 0.0);
    }
}

TEST_CASE("riesz rows integrate piecewise-linear functions exactly") {
    TimeGrid grid = TimeGrid::make(1.0, 0.25, 64);
    for (double a : {0.3, 0.5, 0.9}) {
        for (int i : {1, 7, 33, 64}) {
            SingularWeightRow row = riesz_weights(grid, Order(a), i);
            REQUIRE(static_cast<int>(row.weights.size()) == i + 1);
            const double ti = grid.node(i);
            double s0 = 0.0, s1 = 0.0;
            for (int j = 0; j <= i; ++j) {
                s0 += row.weights[j];
                s1 += row.weights[j] * grid.node(j);
            }
            // g == 1 and g == s have closed-form kernel integrals
            CHECK(s0 == doctest::Approx(std::pow(ti, a) / a).epsilon(1e-12));
            CHECK(s1 == doctest::Approx(std::pow(ti, a + 1.0) / (a * (a + 1.0))).epsilon(1e-12));
        }
    }
}

TEST_CASE("riesz row quadrature converges at second order on smooth data") {
    const double a = 0.5;
    const double ref =
        oracle::integrate([a](double s) { return std::pow(1.0 - s, a - 1.0) * std::cos(3.0 * s); },
                          0.0, 1.0);
    double prev = 0.0;
    std::vector<double> errs;
    for (int N : {32, 64, 128, 256}) {
        TimeGrid grid = TimeGrid::make(1.0, 0.25, N);
        SingularWeightRow row = riesz_weights(grid, Order(a), N);
        double val = 0.0;
        for (int j = 0; j <= N; ++j) val += row.weights[j] * std::cos(3.0 * grid.node(j));
        errs.push_back(std::abs(val - ref));
        (void)prev;
    }
    for (std::size_t k = 1; k < errs.size(); ++k) {
        const double order = std::log2(errs[k - 1] / errs[k]);
        CHECK(order >= 1.8);
    }
}

TEST_CASE("weights stay positive and well-conditioned on long fine rows") {
    TimeGrid grid = TimeGrid::make(1.0, 0.5, 4096);
    for (double a : {0.1, 0.9}) {
        SingularWeightRow row = riesz_weights(grid, Order(a), 4096);
        double sum = 0.0;
        for (double w : row.weights) {
            CHECK(w >= 0.0);
            sum += w;
        }
        CHECK(sum == doctest::Approx(1.0 / a).epsilon(1e-11));
    }
}

TEST_CASE("terminal weights mirror the final riesz row") {
    TimeGrid grid = TimeGrid::make(1.0, 0.5, 256);
    const double b = 0.5;
    SingularWeightRow row = terminal_weights(grid, Order(b));
    double lin = 0.0, quad = 0.0;
    for (int j = 0; j <= 256; ++j) {
        lin += row.weights[j] * grid.node(j);
        quad += row.weights[j] * grid.node(j) * grid.node(j);
    }
    // int_0^1 (1-t)^(-1/2) t dt = B(2, 1/2) = 4/3, exact for linear data
    CHECK(lin == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    // int_0^1 (1-t)^(-1/2) t^2 dt = 16/15, quadratic converges at order ~2
    CHECK(quad == doctest::Approx(16.0 / 15.0).epsilon(2e-5));
}

TEST_CASE("tables agree with their scalar builders") {
    TimeGrid grid = TimeGrid::make(1.0, 0.25, 16);
    Order a(0.55);
    const RieszWeightTable& rt = riesz_table(grid, a);
    REQUIRE(rt.rows() == 17);
    for (int i = 1; i <= 16; ++i) {
        SingularWeightRow direct = riesz_weights(grid, a, i);
        for (int j = 0; j <= i; ++j)
            CHECK(rt.row(i).weights[j] == doctest::Approx(direct.weights[j]).epsilon(1e-13));
    }
    const DoubleSingularTable& ds = double_singular_table(grid, a);
    for (int k = 0; k <= 14; ++k)
        for (int e = k + 1; e <= 16; ++e)
            for (int j = k; j < e; ++j) {
                const double direct =
                    double_singular_cell(grid.node(k), grid.node(j), grid.node(j + 1),
                                         grid.node(e), a);
                CHECK(ds.cell(k, j, e) == doctest::Approx(direct).epsilon(5e-12));
            }
}

TEST_CASE("grid construction rejects misalignment") {
    CHECK_NOTHROW(TimeGrid::make(1.0, 0.5, 10));
    CHECK_THROWS_AS(TimeGrid::make(1.0, 0.5, 7), std::domain_error);   // dt doesn't divide h
    CHECK_THROWS_AS(TimeGrid::make(1.0, 0.33, 10), std::domain_error);  // h not on the grid
    CHECK_THROWS_AS(TimeGrid::make(1.0, 1.5, 10), std::domain_error);  // delay beyond horizon
    CHECK_THROWS_AS(TimeGrid::make(-1.0, 0.5, 10), std::domain_error);
    CHECK_THROWS_AS(TimeGrid::make(1.0, 0.5, 0), std::domain_error);
    TimeGrid g = TimeGrid::make(2.0, 0.5, 16);
    CHECK(g.delay_steps == 4);
    CHECK(g.dt == doctest::Approx(0.125));
    CHECK(g.node(16) == doctest::Approx(2.0));
}

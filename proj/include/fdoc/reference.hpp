#pragma once

#include <cmath>

#include "fdoc/fracquad.hpp"

// Closed-form solutions for the built-in problems (horizon 1, delay 1/2).
// Everything here follows from direct evaluation of the kernel integrals, so
// tests can compare solver output against exact values.
namespace fdoc::reference {

inline constexpr double horizon = 1.0;
inline constexpr double delay = 0.5;

// --- "ex1": J = y_1(1), base control 0, box [-1, 1] ---

// Second costate component.  It vanishes identically once the delayed window
// [t+h, T] collapses, i.e. on [T-h, T]; before that the tail integral is a
// beta function in closed form.
inline double ex1_costate2(double t, Order alpha) {
    if (t >= horizon - delay) return 0.0;
    const double a = alpha.value;
    return -(gamma_fn(a) / gamma_fn(2.0 * a)) * std::pow(horizon - t, 1.0 - a) *
           std::pow(horizon - delay - t, 2.0 * a - 1.0);
}

// First-order gap max_v dH at the base control; the maximizer is v = -1.
inline double ex1_gap(double t, Order alpha) { return 1.0 - ex1_costate2(t, alpha); }

// --- "ex2": bilinear dynamics, J = y_2(1), constant control u0 ---

inline double ex2_y1(double t, Order alpha, double u0) {
    const double a = alpha.value;
    return u0 * std::pow(t, a) / gamma_fn(a + 1.0);
}

inline double ex2_y2(double t, Order alpha, double u0) {
    if (t <= delay) return 0.0;
    const double a = alpha.value;
    return -u0 * u0 * std::pow(t - delay, 2.0 * a) / gamma_fn(2.0 * a + 1.0);
}

inline double ex2_cost(Order alpha, double u0) { return ex2_y2(horizon, alpha, u0); }

// Second-order score along the zero control: the undelayed term vanishes and
// the delayed one is (T-t-h)^(alpha-1) v^2 until the delayed window closes.
inline double ex2_second_score(double t, Order alpha, double v) {
    if (t + delay >= horizon) return 0.0;
    return std::pow(horizon - delay - t, alpha.value - 1.0) * v * v;
}

}  // namespace fdoc::reference

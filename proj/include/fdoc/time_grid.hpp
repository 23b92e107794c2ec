#pragma once

namespace fdoc {

// Uniform grid on [0, T] whose step divides the delay exactly.  All solvers,
// weight tables and delayed-state reads assume this alignment, so the grid is
// only constructible through make(), which rejects misaligned (T, h, N).
struct TimeGrid {
    double horizon = 0.0;    // T
    double delay = 0.0;      // h
    int steps = 0;           // N, number of cells; nodes are 0..N
    double dt = 0.0;         // T / N
    int delay_steps = 0;     // m with h == m * dt

    static TimeGrid make(double T, double h, int N);

    double node(int i) const { return dt * i; }
};

}  // namespace fdoc

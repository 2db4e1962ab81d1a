#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hspde/errors.hpp"

namespace hspde {

// Sampled Brownian driver on [0, T] with M uniform steps; values[i] = w(iT/M),
// values[0] = 0. Reproducible from (seed, path_index) alone.
struct BrownianPath {
    double horizon = 0.0;
    int steps = 0;
    std::vector<double> values;  // M+1 entries
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;

    double dt() const { return horizon / steps; }
    double time(int i) const { return horizon * i / steps; }
    double increment(int i) const {
        return values[static_cast<size_t>(i) + 1] - values[static_cast<size_t>(i)];
    }
    std::uint64_t fingerprint() const;
};

BrownianPath sample_brownian(int steps, double horizon, std::uint64_t seed,
                             std::uint64_t path_index);

// Piecewise-linear interpolant of a path on n segments; agrees with the base
// path at the breakpoints iT/n.
struct PolygonalPath {
    double horizon = 0.0;
    int segments = 0;
    std::vector<double> breakpoints;  // n+1 values at iT/n
    std::vector<double> slopes;       // n per-segment slopes

    double segment_length() const { return horizon / segments; }
    double value(double t) const;
    double slope_at(double t) const;  // right-continuous; last segment at t = T
    // Exact \int_0^T |wdot^n|^2 dt = sum (dw)^2 / dt.
    double energy() const;
};

PolygonalPath polygonalize(const BrownianPath& path, int n);
PolygonalPath polygonal_from_breakpoints(std::vector<double> breakpoints, double horizon);

// Cameron-Martin direction h with hdot stored per step of a uniform grid
// (constant on [iT/m, (i+1)T/m)); h(0) = 0 and h recovered exactly by
// cumulative quadrature of the step function.
struct CameronMartinPath {
    double horizon = 0.0;
    std::vector<double> hdot;  // m entries
    std::vector<double> cum;   // m+1 values of h at the step boundaries

    int steps() const { return static_cast<int>(hdot.size()); }
    double dt() const { return horizon / steps(); }
    double value(double t) const;
    double slope_at(double t) const;
    void rebuild_cumulative();

    static CameronMartinPath zero(int steps, double horizon);
    static CameronMartinPath linear(double rate, int steps, double horizon);
    static CameronMartinPath from_hdot(std::vector<double> hdot, double horizon);
    static CameronMartinPath from_function(const std::function<double(double)>& hdot_fn, int steps,
                                           double horizon);
    static CameronMartinPath from_polygonal(const PolygonalPath& poly, int steps);
};

// 1/2 int_0^T hdot^2 dt, exact for the stored step function.
double cm_action(const CameronMartinPath& h);

// Returns the path with values w_i + h(t_i)/sqrt(eps). The small-noise
// consumer composes signs as needed; here the shift is additive.
BrownianPath girsanov_shift(const BrownianPath& path, const CameronMartinPath& h, double eps);

}  // namespace hspde

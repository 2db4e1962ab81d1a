#include "hspde/noise.hpp"

#include <cmath>
#include <cstring>

#include "hspde/rng.hpp"

namespace hspde {

namespace {
std::uint64_t fnv1a64(const void* data, size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}
}  // namespace

std::uint64_t BrownianPath::fingerprint() const {
    return fnv1a64(values.data(), values.size() * sizeof(double));
}

BrownianPath sample_brownian(int steps, double horizon, std::uint64_t seed,
                             std::uint64_t path_index) {
    if (steps < 1) throw ConfigError("sample_brownian: need at least one step");
    if (!(horizon > 0.0)) throw ConfigError("sample_brownian: horizon must be positive");
    BrownianPath p;
    p.horizon = horizon;
    p.steps = steps;
    p.seed = seed;
    p.path_index = path_index;
    p.values.assign(static_cast<size_t>(steps) + 1, 0.0);
    const CounterRng rng(seed, path_index);
    const double sdt = std::sqrt(horizon / steps);
    double w = 0.0;
    for (int i = 0; i < steps; ++i) {
        w += sdt * rng.normal(static_cast<std::uint64_t>(i));
        p.values[static_cast<size_t>(i) + 1] = w;
    }
    return p;
}

double PolygonalPath::value(double t) const {
    const double dt = segment_length();
    int i = static_cast<int>(std::floor(t / dt));
    if (i < 0) i = 0;
    if (i >= segments) i = segments - 1;
    return breakpoints[static_cast<size_t>(i)] + slopes[static_cast<size_t>(i)] * (t - i * dt);
}

double PolygonalPath::slope_at(double t) const {
    const double dt = segment_length();
    int i = static_cast<int>(std::floor(t / dt));
    if (i < 0) i = 0;
    if (i >= segments) i = segments - 1;
    return slopes[static_cast<size_t>(i)];
}

double PolygonalPath::energy() const {
    const double dt = segment_length();
    double acc = 0.0;
    for (double s : slopes) acc += s * s * dt;
    return acc;
}

PolygonalPath polygonalize(const BrownianPath& path, int n) {
    if (n < 1 || path.steps % n != 0)
        throw ConfigError("polygonalize: segment count must divide the path resolution");
    PolygonalPath poly;
    poly.horizon = path.horizon;
    poly.segments = n;
    poly.breakpoints.resize(static_cast<size_t>(n) + 1);
    poly.slopes.resize(static_cast<size_t>(n));
    const int stride = path.steps / n;
    for (int i = 0; i <= n; ++i)
        poly.breakpoints[static_cast<size_t>(i)] = path.values[static_cast<size_t>(i) * stride];
    const double dt = poly.segment_length();
    for (int i = 0; i < n; ++i)
        poly.slopes[static_cast<size_t>(i)] =
            (poly.breakpoints[static_cast<size_t>(i) + 1] - poly.breakpoints[static_cast<size_t>(i)]) / dt;
    return poly;
}

PolygonalPath polygonal_from_breakpoints(std::vector<double> breakpoints, double horizon) {
    if (breakpoints.size() < 2) throw ConfigError("polygonal path needs >= 2 breakpoints");
    PolygonalPath poly;
    poly.horizon = horizon;
    poly.segments = static_cast<int>(breakpoints.size()) - 1;
    poly.breakpoints = std::move(breakpoints);
    poly.slopes.resize(static_cast<size_t>(poly.segments));
    const double dt = poly.segment_length();
    for (int i = 0; i < poly.segments; ++i)
        poly.slopes[static_cast<size_t>(i)] =
            (poly.breakpoints[static_cast<size_t>(i) + 1] - poly.breakpoints[static_cast<size_t>(i)]) / dt;
    return poly;
}

void CameronMartinPath::rebuild_cumulative() {
    const double d = dt();
    cum.assign(hdot.size() + 1, 0.0);
    for (size_t i = 0; i < hdot.size(); ++i) cum[i + 1] = cum[i] + hdot[i] * d;
}

double CameronMartinPath::value(double t) const {
    const double d = dt();
    const int m = steps();
    int i = static_cast<int>(std::floor(t / d));
    if (i < 0) i = 0;
    if (i > m) i = m;
    double acc = cum[static_cast<size_t>(i)];
    if (i < m) acc += hdot[static_cast<size_t>(i)] * (t - i * d);
    return acc;
}

double CameronMartinPath::slope_at(double t) const {
    const double d = dt();
    int i = static_cast<int>(std::floor(t / d));
    if (i < 0) i = 0;
    if (i >= steps()) i = steps() - 1;
    return hdot[static_cast<size_t>(i)];
}

CameronMartinPath CameronMartinPath::zero(int steps, double horizon) {
    CameronMartinPath h;
    h.horizon = horizon;
    h.hdot.assign(static_cast<size_t>(steps), 0.0);
    h.rebuild_cumulative();
    return h;
}

CameronMartinPath CameronMartinPath::linear(double rate, int steps, double horizon) {
    CameronMartinPath h;
    h.horizon = horizon;
    h.hdot.assign(static_cast<size_t>(steps), rate);
    h.rebuild_cumulative();
    return h;
}

CameronMartinPath CameronMartinPath::from_hdot(std::vector<double> hdot, double horizon) {
    if (hdot.empty()) throw ConfigError("CameronMartinPath: empty hdot");
    for (double v : hdot)
        if (!std::isfinite(v)) throw NonFiniteError("CameronMartinPath: non-finite hdot");
    CameronMartinPath h;
    h.horizon = horizon;
    h.hdot = std::move(hdot);
    h.rebuild_cumulative();
    return h;
}

CameronMartinPath CameronMartinPath::from_function(const std::function<double(double)>& hdot_fn,
                                                   int steps, double horizon) {
    // Midpoint sampling; keeps the step representation second-order close.
    CameronMartinPath h;
    h.horizon = horizon;
    h.hdot.resize(static_cast<size_t>(steps));
    const double d = horizon / steps;
    for (int i = 0; i < steps; ++i) h.hdot[static_cast<size_t>(i)] = hdot_fn((i + 0.5) * d);
    h.rebuild_cumulative();
    return h;
}

CameronMartinPath CameronMartinPath::from_polygonal(const PolygonalPath& poly, int steps) {
    if (steps % poly.segments != 0)
        throw ConfigError("from_polygonal: steps must be a multiple of the segment count");
    CameronMartinPath h;
    h.horizon = poly.horizon;
    h.hdot.resize(static_cast<size_t>(steps));
    const int per = steps / poly.segments;
    for (int i = 0; i < steps; ++i)
        h.hdot[static_cast<size_t>(i)] = poly.slopes[static_cast<size_t>(i / per)];
    h.rebuild_cumulative();
    return h;
}

double cm_action(const CameronMartinPath& h) {
    const double d = h.dt();
    double acc = 0.0;
    for (double v : h.hdot) acc += v * v * d;
    return 0.5 * acc;
}

BrownianPath girsanov_shift(const BrownianPath& path, const CameronMartinPath& h, double eps) {
    if (!(eps > 0.0)) throw ConfigError("girsanov_shift: eps must be positive");
    if (std::abs(path.horizon - h.horizon) > 1e-12 * std::max(1.0, path.horizon))
        throw GridMismatchError("girsanov_shift: horizons differ");
    if (path.steps % h.steps() != 0 && h.steps() % path.steps != 0)
        throw GridMismatchError("girsanov_shift: incompatible time grids");
    BrownianPath shifted = path;
    const double scale = 1.0 / std::sqrt(eps);
    for (int i = 0; i <= path.steps; ++i)
        shifted.values[static_cast<size_t>(i)] += scale * h.value(path.time(i));
    return shifted;
}

}  // namespace hspde

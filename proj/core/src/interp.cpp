#include "hspde/interp.hpp"

#include <algorithm>
#include <cmath>

namespace hspde {

namespace {

// Wrap x into [0, L) robustly for values a few periods out.
double wrap(double x, double L) {
    double y = std::fmod(x, L);
    if (y < 0.0) y += L;
    return y;
}

struct Stencil {
    int j0, j1, j2, j3;  // nodes j-1, j, j+1, j+2 (wrapped)
    double w0, w1, w2, w3;
};

Stencil stencil_at(const Grid1D& grid, double x) {
    const double y = wrap(x, grid.length);
    const int n = grid.n;
    double jf = std::floor(y / grid.dx);
    if (jf >= n) jf = n - 1;  // guard fmod edge
    const int j = static_cast<int>(jf);
    const double th = y / grid.dx - jf;
    Stencil s;
    s.j0 = (j - 1 + n) % n;
    s.j1 = j;
    s.j2 = (j + 1) % n;
    s.j3 = (j + 2) % n;
    s.w0 = -th * (th - 1.0) * (th - 2.0) / 6.0;
    s.w1 = (th + 1.0) * (th - 1.0) * (th - 2.0) / 2.0;
    s.w2 = -th * (th + 1.0) * (th - 2.0) / 2.0;
    s.w3 = th * (th + 1.0) * (th - 1.0) / 6.0;
    return s;
}

}  // namespace

double interp_periodic_cubic(const Grid1D& grid, std::span<const double> samples, double x) {
    const Stencil s = stencil_at(grid, x);
    return s.w0 * samples[static_cast<size_t>(s.j0)] + s.w1 * samples[static_cast<size_t>(s.j1)] +
           s.w2 * samples[static_cast<size_t>(s.j2)] + s.w3 * samples[static_cast<size_t>(s.j3)];
}

cplx interp_periodic_cubic(const Grid1D& grid, std::span<const cplx> samples, double x) {
    const Stencil s = stencil_at(grid, x);
    return s.w0 * samples[static_cast<size_t>(s.j0)] + s.w1 * samples[static_cast<size_t>(s.j1)] +
           s.w2 * samples[static_cast<size_t>(s.j2)] + s.w3 * samples[static_cast<size_t>(s.j3)];
}

MonotoneCubic MonotoneCubic::fit(std::vector<double> xs, std::vector<double> ys) {
    const size_t n = xs.size();
    if (n < 2 || ys.size() != n) throw ConfigError("MonotoneCubic: need >= 2 matching knots");
    MonotoneCubic mc;
    mc.xs = std::move(xs);
    mc.ys = std::move(ys);
    std::vector<double> h(n - 1), delta(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = mc.xs[i + 1] - mc.xs[i];
        if (!(h[i] > 0.0)) throw MonotonicityError("MonotoneCubic: knots not increasing");
        delta[i] = (mc.ys[i + 1] - mc.ys[i]) / h[i];
    }
    mc.ds.assign(n, 0.0);
    mc.ds[0] = delta[0];
    mc.ds[n - 1] = delta[n - 2];
    for (size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            mc.ds[i] = 0.0;
        } else {
            // Weighted harmonic mean keeps the interpolant monotone.
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            mc.ds[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    return mc;
}

double MonotoneCubic::eval(double x) const {
    if (x <= xs.front()) {
        return ys.front() + ds.front() * (x - xs.front());
    }
    if (x >= xs.back()) {
        return ys.back() + ds.back() * (x - xs.back());
    }
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const size_t i = static_cast<size_t>(it - xs.begin()) - 1;
    const double h = xs[i + 1] - xs[i];
    const double t = (x - xs[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * ys[i] + h10 * h * ds[i] + h01 * ys[i + 1] + h11 * h * ds[i + 1];
}

}  // namespace hspde

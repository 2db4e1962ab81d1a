#include "hspde/microlocal.hpp"

#include <algorithm>
#include <cmath>

#include "hspde/fft.hpp"
#include "hspde/interp.hpp"

namespace hspde {

double BicharFlow::wrapped_x(size_t point, size_t time_index) const {
    double v = std::fmod(x[point][time_index], length);
    if (v < 0.0) v += length;
    return v;
}

BicharFlow bichar_flow(std::shared_ptr<const Grid1D> grid, const CoefficientField& alpha,
                       const CoefficientField& beta, const std::vector<PhasePoint>& pts,
                       const BrownianPath& path, int steps, int record_every) {
    if (steps < 1 || path.steps % steps != 0)
        throw ConfigError("bichar_flow: path resolution must be a multiple of steps");
    for (const PhasePoint& p : pts)
        if (p.xi == 0.0 || !std::isfinite(p.xi) || !std::isfinite(p.x))
            throw DegenerateDirectionError("bichar_flow: xi must be nonzero and finite");

    const int stride = path.steps / steps;
    const double dt = path.horizon / steps;
    const int n = grid->n;

    auto coef_at = [&](const CoefficientField& c, double t) -> std::vector<double> {
        if (c.empty()) return std::vector<double>(static_cast<size_t>(n), 0.0);
        std::vector<double> v = c.eval(t);
        if (v.size() != static_cast<size_t>(n))
            throw ConfigError("bichar_flow: coefficient sample count != grid size");
        return v;
    };

    BicharFlow flow;
    flow.length = grid->length;
    flow.x.assign(pts.size(), {});
    flow.xi.assign(pts.size(), {});
    flow.times.push_back(0.0);
    std::vector<double> xs(pts.size()), xis(pts.size());
    for (size_t k = 0; k < pts.size(); ++k) {
        xs[k] = pts[k].x;
        xis[k] = pts[k].xi;
        flow.x[k].push_back(xs[k]);
        flow.xi[k].push_back(xis[k]);
    }

    for (int i = 0; i < steps; ++i) {
        const double t = i * dt;
        const double dw = path.values[static_cast<size_t>(i + 1) * stride] -
                          path.values[static_cast<size_t>(i) * stride];
        // Coefficient samples and their spectral x-derivatives at both ends.
        const auto a_lo = coef_at(alpha, t);
        const auto a_hi = coef_at(alpha, t + dt);
        const auto b_lo = coef_at(beta, t);
        const auto b_hi = coef_at(beta, t + dt);
        const auto da_lo = spectral_derivative(*grid, a_lo);
        const auto da_hi = spectral_derivative(*grid, a_hi);
        const auto db_lo = spectral_derivative(*grid, b_lo);
        const auto db_hi = spectral_derivative(*grid, b_hi);
        for (size_t k = 0; k < pts.size(); ++k) {
            const double x0 = xs[k];
            const double xi0 = xis[k];
            const double fx0 = interp_periodic_cubic(*grid, a_lo, x0);
            const double gx0 = interp_periodic_cubic(*grid, b_lo, x0);
            const double fxi0 = -interp_periodic_cubic(*grid, da_lo, x0) * xi0;
            const double gxi0 = -interp_periodic_cubic(*grid, db_lo, x0) * xi0;
            const double xp = x0 + fx0 * dw + gx0 * dt;
            const double xip = xi0 + fxi0 * dw + gxi0 * dt;
            const double fx1 = interp_periodic_cubic(*grid, a_hi, xp);
            const double gx1 = interp_periodic_cubic(*grid, b_hi, xp);
            const double fxi1 = -interp_periodic_cubic(*grid, da_hi, xp) * xip;
            const double gxi1 = -interp_periodic_cubic(*grid, db_hi, xp) * xip;
            xs[k] = x0 + 0.5 * (fx0 + fx1) * dw + 0.5 * (gx0 + gx1) * dt;
            xis[k] = xi0 + 0.5 * (fxi0 + fxi1) * dw + 0.5 * (gxi0 + gxi1) * dt;
            if (xis[k] == 0.0 || xis[k] * xi0 < 0.0)
                throw DegenerateDirectionError(
                    "bichar_flow: xi crossed the zero section at t = " + std::to_string(t + dt));
        }
        if ((i + 1) % std::max(1, record_every) == 0 || i + 1 == steps) {
            flow.times.push_back(t + dt);
            for (size_t k = 0; k < pts.size(); ++k) {
                flow.x[k].push_back(xs[k]);
                flow.xi[k].push_back(xis[k]);
            }
        }
    }
    return flow;
}

WavefrontSet propagate_wavefront(const WavefrontSet& wf0, std::shared_ptr<const Grid1D> grid,
                                 const CoefficientField& alpha, const CoefficientField& beta,
                                 const BrownianPath& path, int steps) {
    WavefrontSet out;
    out.labels = wf0.labels;
    if (wf0.points.empty()) return out;
    const BicharFlow flow =
        bichar_flow(std::move(grid), alpha, beta, wf0.points, path, steps, steps);
    const size_t last = flow.times.size() - 1;
    for (size_t k = 0; k < wf0.points.size(); ++k)
        out.points.push_back(PhasePoint{flow.wrapped_x(k, last), flow.xi[k][last]});
    return out;
}

std::vector<Detection> detect_singularities(const Field& u, double window_width,
                                            double band_fraction, double rel_threshold,
                                            double abs_floor, int max_frequency) {
    if (u.components() != 1) throw ConfigError("detect_singularities: scalar fields only");
    const Grid1D& g = u.grid();
    const int n = g.n;
    const double sigma = 0.5 * window_width;
    const int ktop = (max_frequency > 0 && max_frequency < n / 2) ? max_frequency : n / 2;
    const int kcut = static_cast<int>(std::ceil((1.0 - band_fraction) * ktop));

    auto comp = u.comp(0);
    std::vector<double> totals(static_cast<size_t>(n), 0.0);
    std::vector<double> highs(static_cast<size_t>(n), 0.0);
    std::vector<cplx> buf(static_cast<size_t>(n)), hat(static_cast<size_t>(n));
    for (int c = 0; c < n; ++c) {
        const double xc = g.nodes[static_cast<size_t>(c)];
        for (int j = 0; j < n; ++j) {
            double d = std::abs(g.nodes[static_cast<size_t>(j)] - xc);
            d = std::min(d, g.length - d);
            buf[static_cast<size_t>(j)] =
                comp[static_cast<size_t>(j)] * std::exp(-0.5 * (d / sigma) * (d / sigma));
        }
        fft_forward(buf.data(), hat.data(), n);
        double total = 0.0, high = 0.0;
        for (int i = 0; i < n; ++i) {
            const int k = (i < n / 2) ? i : i - n;
            const double e = std::norm(hat[static_cast<size_t>(i)]);
            total += e;
            if (std::abs(k) >= kcut && std::abs(k) <= ktop) high += e;
        }
        totals[static_cast<size_t>(c)] = total;
        highs[static_cast<size_t>(c)] = high;
    }
    // Normalize against the global maximum window energy. A per-window ratio
    // is degenerate for locally supported fields: a window sliver far into a
    // flat region is "all edge" and would outscore the singularity itself.
    const double tmax = *std::max_element(totals.begin(), totals.end());
    std::vector<double> score(static_cast<size_t>(n), 0.0);
    if (tmax > 0.0)
        for (int c = 0; c < n; ++c) score[static_cast<size_t>(c)] = highs[static_cast<size_t>(c)] / tmax;

    const double smax = *std::max_element(score.begin(), score.end());
    std::vector<Detection> out;
    if (smax <= abs_floor) return out;
    for (int c = 0; c < n; ++c) {
        const double s0 = score[static_cast<size_t>((c + n - 1) % n)];
        const double s1 = score[static_cast<size_t>(c)];
        const double s2 = score[static_cast<size_t>((c + 1) % n)];
        if (s1 < rel_threshold * smax || s1 < abs_floor) continue;
        if (!(s1 >= s0 && s1 > s2)) continue;
        // Quadratic sub-grid refinement around the local maximum.
        const double denom = s0 - 2.0 * s1 + s2;
        double offset = 0.0;
        if (denom < 0.0) offset = std::clamp(0.5 * (s0 - s2) / denom, -0.5, 0.5);
        double x = g.nodes[static_cast<size_t>(c)] + offset * g.dx;
        if (x < 0.0) x += g.length;
        if (x >= g.length) x -= g.length;
        out.push_back(Detection{x, s1});
    }
    return out;
}

}  // namespace hspde

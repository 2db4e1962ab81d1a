#include "hspde/characteristics.hpp"

#include <algorithm>
#include <cmath>

#include "hspde/interp.hpp"

namespace hspde {

CoefficientField::CoefficientField(std::vector<double> constant) {
    eval = [samples = std::move(constant)](double) { return samples; };
}

CoefficientField::CoefficientField(std::function<std::vector<double>(double)> fn)
    : eval(std::move(fn)) {}

size_t CharFlow::index_of(double t) const {
    for (size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
    throw ConfigError("CharFlow: time not recorded");
}

namespace {

void check_monotone(const std::vector<double>& pos, double L, double t) {
    // Unwrapped positions of the node sequence must stay strictly increasing,
    // and the period must close up: phi(x_0 + L) = phi(x_0) + L.
    for (size_t j = 0; j + 1 < pos.size(); ++j)
        if (!(pos[j + 1] > pos[j]))
            throw MonotonicityError("flow lost monotonicity at t = " + std::to_string(t) +
                                    " (step too coarse or coefficients too rough)");
    if (!(pos.front() + L > pos.back()))
        throw MonotonicityError("flow period failed to close at t = " + std::to_string(t));
}

}  // namespace

CharFlow flow_solve(std::shared_ptr<const Grid1D> grid, const CoefficientField& a1,
                    const CoefficientField& b1, const BrownianPath& path, int steps,
                    int record_every) {
    if (steps < 1 || path.steps % steps != 0)
        throw ConfigError("flow_solve: path resolution must be a multiple of steps");
    const int stride = path.steps / steps;
    const double T = path.horizon;
    const double dt = T / steps;
    const int n = grid->n;

    CharFlow flow;
    flow.grid = grid;
    flow.driver_fingerprint = path.fingerprint();

    std::vector<double> x(grid->nodes);
    flow.times.push_back(0.0);
    flow.positions.push_back(x);

    auto coef_at = [&](const CoefficientField& c, double t) -> std::vector<double> {
        if (c.empty()) return std::vector<double>(static_cast<size_t>(n), 0.0);
        std::vector<double> v = c.eval(t);
        if (v.size() != static_cast<size_t>(n))
            throw ConfigError("flow_solve: coefficient sample count != grid size");
        return v;
    };

    for (int i = 0; i < steps; ++i) {
        const double t = i * dt;
        const double dw = path.values[static_cast<size_t>(i + 1) * stride] -
                          path.values[static_cast<size_t>(i) * stride];
        const std::vector<double> a_lo = coef_at(a1, t);
        const std::vector<double> b_lo = coef_at(b1, t);
        const std::vector<double> a_hi = coef_at(a1, t + dt);
        const std::vector<double> b_hi = coef_at(b1, t + dt);
        for (int j = 0; j < n; ++j) {
            const double xj = x[static_cast<size_t>(j)];
            const double f0 = interp_periodic_cubic(*grid, a_lo, xj);
            const double g0 = interp_periodic_cubic(*grid, b_lo, xj);
            const double pred = xj + f0 * dw + g0 * dt;
            const double f1 = interp_periodic_cubic(*grid, a_hi, pred);
            const double g1 = interp_periodic_cubic(*grid, b_hi, pred);
            x[static_cast<size_t>(j)] = xj + 0.5 * (f0 + f1) * dw + 0.5 * (g0 + g1) * dt;
        }
        if ((i + 1) % std::max(1, record_every) == 0 || i + 1 == steps) {
            check_monotone(x, grid->length, t + dt);
            flow.times.push_back(t + dt);
            flow.positions.push_back(x);
        }
    }
    return flow;
}

double flow_evaluate(const CharFlow& flow, size_t time_index, double x0) {
    const Grid1D& g = *flow.grid;
    const std::vector<double>& pos = flow.positions[time_index];
    std::vector<double> disp(pos.size());
    for (size_t j = 0; j < pos.size(); ++j) disp[j] = pos[j] - g.nodes[j];
    return x0 + interp_periodic_cubic(g, disp, x0);
}

std::vector<double> flow_invert(const CharFlow& flow, double t) {
    const size_t ti = flow.index_of(t);
    const Grid1D& g = *flow.grid;
    const std::vector<double>& pos = flow.positions[ti];
    if (!flow.monotone) throw MonotonicityError("flow_invert: flow flagged non-monotone");
    check_monotone(pos, g.length, t);

    // Extend the increasing graph (phi(x_j), x_j) by one period on each side so
    // every target falls in an interior interval.
    const size_t n = pos.size();
    std::vector<double> xs(n + 2), ys(n + 2);
    xs[0] = pos[n - 1] - g.length;
    ys[0] = g.nodes[n - 1] - g.length;
    for (size_t j = 0; j < n; ++j) {
        xs[j + 1] = pos[j];
        ys[j + 1] = g.nodes[j];
    }
    xs[n + 1] = pos[0] + g.length;
    ys[n + 1] = g.nodes[0] + g.length;
    const MonotoneCubic inv = MonotoneCubic::fit(std::move(xs), std::move(ys));

    std::vector<double> out(n);
    for (size_t j = 0; j < n; ++j) {
        // Shift the target into the covered window [phi(x_0), phi(x_0) + L).
        double target = g.nodes[j];
        const double lo = pos[0];
        target += g.length * std::floor((lo - target) / g.length + 1.0);
        if (target < lo) target += g.length;
        if (target >= lo + g.length) target -= g.length;
        const double shift = g.nodes[j] - target;  // multiple of L
        out[j] = inv.eval(target) + shift;
    }
    return out;
}

Field transport_solution(const Field& u0, const CharFlow& flow, double t) {
    if (u0.components() != 1)
        throw ConfigError("transport_solution: scalar problems only (d' = 1)");
    if (!same_grid(u0.grid(), *flow.grid))
        throw GridMismatchError("transport_solution: grid mismatch");
    const std::vector<double> inv = flow_invert(flow, t);
    Field u(u0.grid_ptr(), 1);
    for (int j = 0; j < u.size(); ++j)
        u.at(0, j) = interp_periodic_cubic(u0.grid(), u0.comp(0), inv[static_cast<size_t>(j)]);
    return u;
}

Field representation_lower_order(const Field& u0, std::span<const cplx> a0,
                                 const CoefficientField& a1, const BrownianPath& path, double t,
                                 int steps) {
    if (u0.components() != 1)
        throw ConfigError("representation_lower_order: scalar problems only");
    const auto grid = u0.grid_ptr();
    if (!a0.empty() && a0.size() != static_cast<size_t>(grid->n))
        throw ConfigError("representation_lower_order: a0 sample count != grid size");

    // Full-resolution flow so the backward integral sees every step.
    const CharFlow flow = flow_solve(grid, a1, CoefficientField{}, path, steps, 1);
    const size_t ti = flow.index_of(t);
    const std::vector<double> inv_t = flow_invert(flow, t);

    Field u(grid, 1);
    const int n = grid->n;
    std::vector<cplx> expo(static_cast<size_t>(n), cplx(0.0, 0.0));
    if (!a0.empty()) {
        // g_i(x) = a0(phi^{-1}_{tau_i, t}(x)) with phi^{-1}_{tau,t} = phi_{0,tau} o phi_{0,t}^{-1};
        // backward Stratonovich integral as trapezoid against the increments.
        const int stride = path.steps / steps;
        std::vector<cplx> g_prev(static_cast<size_t>(n)), g_cur(static_cast<size_t>(n));
        auto eval_g = [&](size_t time_index, std::vector<cplx>& out) {
            for (int j = 0; j < n; ++j) {
                const double y = flow_evaluate(flow, time_index, inv_t[static_cast<size_t>(j)]);
                out[static_cast<size_t>(j)] = interp_periodic_cubic(*grid, a0, y);
            }
        };
        eval_g(0, g_prev);
        for (size_t i = 0; i + 1 <= ti; ++i) {
            eval_g(i + 1, g_cur);
            const double dw = path.values[(i + 1) * static_cast<size_t>(stride)] -
                              path.values[i * static_cast<size_t>(stride)];
            for (int j = 0; j < n; ++j)
                expo[static_cast<size_t>(j)] +=
                    0.5 * (g_prev[static_cast<size_t>(j)] + g_cur[static_cast<size_t>(j)]) * dw;
            std::swap(g_prev, g_cur);
        }
    }
    for (int j = 0; j < n; ++j) {
        const cplx base = interp_periodic_cubic(*grid, u0.comp(0), inv_t[static_cast<size_t>(j)]);
        u.at(0, j) = base * std::exp(expo[static_cast<size_t>(j)]);
    }
    return u;
}

}  // namespace hspde

#include "hspde/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

namespace hspde {

namespace {

constexpr double kTimeTol = 1e-9;

struct StepOps {
    const SpdeProblem* p = nullptr;
    std::optional<Mollifier> moll;
    bool apply_noise_scale = true;

    Field smooth(const Field& u) const { return moll ? mollify(u, *moll) : u; }

    // Coefficient of dw: noise_scale * (a_t J u + f(t)).
    Field diffusion(double t, const Field& u) const {
        Field out = Field::zeros(u.grid_ptr(), u.components());
        if (!p->a.empty()) out += apply_pdo(p->a.at(t), smooth(u));
        if (p->f) out += p->f(t);
        if (apply_noise_scale && p->noise_scale != 1.0) out *= cplx(p->noise_scale, 0.0);
        return out;
    }

    // Coefficient of dt: b_t J u + g(t).
    Field drift(double t, const Field& u) const {
        Field out = Field::zeros(u.grid_ptr(), u.components());
        if (!p->b.empty()) out += apply_pdo(p->b.at(t), smooth(u));
        if (p->g) out += p->g(t);
        return out;
    }
};

void check_blowup(const Field& u, double s, double t, double ref_norm, double factor) {
    const double n = sobolev_norm(u, s);
    if (!std::isfinite(n) || n > factor * std::max(ref_norm, 1e-30))
        throw BlowupError("norm blow-up at t = " + std::to_string(t) +
                              " (conditions (iii)/(iv) suspected violated)",
                          t, n);
}

// Guard reference: |u0|_s floored at the forcing scale so zero data with
// nonzero f or g is not flagged the moment the state leaves zero.
double guard_reference(const SpdeProblem& p, const Field& u0) {
    double ref = sobolev_norm(u0, p.sobolev_index);
    if (p.f) ref = std::max(ref, p.horizon * sobolev_norm(p.f(0.0), p.sobolev_index));
    if (p.g) ref = std::max(ref, p.horizon * sobolev_norm(p.g(0.0), p.sobolev_index));
    return ref;
}

void log_energy(Trajectory& traj, const SpdeProblem& p, double t, const Field& u, double dw) {
    traj.energy_t.push_back(t);
    traj.energy_norm.push_back(sobolev_norm(u, p.sobolev_index));
    double qa = 0.0, ql = 0.0;
    if (!p.a.empty()) {
        // A u = a u + a* u,  L u = A(a u) + a*(A u)
        const SeparableSymbol a = p.a.at(t);
        const Field au = apply_pdo(a, u);
        const Field Au = au + apply_adjoint(a, u);
        Field Lu = apply_pdo(a, au) + apply_adjoint(a, au);
        Lu += apply_adjoint(a, Au);
        qa = sobolev_inner(Au, u, p.sobolev_index).real();
        ql = sobolev_inner(Lu, u, p.sobolev_index).real();
    }
    traj.energy_quad_a.push_back(qa);
    traj.energy_quad_l.push_back(ql);
    traj.energy_dw.push_back(dw);
}

// Zero every mode with |k| > kmax.
void truncate_band(Field& u, int kmax) {
    const int n = u.grid().n;
    if (kmax >= n / 2 - 1) return;
    SpectralField s = dft(u);
    for (int c = 0; c < s.components; ++c) {
        auto coeffs = s.comp(c);
        for (int i = 0; i < n; ++i) {
            const int k = (i < n / 2) ? i : i - n;
            if (k > kmax || k < -kmax) coeffs[static_cast<size_t>(i)] = cplx(0.0, 0.0);
        }
    }
    u = idft(s);
}

// One Stratonovich Heun step from (t, u) with increment dw over dt.
// direction = -1 integrates the reversed-time (backward) equation, in which
// case t decreases by dt and the coefficient times are (t, t-dt).
void heun_step(const StepOps& ops, double t, double dt, double dw, int direction, Field& u) {
    const double sgn = direction >= 0 ? 1.0 : -1.0;
    const double t1 = t + sgn * dt;
    const Field f0 = ops.diffusion(t, u);
    const Field g0 = ops.drift(t, u);
    Field pred = u;
    pred.axpy(cplx(sgn * dw, 0.0), f0);
    pred.axpy(cplx(sgn * dt, 0.0), g0);
    const Field f1 = ops.diffusion(t1, pred);
    const Field g1 = ops.drift(t1, pred);
    u.axpy(cplx(0.5 * sgn * dw, 0.0), f0);
    u.axpy(cplx(0.5 * sgn * dw, 0.0), f1);
    u.axpy(cplx(0.5 * sgn * dt, 0.0), g0);
    u.axpy(cplx(0.5 * sgn * dt, 0.0), g1);
}

// Implicit midpoint by fixed-point iteration. When the iteration does not
// contract (|a| dw / 2 too large) the increment is split linearly in half and
// the two sub-steps are taken recursively; this is the polygonal (Wong-Zakai)
// refinement of the step and keeps the Stratonovich limit.
bool midpoint_iterate(const StepOps& ops, double t, double dt, double dw, const Field& u,
                      Field& out) {
    const double tm = t + 0.5 * dt;
    Field next = u;
    double prev_r = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 48; ++it) {
        Field mid = u;
        mid += next;
        mid *= cplx(0.5, 0.0);
        Field cand = u;
        cand.axpy(cplx(dw, 0.0), ops.diffusion(tm, mid));
        cand.axpy(cplx(dt, 0.0), ops.drift(tm, mid));
        Field diff = cand;
        diff -= next;
        next = std::move(cand);
        const double r = sobolev_norm(diff, 0.0);
        if (!std::isfinite(r) || r > 4.0 * prev_r) return false;
        if (r <= 1e-13 * std::max(1.0, sobolev_norm(next, 0.0))) {
            out = std::move(next);
            return true;
        }
        prev_r = std::min(prev_r, r);
    }
    return false;
}

void midpoint_step(const StepOps& ops, double t, double dt, double dw, Field& u, int depth = 0) {
    Field next;
    if (midpoint_iterate(ops, t, dt, dw, u, next)) {
        u = std::move(next);
        return;
    }
    if (depth >= 10) throw Error("midpoint iteration failed after repeated step splitting");
    midpoint_step(ops, t, 0.5 * dt, 0.5 * dw, u, depth + 1);
    midpoint_step(ops, t + 0.5 * dt, 0.5 * dt, 0.5 * dw, u, depth + 1);
}

bool should_record(int step, int total, int every) {
    return step % std::max(1, every) == 0 || step == total;
}

}  // namespace

const Field& Trajectory::state_at(double t) const {
    for (size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - t) <= kTimeTol * std::max(1.0, std::abs(t))) return states[i];
    throw ConfigError("Trajectory::state_at: time not recorded");
}

int stability_band(const SpdeProblem& p, const BrownianPath& path, const EvolveConfig& cfg) {
    const int half = p.u0.grid().n / 2 - 1;
    if (cfg.projection == EvolveConfig::Projection::off) return half;
    if (cfg.projection == EvolveConfig::Projection::fixed)
        return std::min(half, std::max(1, cfg.projection_modes));
    if (cfg.scheme == EvolveConfig::Scheme::midpoint) return half;  // contraction handled by splitting
    const double ca = p.a.empty() ? 0.0
                                  : p.a.at(0.0).advective_speed() * std::abs(p.noise_scale);
    const double cb = p.b.empty() ? 0.0 : p.b.at(0.0).advective_speed();
    if (path.steps % cfg.steps != 0)
        throw ConfigError("stability_band: path resolution must be a multiple of cfg.steps");
    const int stride = path.steps / cfg.steps;
    const double dt = p.horizon / cfg.steps;
    double quartic_sum = 0.0;
    for (int i = 0; i < cfg.steps; ++i) {
        const double dw = path.values[static_cast<size_t>(i + 1) * stride] -
                          path.values[static_cast<size_t>(i) * stride];
        const double e = ca * std::abs(dw) + cb * dt;
        quartic_sum += 0.25 * e * e * e * e;
    }
    if (quartic_sum <= 0.0) return half;
    const int band = static_cast<int>(std::floor(std::pow(cfg.gamma_max / quartic_sum, 0.25)));
    if (band < 1)
        throw ConfigError("stability_band: no mode is stable at this step count; increase steps");
    return std::min(half, band);
}

Trajectory integrate_spde(const SpdeProblem& p, const BrownianPath& path,
                          const EvolveConfig& cfg) {
    if (std::abs(path.horizon - p.horizon) > kTimeTol)
        throw GridMismatchError("integrate_spde: path horizon differs from the problem horizon");
    if (cfg.steps < 1 || path.steps % cfg.steps != 0)
        throw ConfigError("integrate_spde: path resolution must be a multiple of cfg.steps");
    const int m = cfg.steps;
    const int stride = path.steps / m;
    const double dt = p.horizon / m;

    StepOps ops{&p, {}, true};
    if (cfg.mollifier_eps) ops.moll = Mollifier::make(p.u0.grid(), *cfg.mollifier_eps);

    Trajectory traj;
    traj.sobolev_index = p.sobolev_index;
    traj.driver_fingerprint = path.fingerprint();

    const int band = stability_band(p, path, cfg);
    Field u = p.u0;
    truncate_band(u, band);
    const double ref_norm = guard_reference(p, u);
    traj.times.push_back(0.0);
    traj.states.push_back(u);
    if (cfg.energy_log) log_energy(traj, p, 0.0, u, 0.0);

    for (int i = 0; i < m; ++i) {
        const double t = i * dt;
        const double dw = path.values[static_cast<size_t>(i + 1) * stride] -
                          path.values[static_cast<size_t>(i) * stride];
        if (cfg.scheme == EvolveConfig::Scheme::midpoint)
            midpoint_step(ops, t, dt, dw, u);
        else
            heun_step(ops, t, dt, dw, +1, u);
        truncate_band(u, band);
        if (cfg.dealias) dealias_two_thirds(u);
        check_blowup(u, p.sobolev_index, t + dt, ref_norm, cfg.blowup_factor);
        if (cfg.energy_log) log_energy(traj, p, (i + 1) * dt, u, dw);
        if (should_record(i + 1, m, cfg.record_every)) {
            traj.times.push_back((i + 1) * dt);
            traj.states.push_back(u);
        }
    }
    return traj;
}

namespace {

// Shared RK4 march for the deterministic drives: u' = slope(t) c (a u + f) + b u + g,
// with slope piecewise constant between `breaks`.
Trajectory deterministic_drive(const SpdeProblem& p, bool use_noise_scale,
                               const std::function<double(double)>& slope,
                               const std::vector<double>& breaks, const EvolveConfig& cfg) {
    StepOps ops{&p, {}, use_noise_scale};
    if (cfg.mollifier_eps) ops.moll = Mollifier::make(p.u0.grid(), *cfg.mollifier_eps);

    const double T = p.horizon;
    const double xi_max = p.u0.grid().xi_max();
    const double scale = use_noise_scale ? p.noise_scale : 1.0;
    double speed_a = 0.0, speed_b = 0.0;
    if (!p.a.empty()) speed_a = p.a.at(0.0).advective_speed() * std::abs(scale);
    if (!p.b.empty()) speed_b = p.b.at(0.0).advective_speed();

    // March points: slope breakpoints merged with the output times.
    std::vector<double> marks = breaks;
    const double out_dt = T * std::max(1, cfg.record_every) / cfg.steps;
    for (int k = 0; k * out_dt < T + 0.5 * out_dt; ++k) marks.push_back(std::min(k * out_dt, T));
    marks.push_back(0.0);
    marks.push_back(T);
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end(),
                            [](double a, double b) { return std::abs(a - b) < kTimeTol; }),
                marks.end());

    // The driver slope is held constant over each marched interval; evaluating
    // it at RK4 stage times would leak the next segment's slope into k4.
    auto rhs = [&](double t, double sl, const Field& u) {
        Field out = ops.drift(t, u);
        if (sl != 0.0) out.axpy(cplx(sl, 0.0), ops.diffusion(t, u));
        return out;
    };

    Trajectory traj;
    traj.sobolev_index = p.sobolev_index;
    Field u = p.u0;
    const double ref_norm = guard_reference(p, u);
    traj.times.push_back(0.0);
    traj.states.push_back(u);

    auto is_output = [&](double t) {
        const double q = t / out_dt;
        return std::abs(q - std::round(q)) < 1e-7 || std::abs(t - T) < kTimeTol;
    };

    for (size_t seg = 0; seg + 1 < marks.size(); ++seg) {
        const double t0 = marks[seg];
        const double t1 = marks[seg + 1];
        const double len = t1 - t0;
        const double sl = slope(0.5 * (t0 + t1));
        const double advect = (std::abs(sl) * speed_a + speed_b) * xi_max;
        const int nsub = std::max(cfg.substeps_per_segment,
                                  static_cast<int>(std::ceil(len * advect / 0.5)));
        const double h = len / nsub;
        for (int k = 0; k < nsub; ++k) {
            const double t = t0 + k * h;
            const Field k1 = rhs(t, sl, u);
            Field u2 = u;
            u2.axpy(cplx(0.5 * h, 0.0), k1);
            const Field k2 = rhs(t + 0.5 * h, sl, u2);
            Field u3 = u;
            u3.axpy(cplx(0.5 * h, 0.0), k2);
            const Field k3 = rhs(t + 0.5 * h, sl, u3);
            Field u4 = u;
            u4.axpy(cplx(h, 0.0), k3);
            const Field k4 = rhs(t + h, sl, u4);
            u.axpy(cplx(h / 6.0, 0.0), k1);
            u.axpy(cplx(h / 3.0, 0.0), k2);
            u.axpy(cplx(h / 3.0, 0.0), k3);
            u.axpy(cplx(h / 6.0, 0.0), k4);
        }
        if (cfg.dealias) dealias_two_thirds(u);
        check_blowup(u, p.sobolev_index, t1, ref_norm, cfg.blowup_factor);
        if (is_output(t1)) {
            traj.times.push_back(t1);
            traj.states.push_back(u);
        }
    }
    return traj;
}

}  // namespace

Trajectory wong_zakai_solve(const SpdeProblem& p, const PolygonalPath& poly,
                            const EvolveConfig& cfg) {
    if (cfg.substeps_per_segment < 1)
        throw ConfigError("wong_zakai_solve: substeps_per_segment >= 1 required");
    if (std::abs(poly.horizon - p.horizon) > kTimeTol)
        throw GridMismatchError("wong_zakai_solve: driver horizon mismatch");
    std::vector<double> breaks;
    for (int i = 0; i <= poly.segments; ++i)
        breaks.push_back(poly.horizon * i / poly.segments);
    auto traj = deterministic_drive(
        p, true, [&](double t) { return poly.slope_at(t); }, breaks, cfg);
    std::uint64_t fp = 0xcbf29ce484222325ull;
    for (double v : poly.breakpoints) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        fp ^= bits;
        fp *= 0x100000001b3ull;
    }
    traj.driver_fingerprint = fp;
    return traj;
}

Trajectory skeleton_solve(const SpdeProblem& p, const CameronMartinPath& h,
                          const EvolveConfig& cfg) {
    if (std::abs(h.horizon - p.horizon) > kTimeTol)
        throw GridMismatchError("skeleton_solve: driver horizon mismatch");
    std::vector<double> breaks;
    for (int i = 0; i <= h.steps(); ++i) breaks.push_back(h.horizon * i / h.steps());
    return deterministic_drive(
        p, false, [&](double t) { return h.slope_at(t); }, breaks, cfg);
}

Trajectory backward_solve(const SpdeProblem& p, const BrownianPath& path, double t_end,
                          const Field& phi, const EvolveConfig& cfg) {
    if (p.f || p.g) throw ConfigError("backward_solve: forcing terms are not supported");
    if (t_end < 0.0 || t_end > p.horizon + kTimeTol)
        throw ConfigError("backward_solve: t_end outside [0, horizon]");
    if (cfg.steps < 1 || path.steps % cfg.steps != 0)
        throw ConfigError("backward_solve: path resolution must be a multiple of cfg.steps");
    const int m = cfg.steps;
    const int stride = path.steps / m;
    const double dt = p.horizon / m;
    const double kq = t_end / dt;
    const int mt = static_cast<int>(std::round(kq));
    if (std::abs(kq - mt) > 1e-7) throw ConfigError("backward_solve: t_end not on the step grid");

    StepOps ops{&p, {}, true};
    if (cfg.mollifier_eps) ops.moll = Mollifier::make(phi.grid(), *cfg.mollifier_eps);

    Trajectory traj;
    traj.sobolev_index = p.sobolev_index;
    traj.driver_fingerprint = path.fingerprint();

    const int band = stability_band(p, path, cfg);
    Field u = phi;
    if (mt > 0) truncate_band(u, band);
    const double ref_norm = guard_reference(p, u);
    std::vector<double> rev_times{t_end};
    std::vector<Field> rev_states{u};
    // Consume the slabs of the same path in reverse order with reversed sign.
    for (int i = mt - 1; i >= 0; --i) {
        const double t_hi = (i + 1) * dt;
        const double dw = path.values[static_cast<size_t>(i + 1) * stride] -
                          path.values[static_cast<size_t>(i) * stride];
        heun_step(ops, t_hi, dt, dw, -1, u);
        truncate_band(u, band);
        if (cfg.dealias) dealias_two_thirds(u);
        check_blowup(u, p.sobolev_index, i * dt, ref_norm, cfg.blowup_factor);
        if (should_record(mt - i, mt, cfg.record_every)) {
            rev_times.push_back(i * dt);
            rev_states.push_back(u);
        }
    }
    for (size_t k = rev_times.size(); k-- > 0;) {
        traj.times.push_back(rev_times[k]);
        traj.states.push_back(std::move(rev_states[k]));
    }
    return traj;
}

Field evolution_apply(const SpdeProblem& p, const BrownianPath& path, double s_from, double t_to,
                      const Field& phi, const EvolveConfig& cfg) {
    if (s_from < -kTimeTol || t_to > p.horizon + kTimeTol || s_from > t_to + kTimeTol)
        throw ConfigError("evolution_apply: need 0 <= s_from <= t_to <= horizon");
    if (cfg.steps < 1 || path.steps % cfg.steps != 0)
        throw ConfigError("evolution_apply: path resolution must be a multiple of cfg.steps");
    const int m = cfg.steps;
    const int stride = path.steps / m;
    const double dt = p.horizon / m;
    const double q0 = s_from / dt, q1 = t_to / dt;
    const int i0 = static_cast<int>(std::round(q0));
    const int i1 = static_cast<int>(std::round(q1));
    if (std::abs(q0 - i0) > 1e-7 || std::abs(q1 - i1) > 1e-7)
        throw ConfigError("evolution_apply: endpoints not on the step grid");

    StepOps ops{&p, {}, true};
    if (cfg.mollifier_eps) ops.moll = Mollifier::make(phi.grid(), *cfg.mollifier_eps);

    const int band = stability_band(p, path, cfg);
    Field u = phi;
    if (i1 > i0) truncate_band(u, band);
    const double ref_norm = guard_reference(p, u);
    for (int i = i0; i < i1; ++i) {
        const double dw = path.values[static_cast<size_t>(i + 1) * stride] -
                          path.values[static_cast<size_t>(i) * stride];
        if (cfg.scheme == EvolveConfig::Scheme::midpoint)
            midpoint_step(ops, i * dt, dt, dw, u);
        else
            heun_step(ops, i * dt, dt, dw, +1, u);
        truncate_band(u, band);
        if (cfg.dealias) dealias_two_thirds(u);
        check_blowup(u, p.sobolev_index, (i + 1) * dt, ref_norm, cfg.blowup_factor);
    }
    return u;
}

EnergyReport energy_report(const Trajectory& traj) {
    EnergyReport rep;
    const size_t n = traj.energy_t.size();
    rep.t = traj.energy_t;
    rep.norm_s = traj.energy_norm;
    rep.quad_a = traj.energy_quad_a;
    rep.quad_l = traj.energy_quad_l;
    rep.predicted_cum.assign(n, 0.0);
    rep.drift.assign(n, 0.0);
    if (n == 0) return rep;
    const double e0 = traj.energy_norm[0] * traj.energy_norm[0];
    double cum = 0.0;
    for (size_t i = 1; i < n; ++i) {
        // Midpoint (Stratonovich) increment of d|u|^2 = <A u,u>_s o dw.
        cum += 0.5 * (traj.energy_quad_a[i - 1] + traj.energy_quad_a[i]) * traj.energy_dw[i];
        rep.predicted_cum[i] = cum;
        const double e = traj.energy_norm[i] * traj.energy_norm[i];
        rep.drift[i] = e - e0 - cum;
        rep.max_abs_drift = std::max(rep.max_abs_drift, std::abs(rep.drift[i]));
    }
    return rep;
}

}  // namespace hspde

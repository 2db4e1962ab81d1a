#include "hspde/stats.hpp"

#include <algorithm>
#include <cmath>

#include "hspde/interp.hpp"
#include "hspde/parallel.hpp"

namespace hspde {

namespace {

double sup_error(const Trajectory& a, const Trajectory& b, double norm_index) {
    if (a.times.size() != b.times.size())
        throw ConfigError("sup_error: trajectories recorded on different time grids");
    double sup = 0.0;
    for (size_t i = 0; i < a.times.size(); ++i) {
        Field diff = a.states[i];
        diff -= b.states[i];
        sup = std::max(sup, sobolev_norm(diff, norm_index));
    }
    return sup;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe r;
    if (xs.empty()) return r;
    for (double v : xs) r.mean += v;
    r.mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return r;
    double var = 0.0;
    for (double v : xs) var += (v - r.mean) * (v - r.mean);
    var /= static_cast<double>(xs.size() - 1);
    r.se = std::sqrt(var / static_cast<double>(xs.size()));
    return r;
}

constexpr double kInvalid = -1.0;

}  // namespace

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceReport wz_convergence_study(const SpdeProblem& p, const std::vector<int>& ns,
                                       const EvolveConfig& cfg, const McConfig& mc) {
    if (mc.num_paths < 2) throw ConfigError("wz_convergence_study: need >= 2 paths");
    EvolveConfig quiet = cfg;
    quiet.energy_log = false;

    const size_t cells = ns.size();
    std::vector<std::vector<double>> sq(cells,
                                        std::vector<double>(static_cast<size_t>(mc.num_paths),
                                                            kInvalid));
    parallel_for(mc.num_paths, mc.threads, [&](int pi) {
        const BrownianPath path = sample_brownian(quiet.steps, p.horizon, mc.seed,
                                                  static_cast<std::uint64_t>(pi));
        Trajectory ref;
        try {
            ref = integrate_spde(p, path, quiet);
        } catch (const BlowupError&) {
            return;  // path excluded, slots stay invalid
        }
        for (size_t c = 0; c < cells; ++c) {
            try {
                const PolygonalPath poly = polygonalize(path, ns[c]);
                const Trajectory wz = wong_zakai_solve(p, poly, quiet);
                const double e = sup_error(wz, ref, mc.norm_index);
                sq[c][static_cast<size_t>(pi)] = e * e;
            } catch (const BlowupError&) {
                // leave invalid
            }
        }
    });

    ConvergenceReport rep;
    for (size_t c = 0; c < cells; ++c) {
        rep.abscissae.push_back(static_cast<double>(ns[c]));
        std::vector<double> ok;
        for (double v : sq[c])
            if (v >= 0.0) ok.push_back(v);
        rep.excluded_paths = std::max(rep.excluded_paths,
                                      mc.num_paths - static_cast<int>(ok.size()));
        const MeanSe ms = mean_se(ok);
        rep.errors.push_back(ms.mean);
        rep.std_errs.push_back(ms.se);
        rep.per_path.push_back(sq[c]);
    }
    rep.fitted_slope = loglog_slope(rep.abscissae, rep.errors);
    return rep;
}

ConvergenceReport small_noise_study(const SpdeProblem& p, const std::vector<double>& eps_list,
                                    const EvolveConfig& cfg, const McConfig& mc) {
    if (mc.num_paths < 2) throw ConfigError("small_noise_study: need >= 2 paths");
    EvolveConfig quiet = cfg;
    quiet.energy_log = false;

    // Deterministic reference: same stepping with the noise terms switched off,
    // so the difference isolates the noise response.
    SpdeProblem det = p;
    det.noise_scale = 0.0;
    const BrownianPath dummy = sample_brownian(quiet.steps, p.horizon, mc.seed, ~0ull);
    const Trajectory ref = integrate_spde(det, dummy, quiet);

    const std::vector<double> norms{mc.norm_index, mc.norm_index + 1.0, mc.norm_index + 2.0};
    const size_t cells = eps_list.size();
    std::vector<std::vector<std::vector<double>>> sq(
        norms.size(), std::vector<std::vector<double>>(
                          cells, std::vector<double>(static_cast<size_t>(mc.num_paths), kInvalid)));

    parallel_for(mc.num_paths, mc.threads, [&](int pi) {
        const BrownianPath path = sample_brownian(quiet.steps, p.horizon, mc.seed,
                                                  static_cast<std::uint64_t>(pi));
        for (size_t c = 0; c < cells; ++c) {
            SpdeProblem pe = p;
            pe.noise_scale = std::sqrt(eps_list[c]);
            try {
                const Trajectory ue = integrate_spde(pe, path, quiet);
                for (size_t ni = 0; ni < norms.size(); ++ni) {
                    const double e = sup_error(ue, ref, norms[ni]);
                    sq[ni][c][static_cast<size_t>(pi)] = e * e;
                }
            } catch (const BlowupError&) {
            }
        }
    });

    ConvergenceReport rep;
    rep.abscissae = eps_list;
    for (size_t c = 0; c < cells; ++c) {
        std::vector<double> ok;
        for (double v : sq[0][c])
            if (v >= 0.0) ok.push_back(v);
        rep.excluded_paths = std::max(rep.excluded_paths,
                                      mc.num_paths - static_cast<int>(ok.size()));
        const MeanSe ms = mean_se(ok);
        rep.errors.push_back(ms.mean);
        rep.std_errs.push_back(ms.se);
        rep.per_path.push_back(sq[0][c]);
    }
    rep.fitted_slope = loglog_slope(rep.abscissae, rep.errors);
    for (size_t ni = 1; ni < norms.size(); ++ni) {
        ConvergenceReport::ExtraNorm ex;
        ex.index = norms[ni];
        for (size_t c = 0; c < cells; ++c) {
            std::vector<double> ok;
            for (double v : sq[ni][c])
                if (v >= 0.0) ok.push_back(v);
            const MeanSe ms = mean_se(ok);
            ex.errors.push_back(ms.mean);
            ex.std_errs.push_back(ms.se);
        }
        ex.slope = loglog_slope(rep.abscissae, ex.errors);
        rep.extra.push_back(std::move(ex));
    }
    return rep;
}

LdpReport ldp_probe(const SpdeProblem& p, const CameronMartinPath& h, double eta,
                    const std::vector<double>& eps_list, const EvolveConfig& cfg,
                    const McConfig& mc) {
    if (!(eta > 0.0)) throw ConfigError("ldp_probe: eta must be positive");
    EvolveConfig quiet = cfg;
    quiet.energy_log = false;

    LdpReport rep;
    rep.eta = eta;
    rep.action = cm_action(h);
    const Trajectory skel = skeleton_solve(p, h, quiet);
    const int P = mc.num_paths;

    for (size_t ei = 0; ei < eps_list.size(); ++ei) {
        const double eps = eps_list[ei];
        SpdeProblem pe = p;
        pe.noise_scale = std::sqrt(eps);

        std::vector<double> naive_hit(static_cast<size_t>(P), 0.0);
        std::vector<double> tilt_contrib(static_cast<size_t>(P), 0.0);
        std::vector<double> lr(static_cast<size_t>(P), 0.0);

        parallel_for(P, mc.threads, [&](int pi) {
            const std::uint64_t base = (ei * 2 + 1) * static_cast<std::uint64_t>(P);
            // Naive estimator.
            {
                const BrownianPath w = sample_brownian(quiet.steps, p.horizon, mc.seed,
                                                       base + static_cast<std::uint64_t>(pi));
                try {
                    const Trajectory u = integrate_spde(pe, w, quiet);
                    naive_hit[static_cast<size_t>(pi)] =
                        sup_error(u, skel, mc.norm_index) <= eta ? 1.0 : 0.0;
                } catch (const BlowupError&) {
                }
            }
            // Tilted estimator with the shift h/sqrt(eps).
            {
                const BrownianPath w = sample_brownian(
                    quiet.steps, p.horizon, mc.seed,
                    base + static_cast<std::uint64_t>(P) + static_cast<std::uint64_t>(pi));
                const BrownianPath shifted = girsanov_shift(w, h, eps);
                double log_lr = 0.0;
                const double dt = w.dt();
                for (int i = 0; i < w.steps; ++i) {
                    const double hd = h.slope_at(w.time(i));
                    log_lr -= hd * w.increment(i) / std::sqrt(eps);
                    log_lr -= 0.5 * hd * hd * dt / eps;
                }
                const double ratio = std::exp(log_lr);
                lr[static_cast<size_t>(pi)] = ratio;
                try {
                    const Trajectory u = integrate_spde(pe, shifted, quiet);
                    const bool hit = sup_error(u, skel, mc.norm_index) <= eta;
                    tilt_contrib[static_cast<size_t>(pi)] = hit ? ratio : 0.0;
                } catch (const BlowupError&) {
                }
            }
        });

        LdpRow row;
        row.eps = eps;
        const MeanSe nm = mean_se(naive_hit);
        row.naive_prob = nm.mean;
        row.naive_se = nm.se;
        if (nm.mean == 0.0) {
            row.naive_zero_hits = true;
            row.naive_prob = 3.0 / P;  // rule-of-three upper bound, flagged
        }
        row.eps_log_naive = eps * std::log(std::max(row.naive_prob, 1e-300));
        const MeanSe tm = mean_se(tilt_contrib);
        row.tilted_prob = tm.mean;
        row.tilted_se = tm.se;
        row.eps_log_tilted = eps * std::log(std::max(tm.mean, 1e-300));
        const MeanSe lm = mean_se(lr);
        row.lr_mean = lm.mean;
        row.lr_se = lm.se;
        rep.rows.push_back(row);
        for (int pi = 0; pi < P; ++pi)
            rep.per_path.push_back({eps, pi, naive_hit[static_cast<size_t>(pi)],
                                    tilt_contrib[static_cast<size_t>(pi)] > 0.0 ? 1.0 : 0.0,
                                    lr[static_cast<size_t>(pi)]});
    }
    return rep;
}

SupportReport support_probe(const SpdeProblem& p, const std::vector<CameronMartinPath>& drivers,
                            double eta, double delta, const std::vector<int>& poly_ns,
                            const EvolveConfig& cfg, const McConfig& mc) {
    EvolveConfig quiet = cfg;
    quiet.energy_log = false;
    const int P = mc.num_paths;

    SupportReport rep;
    rep.ns = poly_ns;

    // Direction (a): distance to the skeleton of the path's own polygonalization.
    std::vector<std::vector<double>> dists(poly_ns.size(),
                                           std::vector<double>(static_cast<size_t>(P), kInvalid));
    // Direction (b): acceptance + tube hits per driver.
    std::vector<Trajectory> skels;
    skels.reserve(drivers.size());
    for (const auto& h : drivers) skels.push_back(skeleton_solve(p, h, quiet));
    std::vector<std::vector<double>> accept(drivers.size(),
                                            std::vector<double>(static_cast<size_t>(P), 0.0));
    std::vector<std::vector<double>> hit(drivers.size(),
                                         std::vector<double>(static_cast<size_t>(P), 0.0));
    std::vector<std::vector<double>> uncond(drivers.size(),
                                            std::vector<double>(static_cast<size_t>(P), 0.0));

    parallel_for(P, mc.threads, [&](int pi) {
        const BrownianPath w = sample_brownian(quiet.steps, p.horizon, mc.seed,
                                               static_cast<std::uint64_t>(pi));
        Trajectory u;
        try {
            u = integrate_spde(p, w, quiet);
        } catch (const BlowupError&) {
            return;
        }
        for (size_t c = 0; c < poly_ns.size(); ++c) {
            try {
                const CameronMartinPath hn =
                    CameronMartinPath::from_polygonal(polygonalize(w, poly_ns[c]), quiet.steps);
                const Trajectory psi = skeleton_solve(p, hn, quiet);
                dists[c][static_cast<size_t>(pi)] = sup_error(u, psi, mc.norm_index);
            } catch (const BlowupError&) {
            }
        }
        for (size_t d = 0; d < drivers.size(); ++d) {
            double devsup = 0.0;
            for (int i = 0; i <= w.steps; ++i)
                devsup = std::max(devsup,
                                  std::abs(w.values[static_cast<size_t>(i)] -
                                           drivers[d].value(w.time(i))));
            const bool tube = sup_error(u, skels[d], mc.norm_index) <= eta;
            uncond[d][static_cast<size_t>(pi)] = tube ? 1.0 : 0.0;
            if (devsup < delta) {
                accept[d][static_cast<size_t>(pi)] = 1.0;
                hit[d][static_cast<size_t>(pi)] = tube ? 1.0 : 0.0;
            }
        }
    });

    for (size_t c = 0; c < poly_ns.size(); ++c) {
        std::vector<double> ok;
        for (double v : dists[c])
            if (v >= 0.0) ok.push_back(v);
        std::sort(ok.begin(), ok.end());
        rep.median_distance.push_back(ok.empty() ? 0.0 : ok[ok.size() / 2]);
        rep.mean_distance.push_back(mean_se(ok).mean);
        rep.per_path_distance.push_back(dists[c]);
    }
    for (size_t d = 0; d < drivers.size(); ++d) {
        SupportReport::DriverRow row;
        double acc = 0.0, hits = 0.0, un = 0.0;
        for (int pi = 0; pi < P; ++pi) {
            acc += accept[d][static_cast<size_t>(pi)];
            hits += hit[d][static_cast<size_t>(pi)];
            un += uncond[d][static_cast<size_t>(pi)];
        }
        row.accepted = static_cast<int>(acc);
        row.inconclusive = row.accepted < 10;
        row.conditional_freq = row.accepted > 0 ? hits / acc : 0.0;
        row.unconditional_freq = un / P;
        rep.drivers.push_back(row);
    }
    return rep;
}

MalliavinDerivative malliavin_pointwise(const SpdeProblem& p, const BrownianPath& path,
                                        double theta, double t, const EvolveConfig& cfg) {
    if (theta < 0.0 || t > p.horizon + 1e-12)
        throw ConfigError("malliavin_pointwise: need 0 <= theta, t <= horizon");
    MalliavinDerivative d;
    d.kind = MalliavinDerivative::Kind::pointwise_theta;
    d.theta = theta;
    d.t = t;
    if (theta > t) {
        d.data = Field::zeros(p.u0.grid_ptr(), p.u0.components());
        return d;
    }
    if (p.a.empty()) {
        d.data = Field::zeros(p.u0.grid_ptr(), p.u0.components());
        return d;
    }
    const Field u_theta = evolution_apply(p, path, 0.0, theta, p.u0, cfg);
    Field v;
    if (cfg.mollifier_eps) {
        const Mollifier moll = Mollifier::make(p.u0.grid(), *cfg.mollifier_eps);
        v = apply_pdo(p.a.at(theta), mollify(u_theta, moll));
    } else {
        v = apply_pdo(p.a.at(theta), u_theta);
    }
    if (p.noise_scale != 1.0) v *= cplx(p.noise_scale, 0.0);
    // U(theta, t) is the homogeneous propagator; drop the forcing.
    SpdeProblem hom = p;
    hom.f = nullptr;
    hom.g = nullptr;
    d.data = evolution_apply(hom, path, theta, t, v, cfg);
    return d;
}

MalliavinDerivative malliavin_directional(const SpdeProblem& p, const BrownianPath& path,
                                          const CameronMartinPath& h, double t,
                                          const EvolveConfig& cfg, int stride) {
    if (stride < 1) throw ConfigError("malliavin_directional: stride >= 1");
    const double dt = p.horizon / cfg.steps;
    const double dq = stride * dt;
    const double qf = t / dq;
    const int q_count = static_cast<int>(std::round(qf));
    if (std::abs(qf - q_count) > 1e-7)
        throw ConfigError("malliavin_directional: t must be a multiple of stride steps");

    MalliavinDerivative d;
    d.kind = MalliavinDerivative::Kind::directional_h;
    d.t = t;
    d.data = Field::zeros(p.u0.grid_ptr(), p.u0.components());
    for (int q = 0; q <= q_count; ++q) {
        const double theta = q * dq;
        const double weight = (q == 0 || q == q_count) ? 0.5 * dq : dq;
        const double hd = h.slope_at(std::min(theta, p.horizon - 0.5 * dt));
        if (hd == 0.0) continue;
        const MalliavinDerivative dp = malliavin_pointwise(p, path, theta, t, cfg);
        d.data.axpy(cplx(weight * hd, 0.0), dp.data);
    }
    return d;
}

NondegeneracyResult nondegeneracy_check(const SpdeProblem& p, const BrownianPath& path,
                                        double x_point, double t, const EvolveConfig& cfg,
                                        double threshold, int stride) {
    const double dt = p.horizon / cfg.steps;
    const double dq = stride * dt;
    const int q_count = static_cast<int>(std::round(t / dq));
    if (std::abs(t / dq - q_count) > 1e-7)
        throw ConfigError("nondegeneracy_check: t must be a multiple of stride steps");
    NondegeneracyResult r;
    for (int q = 0; q <= q_count; ++q) {
        const double theta = q * dq;
        const double weight = (q == 0 || q == q_count) ? 0.5 * dq : dq;
        const MalliavinDerivative dp = malliavin_pointwise(p, path, theta, t, cfg);
        const cplx val = interp_periodic_cubic(p.u0.grid(), dp.data.comp(0), x_point);
        r.value += weight * std::norm(val);
    }
    r.verdict = r.value > threshold;
    return r;
}

}  // namespace hspde

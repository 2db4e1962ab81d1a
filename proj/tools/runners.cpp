#include "runners.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "hspde/characteristics.hpp"
#include "hspde/interp.hpp"
#include "hspde/microlocal.hpp"
#include "hspde/presets.hpp"

namespace hspde::cli {

namespace {

namespace fs = std::filesystem;

void finish_manifest(const RunSpec& spec, io::Manifest m) {
    io::write_manifest(spec.output_dir / "manifest.txt", m);
}

void maybe_plot(const RunSpec& spec, const std::string& csv, const std::string& title,
                int xcol, int ycol, bool loglog) {
    if (!spec.emit_plot) return;
    std::ofstream out(spec.output_dir / "plot.gp", std::ios::binary);
    out << "set datafile separator ','\n";
    if (loglog) out << "set logscale xy\n";
    out << "set key left\n";
    out << "plot '" << csv << "' using " << xcol << ":" << ycol
        << " with linespoints title '" << title << "'\n";
}

// Extract the transport coefficient alpha(x) that the characteristics and
// wavefront experiments need from the configured symbol spec.
std::vector<double> transport_alpha(const RunSpec& spec) {
    const json& a = spec.resolved.at("problem").value("a", json());
    if (a.is_null())
        throw ConfigError("this experiment needs problem.a in (symmetrized_)transport form");
    if (a.contains("transport"))
        return parse_real_coefficient(a["transport"].at("alpha"), *spec.grid);
    if (a.contains("symmetrized_transport"))
        return parse_real_coefficient(a["symmetrized_transport"].at("alpha"), *spec.grid);
    throw ConfigError("this experiment needs problem.a in (symmetrized_)transport form");
}

double sup_distance(const Trajectory& a, const Trajectory& b, double norm_index) {
    double sup = 0.0;
    for (size_t i = 0; i < a.times.size(); ++i) {
        Field diff = a.states[i];
        diff -= b.states[i];
        sup = std::max(sup, sobolev_norm(diff, norm_index));
    }
    return sup;
}

}  // namespace

int run_simulate(const RunSpec& spec) {
    const json& study = study_section(spec);
    const std::uint64_t path_index =
        static_cast<std::uint64_t>(study.value("path_index", 0));
    const BrownianPath path =
        sample_brownian(spec.solver.steps, spec.problem.horizon, spec.seed, path_index);
    const Trajectory traj = integrate_spde(spec.problem, path, spec.solver);

    io::write_trajectory_csv(spec.output_dir / "trajectory.csv", traj);
    io::write_energy_csv(spec.output_dir / "energy.csv", traj);
    io::write_path_csv(spec.output_dir / "path.csv", path);
    io::write_field_csv(spec.output_dir / "final_state.csv", traj.states.back());

    io::Manifest m = base_manifest(spec, "simulate");
    m.emplace_back("path_index", std::to_string(path_index));
    m.emplace_back("driver_fingerprint", std::to_string(traj.driver_fingerprint));
    m.emplace_back("stability_band",
                   std::to_string(stability_band(spec.problem, path, spec.solver)));
    m.emplace_back("final_norm_s", io::fmt(sobolev_norm(traj.states.back(),
                                                        spec.problem.sobolev_index)));
    finish_manifest(spec, std::move(m));
    return 0;
}

int run_characteristics(const RunSpec& spec) {
    const json& study = study_section(spec);
    const std::string convention = study.value("sign_convention", "oracle");
    if (convention != "oracle" && convention != "literal")
        throw ConfigError("sign_convention: 'oracle' or 'literal'");
    const std::uint64_t path_index =
        static_cast<std::uint64_t>(study.value("path_index", 0));
    const BrownianPath path =
        sample_brownian(spec.solver.steps, spec.problem.horizon, spec.seed, path_index);

    const Trajectory spectral = integrate_spde(spec.problem, path, spec.solver);

    std::vector<double> alpha = transport_alpha(spec);
    // Oracle-pinned convention: the flow carrying u_t = alpha u_x wdot solves
    // xdot = -alpha wdot. The 'literal' switch feeds alpha through unsigned.
    if (convention == "oracle")
        for (double& v : alpha) v = -v;
    const CharFlow flow = flow_solve(spec.grid, alpha, CoefficientField{}, path,
                                     spec.solver.steps, spec.solver.record_every);
    const Field transported =
        transport_solution(spec.problem.u0, flow, spec.problem.horizon);

    Field diff = transported;
    diff -= spectral.states.back();
    const double err =
        sobolev_norm(diff, 0.0) / std::max(1e-30, sobolev_norm(spectral.states.back(), 0.0));

    io::write_flow_csv(spec.output_dir / "flow.csv", flow);
    io::write_field_csv(spec.output_dir / "spectral_final.csv", spectral.states.back());
    io::write_field_csv(spec.output_dir / "transported_final.csv", transported);
    io::write_path_csv(spec.output_dir / "path.csv", path);

    io::Manifest m = base_manifest(spec, "characteristics");
    m.emplace_back("sign_convention", convention);
    m.emplace_back("l2_relative_error", io::fmt(err));
    finish_manifest(spec, std::move(m));
    std::cout << "characteristics: relative L2 error " << io::fmt(err) << "\n";
    return 0;
}

int run_wavefront(const RunSpec& spec) {
    const json& study = study_section(spec);
    const int paths = study.value("P", 16);
    json det = study.value("detector", json::object());
    const double window = det.value("window_width_dx", 8.0) * spec.grid->dx;
    const double band_fraction = det.value("band_fraction", 1.0 / 3.0);
    const double rel_threshold = det.value("rel_threshold", 0.5);

    // Kink location of the configured datum.
    const json& u0spec = spec.resolved.at("problem").at("u0");
    if (!u0spec.contains("preset") || u0spec["preset"] != "triangle_kink")
        throw ConfigError("wavefront: problem.u0 must be the triangle_kink preset");
    const double kink_x = u0spec.value("center", 0.5 * spec.grid->length);

    std::vector<double> alpha = transport_alpha(spec);
    std::vector<double> hamiltonian(alpha);
    // Same oracle sign mapping as the characteristics module: the kink of
    // u_t = alpha u_x wdot travels along xdot = -alpha wdot.
    for (double& v : hamiltonian) v = -v;

    // Band ceiling for the detector: a projected solve carries no energy above
    // the projection radius, so the analysis band must stop there.
    const int band_ceiling =
        spec.solver.projection == EvolveConfig::Projection::fixed ? spec.solver.projection_modes
                                                                  : 0;
    std::vector<std::vector<double>> rows;
    int hits = 0, total = 0, elsewhere = 0;
    std::vector<std::pair<double, std::vector<Detection>>> dets_path0;
    BicharFlow flow0;
    for (int pi = 0; pi < paths; ++pi) {
        const BrownianPath path = sample_brownian(spec.solver.steps, spec.problem.horizon,
                                                  spec.seed, static_cast<std::uint64_t>(pi));
        const Trajectory traj = integrate_spde(spec.problem, path, spec.solver);
        const std::vector<PhasePoint> pts{{kink_x, 1.0}, {kink_x, -1.0}};
        const BicharFlow bflow = bichar_flow(spec.grid, hamiltonian, CoefficientField{}, pts,
                                             path, spec.solver.steps, spec.solver.record_every);
        if (pi == 0) flow0 = bflow;
        for (size_t ti = 1; ti < traj.times.size(); ++ti) {
            const double predicted = bflow.wrapped_x(0, ti);
            const auto dets = detect_singularities(traj.states[ti], window, band_fraction,
                                                   rel_threshold, 1e-7, band_ceiling);
            if (pi == 0) dets_path0.emplace_back(traj.times[ti], dets);
            double best = 1e9;
            for (const auto& d : dets) {
                double dist = std::abs(d.x - predicted);
                dist = std::min(dist, spec.grid->length - dist);
                best = std::min(best, dist);
                if (dist > window) ++elsewhere;
            }
            const bool hit = !dets.empty() && best <= 2.0 * spec.grid->dx;
            hits += hit ? 1 : 0;
            ++total;
            rows.push_back({static_cast<double>(pi), traj.times[ti], predicted,
                            dets.empty() ? -1.0 : dets[0].x, best, hit ? 1.0 : 0.0,
                            static_cast<double>(dets.size())});
        }
    }
    io::write_table_csv(spec.output_dir / "tracking.csv",
                        {"path", "t", "x_predicted", "x_detected", "distance", "hit",
                         "num_detections"},
                        rows);
    io::write_wavefront_csv(spec.output_dir / "wavefront.csv", flow0, {"kink+", "kink-"});
    io::write_detections_csv(spec.output_dir / "detections.csv", dets_path0);

    const double frac = total > 0 ? static_cast<double>(hits) / total : 0.0;
    io::Manifest m = base_manifest(spec, "wavefront");
    m.emplace_back("paths", std::to_string(paths));
    m.emplace_back("hit_fraction", io::fmt(frac));
    m.emplace_back("detections_elsewhere", std::to_string(elsewhere));
    finish_manifest(spec, std::move(m));
    std::cout << "wavefront: hit fraction " << io::fmt(frac) << ", elsewhere " << elsewhere
              << "\n";
    return 0;
}

int run_wong_zakai(const RunSpec& spec) {
    const json& study = study_section(spec);
    std::vector<int> ns;
    for (const auto& v : study.value("ns", json::array({8, 16, 32, 64, 128})))
        ns.push_back(v.get<int>());
    McConfig mc;
    mc.num_paths = study.value("P", 64);
    mc.seed = spec.seed;
    mc.norm_index = spec.problem.sobolev_index - 2.0;
    mc.threads = spec.threads;
    const ConvergenceReport rep = wz_convergence_study(spec.problem, ns, spec.solver, mc);

    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < rep.abscissae.size(); ++i)
        rows.push_back({rep.abscissae[i], rep.errors[i], rep.std_errs[i],
                        mc.confidence * rep.std_errs[i]});
    io::write_table_csv(spec.output_dir / "wz_summary.csv",
                        {"n", "mean_sq_sup_err", "std_err", "ci_halfwidth"}, rows);
    std::vector<std::vector<double>> raw;
    for (size_t i = 0; i < rep.per_path.size(); ++i)
        for (size_t pi = 0; pi < rep.per_path[i].size(); ++pi)
            raw.push_back({rep.abscissae[i], static_cast<double>(pi), rep.per_path[i][pi]});
    io::write_table_csv(spec.output_dir / "wz_paths.csv", {"n", "path", "sq_sup_err"}, raw);
    maybe_plot(spec, "wz_summary.csv", "E sup |u^n - u|^2", 1, 2, true);

    io::Manifest m = base_manifest(spec, "wong-zakai");
    m.emplace_back("paths", std::to_string(mc.num_paths));
    m.emplace_back("norm_index", io::fmt(mc.norm_index));
    m.emplace_back("fitted_slope", io::fmt(rep.fitted_slope));
    m.emplace_back("excluded_paths", std::to_string(rep.excluded_paths));
    finish_manifest(spec, std::move(m));
    std::cout << "wong-zakai: slope " << io::fmt(rep.fitted_slope) << "\n";
    return 0;
}

int run_small_noise(const RunSpec& spec) {
    const json& study = study_section(spec);
    std::vector<double> eps;
    for (const auto& v : study.value("eps_list", json::array({1e-1, 1e-2, 1e-3, 1e-4})))
        eps.push_back(v.get<double>());
    McConfig mc;
    mc.num_paths = study.value("P", 64);
    mc.seed = spec.seed;
    mc.norm_index = spec.problem.sobolev_index - 2.0;
    mc.threads = spec.threads;
    const ConvergenceReport rep = small_noise_study(spec.problem, eps, spec.solver, mc);

    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < rep.abscissae.size(); ++i) {
        std::vector<double> row{rep.abscissae[i], rep.errors[i], rep.std_errs[i]};
        for (const auto& ex : rep.extra) {
            row.push_back(ex.errors[i]);
            row.push_back(ex.std_errs[i]);
        }
        rows.push_back(std::move(row));
    }
    io::write_table_csv(spec.output_dir / "sn_summary.csv",
                        {"eps", "err_sm2", "se_sm2", "err_sm1", "se_sm1", "err_s", "se_s"}, rows);
    std::vector<std::vector<double>> raw;
    for (size_t i = 0; i < rep.per_path.size(); ++i)
        for (size_t pi = 0; pi < rep.per_path[i].size(); ++pi)
            raw.push_back({rep.abscissae[i], static_cast<double>(pi), rep.per_path[i][pi]});
    io::write_table_csv(spec.output_dir / "sn_paths.csv", {"eps", "path", "sq_sup_err_sm2"}, raw);
    maybe_plot(spec, "sn_summary.csv", "E sup |u^eps - u|^2 (s-2)", 1, 2, true);

    io::Manifest m = base_manifest(spec, "small-noise");
    m.emplace_back("paths", std::to_string(mc.num_paths));
    m.emplace_back("slope_sm2", io::fmt(rep.fitted_slope));
    for (const auto& ex : rep.extra)
        m.emplace_back("slope_norm_" + io::fmt(ex.index), io::fmt(ex.slope));
    m.emplace_back("excluded_paths", std::to_string(rep.excluded_paths));
    finish_manifest(spec, std::move(m));
    std::cout << "small-noise: slope (s-2) " << io::fmt(rep.fitted_slope) << "\n";
    return 0;
}

int run_ldp(const RunSpec& spec) {
    const json& study = study_section(spec);
    const CameronMartinPath h = parse_cm_path(study.value("h", json()), spec.solver.steps,
                                              spec.problem.horizon);
    const double eta = study.value("eta", 0.25);
    std::vector<double> eps;
    for (const auto& v : study.value("eps_list", json::array({1e-1, 1e-2})))
        eps.push_back(v.get<double>());
    McConfig mc;
    mc.num_paths = study.value("P", 256);
    mc.seed = spec.seed;
    mc.norm_index = spec.problem.sobolev_index - 2.0;
    mc.threads = spec.threads;
    const LdpReport rep = ldp_probe(spec.problem, h, eta, eps, spec.solver, mc);

    std::vector<std::vector<double>> rows;
    for (const LdpRow& r : rep.rows)
        rows.push_back({r.eps, r.naive_prob, r.naive_se, r.naive_zero_hits ? 1.0 : 0.0,
                        r.eps_log_naive, r.tilted_prob, r.tilted_se, r.eps_log_tilted, r.lr_mean,
                        r.lr_se});
    io::write_table_csv(spec.output_dir / "ldp_summary.csv",
                        {"eps", "naive_prob", "naive_se", "naive_is_upper_bound",
                         "eps_log_naive", "tilted_prob", "tilted_se", "eps_log_tilted",
                         "lr_mean", "lr_se"},
                        rows);
    std::vector<std::vector<double>> raw;
    for (const auto& pr : rep.per_path)
        raw.push_back({pr.eps, static_cast<double>(pr.path), pr.naive_hit, pr.tilted_hit,
                       pr.likelihood_ratio});
    io::write_table_csv(spec.output_dir / "ldp_paths.csv",
                        {"eps", "path", "naive_hit", "tilted_hit", "likelihood_ratio"}, raw);
    maybe_plot(spec, "ldp_summary.csv", "eps log P(tube)", 1, 8, false);

    io::Manifest m = base_manifest(spec, "ldp");
    m.emplace_back("eta", io::fmt(eta));
    m.emplace_back("action_I_h", io::fmt(rep.action));
    m.emplace_back("paths", std::to_string(mc.num_paths));
    finish_manifest(spec, std::move(m));
    std::cout << "ldp: I(h) = " << io::fmt(rep.action) << "\n";
    return 0;
}

int run_support(const RunSpec& spec) {
    const json& study = study_section(spec);
    std::vector<CameronMartinPath> drivers;
    for (const auto& d : study.value("drivers", json::array()))
        drivers.push_back(parse_cm_path(d, spec.solver.steps, spec.problem.horizon));
    if (drivers.empty())
        drivers.push_back(CameronMartinPath::zero(spec.solver.steps, spec.problem.horizon));
    const double eta = study.value("eta", 0.25);
    const double delta = study.value("delta", 0.5);
    std::vector<int> poly_ns;
    for (const auto& v : study.value("poly_ns", json::array({8, 32, 128})))
        poly_ns.push_back(v.get<int>());
    McConfig mc;
    mc.num_paths = study.value("P", 128);
    mc.seed = spec.seed;
    mc.norm_index = spec.problem.sobolev_index - 2.0;
    mc.threads = spec.threads;
    const SupportReport rep = support_probe(spec.problem, drivers, eta, delta, poly_ns,
                                            spec.solver, mc);

    std::vector<std::vector<double>> rows_a;
    for (size_t i = 0; i < rep.ns.size(); ++i)
        rows_a.push_back({static_cast<double>(rep.ns[i]), rep.median_distance[i],
                          rep.mean_distance[i]});
    io::write_table_csv(spec.output_dir / "support_own_skeleton.csv",
                        {"n", "median_distance", "mean_distance"}, rows_a);
    std::vector<std::vector<double>> raw_a;
    for (size_t i = 0; i < rep.per_path_distance.size(); ++i)
        for (size_t pi = 0; pi < rep.per_path_distance[i].size(); ++pi)
            raw_a.push_back({static_cast<double>(rep.ns[i]), static_cast<double>(pi),
                             rep.per_path_distance[i][pi]});
    io::write_table_csv(spec.output_dir / "support_paths.csv", {"n", "path", "distance"}, raw_a);
    std::vector<std::vector<double>> rows_b;
    int inconclusive = 0;
    for (size_t d = 0; d < rep.drivers.size(); ++d) {
        const auto& r = rep.drivers[d];
        inconclusive += r.inconclusive ? 1 : 0;
        rows_b.push_back({static_cast<double>(d), static_cast<double>(r.accepted),
                          r.conditional_freq, r.inconclusive ? 1.0 : 0.0, r.unconditional_freq});
    }
    io::write_table_csv(spec.output_dir / "support_conditional.csv",
                        {"driver", "accepted", "conditional_freq", "inconclusive",
                         "unconditional_freq"},
                        rows_b);

    io::Manifest m = base_manifest(spec, "support");
    m.emplace_back("eta", io::fmt(eta));
    m.emplace_back("delta", io::fmt(delta));
    m.emplace_back("inconclusive_drivers", std::to_string(inconclusive));
    finish_manifest(spec, std::move(m));
    if (inconclusive > 0)
        std::cout << "support: " << inconclusive
                  << " driver(s) inconclusive (fewer than 10 accepted paths)\n";
    return 0;
}

int run_malliavin(const RunSpec& spec) {
    const json& study = study_section(spec);
    const double t = study.value("t", spec.problem.horizon);
    const double theta = study.value("theta", 0.5 * spec.problem.horizon);
    const int stride = study.value("stride", 64);
    const CameronMartinPath h = parse_cm_path(study.value("h", json()), spec.solver.steps,
                                              spec.problem.horizon);
    std::vector<double> kappas;
    for (const auto& v : study.value("kappas", json::array({1e-3, 1e-4, 1e-5})))
        kappas.push_back(v.get<double>());
    const BrownianPath path =
        sample_brownian(spec.solver.steps, spec.problem.horizon, spec.seed, 0);

    const MalliavinDerivative dh = malliavin_directional(spec.problem, path, h, t, spec.solver,
                                                         stride);
    io::write_field_csv(spec.output_dir / "directional_derivative.csv", dh.data);

    const Field base = evolution_apply(spec.problem, path, 0.0, t, spec.problem.u0, spec.solver);
    std::vector<std::vector<double>> rows;
    const double norm_index = spec.problem.sobolev_index - 2.0;
    for (double kappa : kappas) {
        const BrownianPath bumped = girsanov_shift(path, h, 1.0 / (kappa * kappa));
        const Field up = evolution_apply(spec.problem, bumped, 0.0, t, spec.problem.u0,
                                         spec.solver);
        Field fd = up;
        fd -= base;
        fd *= cplx(1.0 / kappa, 0.0);
        Field diff = fd;
        diff -= dh.data;
        const double rel = sobolev_norm(diff, norm_index) /
                           std::max(1e-30, sobolev_norm(fd, norm_index));
        rows.push_back({kappa, rel});
    }
    io::write_table_csv(spec.output_dir / "malliavin_fd.csv", {"kappa", "rel_error_sm2"}, rows);

    const MalliavinDerivative dp = malliavin_pointwise(spec.problem, path, theta, t, spec.solver);
    io::write_field_csv(spec.output_dir / "pointwise_derivative.csv", dp.data);
    const MalliavinDerivative dlate =
        malliavin_pointwise(spec.problem, path, t + 0.25 * spec.problem.horizon, t, spec.solver);

    const double x_point = study.value("x_point", 0.5 * spec.grid->length);
    const NondegeneracyResult nd =
        nondegeneracy_check(spec.problem, path, x_point, t, spec.solver, 1e-10, stride);

    io::Manifest m = base_manifest(spec, "malliavin");
    m.emplace_back("t", io::fmt(t));
    m.emplace_back("theta", io::fmt(theta));
    m.emplace_back("theta_after_t_norm", io::fmt(sobolev_norm(dlate.data, 0.0)));
    m.emplace_back("nondegeneracy_value", io::fmt(nd.value));
    m.emplace_back("nondegeneracy_verdict", nd.verdict ? "positive" : "degenerate");
    finish_manifest(spec, std::move(m));
    std::cout << "malliavin: nondegeneracy value " << io::fmt(nd.value) << " ("
              << (nd.verdict ? "positive" : "degenerate") << ")\n";
    return 0;
}

int run_check_conditions(const RunSpec& spec) {
    const json& study = study_section(spec);
    const int trials = study.value("trials", 8);
    const int iterations = study.value("iterations", 64);
    json th = study.value("thresholds", json::object());
    const double thA = th.value("A", 10.0), thB = th.value("B", 10.0), thL = th.value("L", 10.0),
                 thM = th.value("M", 10.0);
    const OperatorDiagnostics d = estimate_conditions(
        spec.problem.a, spec.problem.b, spec.problem.sobolev_index, trials, iterations, spec.seed);

    auto verdict = [](double norm, double threshold) {
        return norm <= threshold ? "pass" : "warn";
    };
    std::printf("operator   norm(H^s->H^s)   threshold  verdict\n");
    std::printf("A          %-16.6g %-10.3g %s\n", d.norm_A, thA, verdict(d.norm_A, thA));
    std::printf("B          %-16.6g %-10.3g %s\n", d.norm_B, thB, verdict(d.norm_B, thB));
    std::printf("L          %-16.6g %-10.3g %s\n", d.norm_L, thL, verdict(d.norm_L, thL));
    std::printf("M          %-16.6g %-10.3g %s\n", d.norm_M, thM, verdict(d.norm_M, thM));

    io::write_table_csv(spec.output_dir / "conditions.csv",
                        {"norm_A", "norm_B", "norm_L", "norm_M", "s", "trials", "iterations"},
                        {{d.norm_A, d.norm_B, d.norm_L, d.norm_M, d.s,
                          static_cast<double>(d.trials), static_cast<double>(d.iterations)}});
    io::Manifest m = base_manifest(spec, "check-conditions");
    // Continuity diagnostic for tabulated time families (condition (ii)):
    // adjacent-sample deviation beyond 10x the coefficient modulus is flagged.
    const double dev_a = spec.problem.a.max_adjacent_deviation();
    const double dev_b = spec.problem.b.max_adjacent_deviation();
    m.emplace_back("time_family_deviation_a", io::fmt(dev_a));
    m.emplace_back("time_family_deviation_b", io::fmt(dev_b));
    m.emplace_back("time_family_continuity", (dev_a > 10.0 || dev_b > 10.0) ? "warn" : "pass");
    m.emplace_back("norm_A", io::fmt(d.norm_A));
    m.emplace_back("norm_B", io::fmt(d.norm_B));
    m.emplace_back("norm_L", io::fmt(d.norm_L));
    m.emplace_back("norm_M", io::fmt(d.norm_M));
    m.emplace_back("verdict_A", verdict(d.norm_A, thA));
    m.emplace_back("verdict_B", verdict(d.norm_B, thB));
    m.emplace_back("verdict_L", verdict(d.norm_L, thL));
    m.emplace_back("verdict_M", verdict(d.norm_M, thM));
    finish_manifest(spec, std::move(m));
    return 0;
}

int run_selftest() {
    int failures = 0;
    auto report = [&](const char* name, bool ok) {
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
        if (!ok) ++failures;
    };

    auto g = Grid1D::make(64);
    {
        const Field one = Field::from_function(g, [](double) { return cplx(2.0, 0.0); });
        const SpectralField s = dft(one);
        report("dft: DC mode of a constant", std::abs(s.comp(0)[0] - cplx(2.0, 0.0)) < 1e-13);
        report("sobolev: |const|_s = const", std::abs(sobolev_norm(one, 1.5) - 2.0) < 1e-12);
    }
    {
        const Mollifier mol = Mollifier::make(*g, 0.1);
        report("mollifier: chi_hat(0) = 1", mol.multiplier[0] == 1.0);
        const Field one = Field::from_function(g, [](double) { return cplx(1.0, 0.0); });
        Field diff = mollify(one, mol);
        diff -= one;
        report("mollifier: constants unchanged", sobolev_norm(diff, 0.0) < 1e-13);
        report("mollifier gap: k(eps,eps) = 0", mollifier_gap(0.2, 0.2, *g) == 0.0);
    }
    {
        const auto alpha = presets::constant_coefficient(*g, 1.0);
        const SeparableSymbol D = make_symmetrized_transport(g, alpha);
        const Field mode = presets::complex_exponential(g, 1);
        Field want = mode;
        want *= cplx(0.0, 1.0);
        Field got = apply_pdo(D, mode);
        got -= want;
        report("symbols: derivative on a Fourier mode", sobolev_norm(got, 0.0) < 1e-12);
    }
    {
        const BrownianPath p1 = sample_brownian(64, 1.0, 7, 3);
        const BrownianPath p2 = sample_brownian(64, 1.0, 7, 3);
        report("noise: reproducible paths", p1.values == p2.values);
        const PolygonalPath poly = polygonalize(p1, 8);
        bool match = true;
        for (int i = 0; i <= 8; ++i)
            match = match && std::abs(poly.value(i / 8.0) -
                                      p1.values[static_cast<size_t>(i) * 8]) < 1e-14;
        report("noise: polygonal breakpoints", match);
        report("noise: cm_action of h(t) = t",
               std::abs(cm_action(CameronMartinPath::linear(1.0, 64, 1.0)) - 0.5) < 1e-14);
    }
    {
        SpdeProblem p;
        p.a = TimeSymbolFamily::constant(
            make_symmetrized_transport(g, presets::constant_coefficient(*g, 1.0)));
        p.u0 = Field::zeros(g, 1);
        EvolveConfig cfg;
        cfg.steps = 64;
        const BrownianPath path = sample_brownian(64, 1.0, 1, 0);
        const Trajectory traj = integrate_spde(p, path, cfg);
        report("evolve: zero data stays zero", sobolev_norm(traj.states.back(), 0.0) == 0.0);

        p.u0 = presets::gaussian_bump(g, 0.5 * g->length, 0.9);
        const MalliavinDerivative late = malliavin_pointwise(p, path, 0.75, 0.5, cfg);
        report("malliavin: D_theta u(t) = 0 for theta > t",
               sobolev_norm(late.data, 0.0) == 0.0);
    }
    {
        const BrownianPath path = sample_brownian(128, 1.0, 5, 0);
        const CharFlow flow = flow_solve(g, presets::constant_coefficient(*g, 1.0),
                                         CoefficientField{}, path, 128, 128);
        bool ok = true;
        for (int j = 0; j < g->n; j += 8)
            ok = ok && std::abs(flow.positions.back()[static_cast<size_t>(j)] -
                                (g->nodes[static_cast<size_t>(j)] + path.values.back())) < 1e-12;
        report("characteristics: additive flow x + w(t)", ok);
        const std::vector<PhasePoint> pts{{1.0, 2.0}};
        const BicharFlow bf = bichar_flow(g, presets::constant_coefficient(*g, 1.0),
                                          CoefficientField{}, pts, path, 128, 128);
        report("microlocal: constant Hamiltonian keeps xi",
               std::abs(bf.xi[0].back() - 2.0) < 1e-12);
    }
    std::printf(failures == 0 ? "selftest: all checks passed\n"
                              : "selftest: %d check(s) failed\n",
                failures);
    return failures == 0 ? 0 : 1;
}

}  // namespace hspde::cli

#include "config.hpp"

#include <fstream>
#include <set>

#include "hspde/presets.hpp"
#include "hspde/symbols.hpp"

namespace hspde::cli {

namespace {

void check_keys(const json& obj, const std::string& ctx,
                const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(ctx + ": expected an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw ConfigError(ctx + ": unknown key '" + key + "'");
}

double num_or(const json& obj, const std::string& key, double dflt) {
    if (!obj.contains(key) || obj[key].is_null()) return dflt;
    if (!obj[key].is_number()) throw ConfigError(key + ": expected a number");
    return obj[key].get<double>();
}

int int_or(const json& obj, const std::string& key, int dflt) {
    if (!obj.contains(key) || obj[key].is_null()) return dflt;
    if (!obj[key].is_number_integer()) throw ConfigError(key + ": expected an integer");
    return obj[key].get<int>();
}

std::vector<cplx> coefficient_samples(const json& spec, const Grid1D& grid,
                                      const std::string& ctx) {
    const size_t n = static_cast<size_t>(grid.n);
    if (spec.is_number()) return std::vector<cplx>(n, cplx(spec.get<double>(), 0.0));
    check_keys(spec, ctx, {"preset", "offset", "amplitude", "harmonic", "phase", "fourier",
                           "samples", "re", "im"});
    if (spec.contains("preset")) {
        const std::string name = spec["preset"].get<std::string>();
        if (name == "affine_sine") {
            const auto v = presets::affine_sine(grid, num_or(spec, "offset", 0.0),
                                                num_or(spec, "amplitude", 1.0),
                                                int_or(spec, "harmonic", 1),
                                                num_or(spec, "phase", 0.0));
            return std::vector<cplx>(v.begin(), v.end());
        }
        if (name == "constant") {
            return std::vector<cplx>(n, cplx(num_or(spec, "re", num_or(spec, "offset", 0.0)),
                                             num_or(spec, "im", 0.0)));
        }
        throw ConfigError(ctx + ": unknown coefficient preset '" + name + "'");
    }
    if (spec.contains("fourier")) {
        std::vector<std::tuple<int, double, double>> modes;
        for (const auto& m : spec["fourier"])
            modes.emplace_back(m.at(0).get<int>(), m.at(1).get<double>(), m.at(2).get<double>());
        std::vector<cplx> out(n);
        for (int j = 0; j < grid.n; ++j) {
            cplx acc(0.0, 0.0);
            for (const auto& [k, re, im] : modes) {
                const double arg = kTwoPi * k * grid.nodes[static_cast<size_t>(j)] / grid.length;
                acc += cplx(re, im) * cplx(std::cos(arg), std::sin(arg));
            }
            out[static_cast<size_t>(j)] = acc;
        }
        return out;
    }
    if (spec.contains("samples")) {
        std::vector<cplx> out;
        for (const auto& v : spec["samples"]) {
            if (v.is_number())
                out.emplace_back(v.get<double>(), 0.0);
            else
                out.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
        }
        if (out.size() != n) throw ConfigError(ctx + ": sample count != grid size");
        return out;
    }
    throw ConfigError(ctx + ": empty coefficient spec");
}

std::vector<cplx> multiplier_samples(const json& spec, const Grid1D& grid,
                                     const std::string& ctx) {
    const size_t n = static_cast<size_t>(grid.n);
    std::vector<cplx> out(n);
    if (spec.is_string()) {
        const std::string kind = spec.get<std::string>();
        for (size_t k = 0; k < n; ++k) {
            const double xi = grid.freqs[k];
            if (kind == "i*xi")
                out[k] = cplx(0.0, xi);
            else if (kind == "1")
                out[k] = cplx(1.0, 0.0);
            else if (kind == "abs(xi)")
                out[k] = cplx(std::abs(xi), 0.0);
            else
                throw ConfigError(ctx + ": unknown multiplier '" + kind + "'");
        }
        return out;
    }
    if (spec.is_array()) {
        if (spec.size() != n) throw ConfigError(ctx + ": multiplier sample count != grid size");
        for (size_t k = 0; k < n; ++k) out[k] = cplx(spec[k].at(0).get<double>(),
                                                     spec[k].at(1).get<double>());
        return out;
    }
    throw ConfigError(ctx + ": multiplier must be a keyword or a sample list");
}

TimeSymbolFamily parse_symbol_family(const json& spec, std::shared_ptr<const Grid1D> grid,
                                     const std::string& ctx) {
    if (spec.is_null()) return TimeSymbolFamily();
    check_keys(spec, ctx, {"symmetrized_transport", "transport", "multiplication", "terms",
                           "order"});
    if (spec.contains("symmetrized_transport")) {
        const json& st = spec["symmetrized_transport"];
        check_keys(st, ctx + ".symmetrized_transport", {"alpha", "a0"});
        const auto ac = coefficient_samples(st.at("alpha"), *grid, ctx + ".alpha");
        std::vector<double> alpha(ac.size());
        for (size_t j = 0; j < ac.size(); ++j) {
            if (ac[j].imag() != 0.0) throw ConfigError(ctx + ": alpha must be real");
            alpha[j] = ac[j].real();
        }
        std::vector<cplx> a0;
        if (st.contains("a0") && !st["a0"].is_null())
            a0 = coefficient_samples(st["a0"], *grid, ctx + ".a0");
        return TimeSymbolFamily::constant(make_symmetrized_transport(grid, alpha, a0));
    }
    if (spec.contains("transport")) {
        const json& tr = spec["transport"];
        check_keys(tr, ctx + ".transport", {"alpha", "a0"});
        const auto ac = coefficient_samples(tr.at("alpha"), *grid, ctx + ".alpha");
        std::vector<double> alpha(ac.size());
        for (size_t j = 0; j < ac.size(); ++j) alpha[j] = ac[j].real();
        std::vector<cplx> a0;
        if (tr.contains("a0") && !tr["a0"].is_null())
            a0 = coefficient_samples(tr["a0"], *grid, ctx + ".a0");
        return TimeSymbolFamily::constant(make_transport(grid, alpha, a0));
    }
    if (spec.contains("multiplication")) {
        const json& mu = spec["multiplication"];
        check_keys(mu, ctx + ".multiplication", {"a0"});
        return TimeSymbolFamily::constant(
            make_multiplication(grid, coefficient_samples(mu.at("a0"), *grid, ctx + ".a0")));
    }
    if (spec.contains("terms")) {
        const double order = num_or(spec, "order", 1.0);
        std::vector<SymbolTerm> terms;
        for (const auto& term : spec["terms"]) {
            check_keys(term, ctx + ".terms[]", {"x_coef", "xi_mult"});
            SymbolTerm t;
            t.post_coef = coefficient_samples(term.at("x_coef"), *grid, ctx + ".x_coef");
            t.multiplier = multiplier_samples(term.at("xi_mult"), *grid, ctx + ".xi_mult");
            terms.push_back(std::move(t));
        }
        return TimeSymbolFamily::constant(SeparableSymbol(grid, 1, order, std::move(terms)));
    }
    throw ConfigError(ctx + ": empty symbol spec");
}

const std::set<std::string> kStudyKeys{
    "P",         "ns",      "eps_list", "h",          "eta",    "delta",  "poly_ns",
    "drivers",   "theta",   "t",        "stride",     "kappas", "x_point", "path_index",
    "sign_convention", "trials",  "iterations", "thresholds", "detector", "record_times"};

const std::set<std::string> kSubcommands{"simulate",  "characteristics", "wavefront",
                                         "wong-zakai", "small-noise",     "ldp",
                                         "support",   "malliavin",       "check-conditions",
                                         "selftest"};

}  // namespace

Field parse_field(const json& spec, std::shared_ptr<const Grid1D> grid) {
    check_keys(spec, "field", {"preset", "center", "sigma", "amplitude", "width", "ramp",
                               "harmonic", "phase", "fourier", "random_smooth"});
    if (spec.contains("preset")) {
        const std::string name = spec["preset"].get<std::string>();
        const double L = grid->length;
        if (name == "gaussian_bump")
            return presets::gaussian_bump(grid, num_or(spec, "center", 0.5 * L),
                                          num_or(spec, "sigma", 0.8),
                                          num_or(spec, "amplitude", 1.0));
        if (name == "triangle_kink")
            return presets::triangle_kink(grid, num_or(spec, "center", 0.5 * L),
                                          num_or(spec, "amplitude", 1.0));
        if (name == "step")
            return presets::step(grid, num_or(spec, "center", 0.25 * L),
                                 num_or(spec, "width", 0.25 * L), num_or(spec, "ramp", 0.125 * L),
                                 num_or(spec, "amplitude", 1.0));
        if (name == "sine")
            return presets::sine(grid, int_or(spec, "harmonic", 1), num_or(spec, "amplitude", 1.0),
                                 num_or(spec, "phase", 0.0));
        if (name == "complex_exponential")
            return presets::complex_exponential(grid, int_or(spec, "harmonic", 1));
        throw ConfigError("unknown field preset '" + name + "'");
    }
    if (spec.contains("fourier")) {
        std::vector<std::tuple<int, double, double>> modes;
        for (const auto& m : spec["fourier"])
            modes.emplace_back(m.at(0).get<int>(), m.at(1).get<double>(), m.at(2).get<double>());
        return presets::fourier_field(grid, modes);
    }
    if (spec.contains("random_smooth")) {
        const json& rs = spec["random_smooth"];
        check_keys(rs, "random_smooth", {"seed", "decay", "cutoff"});
        return presets::random_smooth(grid, static_cast<std::uint64_t>(int_or(rs, "seed", 1)),
                                      num_or(rs, "decay", 3.0), int_or(rs, "cutoff", 4));
    }
    throw ConfigError("empty field spec");
}

std::vector<double> parse_real_coefficient(const json& spec, const Grid1D& grid) {
    const auto c = coefficient_samples(spec, grid, "coefficient");
    std::vector<double> out(c.size());
    for (size_t j = 0; j < c.size(); ++j) out[j] = c[j].real();
    return out;
}

CameronMartinPath parse_cm_path(const json& spec, int steps, double horizon) {
    if (spec.is_null()) return CameronMartinPath::zero(steps, horizon);
    check_keys(spec, "h", {"linear", "cosine", "hdot_samples"});
    if (spec.contains("linear"))
        return CameronMartinPath::linear(spec["linear"].get<double>(), steps, horizon);
    if (spec.contains("cosine")) {
        const json& c = spec["cosine"];
        check_keys(c, "h.cosine", {"amplitude", "harmonic"});
        const double amp = num_or(c, "amplitude", 1.0);
        const int harm = int_or(c, "harmonic", 1);
        return CameronMartinPath::from_function(
            [=](double t) { return amp * std::cos(kTwoPi * 0.5 * harm * t / horizon); }, steps,
            horizon);
    }
    if (spec.contains("hdot_samples")) {
        std::vector<double> hdot;
        for (const auto& v : spec["hdot_samples"]) hdot.push_back(v.get<double>());
        if (static_cast<int>(hdot.size()) != steps)
            throw ConfigError("h.hdot_samples: need one sample per solver step");
        return CameronMartinPath::from_hdot(std::move(hdot), horizon);
    }
    throw ConfigError("empty Cameron-Martin path spec");
}

RunSpec load_config(const std::filesystem::path& file, const std::string& subcommand,
                    std::optional<std::uint64_t> seed_override,
                    std::optional<std::string> out_override,
                    std::optional<int> threads_override) {
    if (!kSubcommands.count(subcommand))
        throw ConfigError("unknown subcommand '" + subcommand + "'");
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read config file " + file.string());
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    check_keys(cfg, "config", {"grid", "problem", "solver", "study", "seed", "output_dir",
                               "threads", "emit_plot"});

    RunSpec spec;
    const json grid_cfg = cfg.value("grid", json::object());
    check_keys(grid_cfg, "grid", {"N", "L"});
    const int n = int_or(grid_cfg, "N", 256);
    const double length = num_or(grid_cfg, "L", kTwoPi);
    spec.grid = Grid1D::make(n, length);

    const json prob = cfg.value("problem", json::object());
    check_keys(prob, "problem", {"components", "s", "T", "noise_scale", "a", "b", "u0", "f", "g"});
    if (int_or(prob, "components", 1) != 1)
        throw ConfigError("problem.components: the CLI drives scalar problems (the library "
                          "supports d' = 2 programmatically)");
    spec.problem.sobolev_index = num_or(prob, "s", 2.0);
    spec.problem.horizon = num_or(prob, "T", 1.0);
    spec.problem.noise_scale = num_or(prob, "noise_scale", 1.0);
    spec.problem.a = parse_symbol_family(prob.value("a", json()), spec.grid, "problem.a");
    spec.problem.b = parse_symbol_family(prob.value("b", json()), spec.grid, "problem.b");
    if (!prob.contains("u0")) throw ConfigError("problem.u0 is required");
    spec.problem.u0 = parse_field(prob["u0"], spec.grid);
    if (prob.contains("f") && !prob["f"].is_null()) {
        const Field fconst = parse_field(prob["f"], spec.grid);
        spec.problem.f = [fconst](double) { return fconst; };
    }
    if (prob.contains("g") && !prob["g"].is_null()) {
        const Field gconst = parse_field(prob["g"], spec.grid);
        spec.problem.g = [gconst](double) { return gconst; };
    }

    const json solver = cfg.value("solver", json::object());
    check_keys(solver, "solver", {"M", "scheme", "mollifier_eps", "substeps", "record_every",
                                  "dealias", "projection", "gamma_max", "blowup_factor"});
    spec.solver.steps = int_or(solver, "M", 4096);
    if (spec.solver.steps < 1) throw ConfigError("solver.M must be >= 1");
    const std::string scheme = solver.value("scheme", "heun");
    if (scheme == "heun")
        spec.solver.scheme = EvolveConfig::Scheme::heun;
    else if (scheme == "midpoint")
        spec.solver.scheme = EvolveConfig::Scheme::midpoint;
    else
        throw ConfigError("solver.scheme: expected 'heun' or 'midpoint'");
    if (solver.contains("mollifier_eps") && !solver["mollifier_eps"].is_null())
        spec.solver.mollifier_eps = solver["mollifier_eps"].get<double>();
    spec.solver.substeps_per_segment = int_or(solver, "substeps", 4);
    spec.solver.record_every = int_or(solver, "record_every", 64);
    spec.solver.dealias = solver.value("dealias", false);
    spec.solver.gamma_max = num_or(solver, "gamma_max", 6.0);
    spec.solver.blowup_factor = num_or(solver, "blowup_factor", 1e6);
    if (solver.contains("projection") && !solver["projection"].is_null()) {
        const json& pj = solver["projection"];
        if (pj.is_string()) {
            const std::string mode = pj.get<std::string>();
            if (mode == "auto")
                spec.solver.projection = EvolveConfig::Projection::automatic;
            else if (mode == "off")
                spec.solver.projection = EvolveConfig::Projection::off;
            else
                throw ConfigError("solver.projection: 'auto', 'off', or a mode count");
        } else {
            spec.solver.projection = EvolveConfig::Projection::fixed;
            spec.solver.projection_modes = pj.get<int>();
        }
    }

    if (cfg.contains("study")) check_keys(cfg["study"], "study", kStudyKeys);

    spec.seed = seed_override ? *seed_override
                              : static_cast<std::uint64_t>(cfg.value("seed", 12345));
    std::string out = cfg.value("output_dir", std::string("out"));
    if (const char* env = std::getenv("HSPDE_OUT_DIR")) out = env;
    if (out_override) out = *out_override;
    spec.output_dir = out;
    spec.threads = threads_override ? *threads_override : cfg.value("threads", 1);
    spec.emit_plot = cfg.value("emit_plot", false);

    // Materialize the resolved configuration (no silent defaults).
    json resolved = cfg;
    resolved["grid"] = {{"N", n}, {"L", length}};
    resolved["problem"]["s"] = spec.problem.sobolev_index;
    resolved["problem"]["T"] = spec.problem.horizon;
    resolved["problem"]["noise_scale"] = spec.problem.noise_scale;
    resolved["solver"] = {{"M", spec.solver.steps},
                          {"scheme", scheme},
                          {"mollifier_eps", spec.solver.mollifier_eps
                                                ? json(*spec.solver.mollifier_eps)
                                                : json()},
                          {"substeps", spec.solver.substeps_per_segment},
                          {"record_every", spec.solver.record_every},
                          {"dealias", spec.solver.dealias},
                          {"projection",
                           spec.solver.projection == EvolveConfig::Projection::automatic
                               ? json("auto")
                               : (spec.solver.projection == EvolveConfig::Projection::off
                                      ? json("off")
                                      : json(spec.solver.projection_modes))},
                          {"gamma_max", spec.solver.gamma_max},
                          {"blowup_factor", spec.solver.blowup_factor}};
    resolved["seed"] = spec.seed;
    resolved["output_dir"] = spec.output_dir.string();
    resolved["threads"] = spec.threads;
    resolved["emit_plot"] = spec.emit_plot;
    if (!resolved.contains("study")) resolved["study"] = json::object();
    spec.resolved = std::move(resolved);
    return spec;
}

const json& study_section(const RunSpec& spec) { return spec.resolved.at("study"); }

io::Manifest base_manifest(const RunSpec& spec, const std::string& subcommand) {
    io::Manifest m;
    m.emplace_back("tool", "hspde");
    m.emplace_back("subcommand", subcommand);
    m.emplace_back("config_hash",
                   std::to_string(io::fnv1a64(spec.resolved.dump())));
    m.emplace_back("seed", std::to_string(spec.seed));
    m.emplace_back("grid.N", std::to_string(spec.grid->n));
    m.emplace_back("grid.L", io::fmt(spec.grid->length));
    m.emplace_back("solver.M", std::to_string(spec.solver.steps));
    m.emplace_back("solver.scheme",
                   spec.solver.scheme == EvolveConfig::Scheme::heun ? "heun" : "midpoint");
    m.emplace_back("threads", std::to_string(spec.threads));
    m.emplace_back("config_json", spec.resolved.dump());
    return m;
}

}  // namespace hspde::cli

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "config.hpp"
#include "runners.hpp"

namespace {

using hspde::cli::RunSpec;

struct CommonArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> threads;
};

void write_error_record(const std::optional<std::string>& out_dir, const std::string& kind,
                        const std::string& message, int code) {
    nlohmann::json err{{"error", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << "error: " << message << "\n";
    if (!out_dir) return;
    std::error_code ec;
    std::filesystem::create_directories(*out_dir, ec);
    std::ofstream f(std::filesystem::path(*out_dir) / "error.json", std::ios::binary);
    if (f) f << err.dump(2) << "\n";
}

int dispatch(const std::string& name, const CommonArgs& args) {
    std::optional<std::string> out_for_error = args.out;
    try {
        if (name == "selftest" && args.config.empty()) return hspde::cli::run_selftest();
        const RunSpec spec = hspde::cli::load_config(args.config, name, args.seed, args.out,
                                                     args.threads);
        out_for_error = spec.output_dir.string();
        std::filesystem::create_directories(spec.output_dir);
        if (name == "simulate") return hspde::cli::run_simulate(spec);
        if (name == "characteristics") return hspde::cli::run_characteristics(spec);
        if (name == "wavefront") return hspde::cli::run_wavefront(spec);
        if (name == "wong-zakai") return hspde::cli::run_wong_zakai(spec);
        if (name == "small-noise") return hspde::cli::run_small_noise(spec);
        if (name == "ldp") return hspde::cli::run_ldp(spec);
        if (name == "support") return hspde::cli::run_support(spec);
        if (name == "malliavin") return hspde::cli::run_malliavin(spec);
        if (name == "check-conditions") return hspde::cli::run_check_conditions(spec);
        if (name == "selftest") return hspde::cli::run_selftest();
        std::cerr << "unknown subcommand " << name << "\n";
        return 2;
    } catch (const hspde::ConfigError& e) {
        write_error_record(out_for_error, "config", e.what(), 2);
        return 2;
    } catch (const hspde::BlowupError& e) {
        write_error_record(out_for_error, "blowup", e.what(), 3);
        return 3;
    } catch (const std::exception& e) {
        write_error_record(out_for_error, "internal", e.what(), 1);
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudospectral simulation and verification toolkit for first-order "
                 "hyperbolic stochastic PDE systems on a periodic 1-D domain"};
    app.require_subcommand(1);

    const std::vector<std::string> names{"simulate",    "characteristics", "wavefront",
                                         "wong-zakai",  "small-noise",     "ldp",
                                         "support",     "malliavin",       "check-conditions",
                                         "selftest"};
    CommonArgs args;
    std::string chosen;
    for (const std::string& name : names) {
        CLI::App* sub = app.add_subcommand(name);
        auto* copt = sub->add_option("--config", args.config, "experiment config (JSON)");
        if (name != "selftest") copt->required();
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t v) { args.seed = v; }, "override the config seed");
        sub->add_option_function<std::string>(
            "--out", [&](const std::string& v) { args.out = v; }, "override the output directory");
        sub->add_option_function<int>(
            "--threads", [&](int v) { args.threads = v; }, "worker threads for path-level fanout");
        sub->callback([&, name]() { chosen = name; });
    }
    CLI11_PARSE(app, argc, argv);
    return dispatch(chosen, args);
}

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "hspde/evolve.hpp"
#include "hspde/io.hpp"
#include "hspde/noise.hpp"
#include "hspde/stats.hpp"
#include "json.hpp"

namespace hspde::cli {

using nlohmann::json;

// Fully-resolved experiment description. Every default is materialized here so
// the manifest can echo the exact configuration that ran.
struct RunSpec {
    json resolved;  // config with all defaults filled in
    std::shared_ptr<const Grid1D> grid;
    SpdeProblem problem;
    EvolveConfig solver;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir;
    int threads = 1;
    bool emit_plot = false;
};

// Parses and validates the config file; unknown keys are rejected.
// CLI overrides (seed/out/threads) are applied before resolution.
RunSpec load_config(const std::filesystem::path& file, const std::string& subcommand,
                    std::optional<std::uint64_t> seed_override,
                    std::optional<std::string> out_override, std::optional<int> threads_override);

// Study-parameter accessors (validated against the schema of `subcommand`).
const json& study_section(const RunSpec& spec);

CameronMartinPath parse_cm_path(const json& spec, int steps, double horizon);
Field parse_field(const json& spec, std::shared_ptr<const Grid1D> grid);
std::vector<double> parse_real_coefficient(const json& spec, const Grid1D& grid);

io::Manifest base_manifest(const RunSpec& spec, const std::string& subcommand);

}  // namespace hspde::cli

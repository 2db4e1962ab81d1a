#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hspde/characteristics.hpp"
#include "hspde/evolve.hpp"
#include "hspde/grid.hpp"
#include "hspde/microlocal.hpp"
#include "hspde/noise.hpp"

namespace hspde {
namespace io {

// All numeric output goes through one round-trip-exact, locale-free format so
// artifacts are bitwise reproducible.
std::string fmt(double v);

std::uint64_t fnv1a64(const std::string& data);
std::uint64_t hash_file(const std::filesystem::path& p);

void write_field_csv(const std::filesystem::path& p, const Field& u);
void write_trajectory_csv(const std::filesystem::path& p, const Trajectory& traj);
void write_energy_csv(const std::filesystem::path& p, const Trajectory& traj);
void write_path_csv(const std::filesystem::path& p, const BrownianPath& path);
void write_flow_csv(const std::filesystem::path& p, const CharFlow& flow);
void write_wavefront_csv(const std::filesystem::path& p, const BicharFlow& flow,
                         const std::vector<std::string>& labels);
void write_detections_csv(const std::filesystem::path& p,
                          const std::vector<std::pair<double, std::vector<Detection>>>& per_time);

// Generic numeric table.
void write_table_csv(const std::filesystem::path& p, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

// Plain-text key-value manifest, UTF-8, order-preserving.
using Manifest = std::vector<std::pair<std::string, std::string>>;
void write_manifest(const std::filesystem::path& p, const Manifest& m);

}  // namespace io
}  // namespace hspde

#include "hspde/io.hpp"

#include <cstdio>
#include <fstream>

namespace hspde {
namespace io {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t hash_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("hash_file: cannot open " + p.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return fnv1a64(data);
}

namespace {
std::ofstream open_out(const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);  // binary: fixed '\n' endings
    if (!out) throw Error("cannot open for writing: " + p.string());
    return out;
}
}  // namespace

void write_field_csv(const std::filesystem::path& p, const Field& u) {
    auto out = open_out(p);
    out << "component,node_index,re,im\n";
    for (int c = 0; c < u.components(); ++c)
        for (int j = 0; j < u.size(); ++j)
            out << c << ',' << j << ',' << fmt(u.at(c, j).real()) << ','
                << fmt(u.at(c, j).imag()) << '\n';
}

void write_trajectory_csv(const std::filesystem::path& p, const Trajectory& traj) {
    auto out = open_out(p);
    out << "t,node,component,re,im\n";
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const Field& u = traj.states[i];
        for (int j = 0; j < u.size(); ++j)
            for (int c = 0; c < u.components(); ++c)
                out << fmt(traj.times[i]) << ',' << j << ',' << c << ','
                    << fmt(u.at(c, j).real()) << ',' << fmt(u.at(c, j).imag()) << '\n';
    }
}

void write_energy_csv(const std::filesystem::path& p, const Trajectory& traj) {
    auto out = open_out(p);
    out << "t,norm_s,quad_A,quad_L\n";
    for (size_t i = 0; i < traj.energy_t.size(); ++i)
        out << fmt(traj.energy_t[i]) << ',' << fmt(traj.energy_norm[i]) << ','
            << fmt(traj.energy_quad_a[i]) << ',' << fmt(traj.energy_quad_l[i]) << '\n';
}

void write_path_csv(const std::filesystem::path& p, const BrownianPath& path) {
    auto out = open_out(p);
    out << "t,w\n";
    for (int i = 0; i <= path.steps; ++i)
        out << fmt(path.time(i)) << ',' << fmt(path.values[static_cast<size_t>(i)]) << '\n';
}

void write_flow_csv(const std::filesystem::path& p, const CharFlow& flow) {
    auto out = open_out(p);
    out << "t,x0,phi\n";
    for (size_t i = 0; i < flow.times.size(); ++i)
        for (size_t j = 0; j < flow.positions[i].size(); ++j)
            out << fmt(flow.times[i]) << ',' << fmt(flow.grid->nodes[j]) << ','
                << fmt(flow.positions[i][j]) << '\n';
}

void write_wavefront_csv(const std::filesystem::path& p, const BicharFlow& flow,
                         const std::vector<std::string>& labels) {
    auto out = open_out(p);
    out << "t,label,x,xi\n";
    for (size_t i = 0; i < flow.times.size(); ++i)
        for (size_t k = 0; k < flow.x.size(); ++k)
            out << fmt(flow.times[i]) << ',' << (k < labels.size() ? labels[k] : std::to_string(k))
                << ',' << fmt(flow.wrapped_x(k, i)) << ',' << fmt(flow.xi[k][i]) << '\n';
}

void write_detections_csv(const std::filesystem::path& p,
                          const std::vector<std::pair<double, std::vector<Detection>>>& per_time) {
    auto out = open_out(p);
    out << "t,x_detected,score\n";
    for (const auto& [t, dets] : per_time)
        for (const Detection& d : dets)
            out << fmt(t) << ',' << fmt(d.x) << ',' << fmt(d.score) << '\n';
}

void write_table_csv(const std::filesystem::path& p, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
    auto out = open_out(p);
    for (size_t i = 0; i < header.size(); ++i) out << header[i] << (i + 1 < header.size() ? ',' : '\n');
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out << fmt(row[i]) << (i + 1 < row.size() ? ',' : '\n');
    }
}

void write_manifest(const std::filesystem::path& p, const Manifest& m) {
    auto out = open_out(p);
    for (const auto& [k, v] : m) out << k << " = " << v << '\n';
}

}  // namespace io
}  // namespace hspde

#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lifelongpr/domain_data.hpp"

namespace lifelongpr {

// Submap binary layout: "LPRS" magic, u16 version, u32 N_x, u32 domain_id,
// pose as 2 x float64, then N_x*3 float32 coordinates, all little-endian.
inline constexpr char kSubmapMagic[4] = {'L', 'P', 'R', 'S'};
inline constexpr std::uint16_t kSubmapVersion = 1;

namespace detail {

template <typename T>
void put_le(std::ostream& os, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    // x86/little-endian host assumed; raw write keeps files bit-stable.
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("submap read: truncated stream");
    return v;
}

} // namespace detail

inline void write_submap(std::ostream& os, const Submap& sm) {
    os.write(kSubmapMagic, 4);
    detail::put_le(os, kSubmapVersion);
    detail::put_le(os, static_cast<std::uint32_t>(sm.points.rows()));
    detail::put_le(os, static_cast<std::uint32_t>(sm.domain_id));
    detail::put_le(os, sm.pose.x());
    detail::put_le(os, sm.pose.y());
    for (Eigen::Index r = 0; r < sm.points.rows(); ++r)
        for (int c = 0; c < 3; ++c) detail::put_le(os, sm.points(r, c));
    if (!os) throw std::runtime_error("submap write failed");
}

inline Submap read_submap(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kSubmapMagic, 4) != 0)
        throw std::runtime_error("submap read: bad magic");
    const auto version = detail::get_le<std::uint16_t>(is);
    if (version != kSubmapVersion)
        throw std::runtime_error("submap read: unsupported version " + std::to_string(version));
    const auto nx = detail::get_le<std::uint32_t>(is);
    const auto domain_id = detail::get_le<std::uint32_t>(is);
    Submap sm;
    sm.domain_id = static_cast<int>(domain_id);
    sm.pose.x() = detail::get_le<double>(is);
    sm.pose.y() = detail::get_le<double>(is);
    sm.points.resize(static_cast<Eigen::Index>(nx), 3);
    for (std::uint32_t r = 0; r < nx; ++r)
        for (int c = 0; c < 3; ++c) sm.points(r, c) = detail::get_le<float>(is);
    return sm;
}

namespace detail {

inline nlohmann::json profile_to_json(const GapProfile& p) {
    return {
        {"name", p.name},
        {"world_seed", p.world_seed},
        {"world_extent", p.world_extent},
        {"landmark_density", p.landmark_density},
        {"noise_sigma", p.noise_sigma},
        {"dropout", p.dropout},
        {"sensing_radius", p.sensing_radius},
        {"points_per_submap", p.points_per_submap},
        {"n_train", p.n_train},
        {"n_database", p.n_database},
        {"n_query", p.n_query},
        {"positive_radius", p.positive_radius},
        {"negative_radius", p.negative_radius},
        {"eval_radius", p.eval_radius},
    };
}

inline GapProfile profile_from_json(const nlohmann::json& j) {
    GapProfile p;
    p.name = j.at("name").get<std::string>();
    p.world_seed = j.at("world_seed").get<std::uint64_t>();
    p.world_extent = j.at("world_extent").get<double>();
    p.landmark_density = j.at("landmark_density").get<double>();
    p.noise_sigma = j.at("noise_sigma").get<double>();
    p.dropout = j.at("dropout").get<double>();
    p.sensing_radius = j.at("sensing_radius").get<double>();
    p.points_per_submap = j.at("points_per_submap").get<int>();
    p.n_train = j.at("n_train").get<int>();
    p.n_database = j.at("n_database").get<int>();
    p.n_query = j.at("n_query").get<int>();
    p.positive_radius = j.at("positive_radius").get<double>();
    p.negative_radius = j.at("negative_radius").get<double>();
    p.eval_radius = j.at("eval_radius").get<double>();
    return p;
}

inline std::vector<std::int64_t> split_ids(const std::vector<Submap>& split) {
    std::vector<std::int64_t> ids;
    ids.reserve(split.size());
    for (const auto& sm : split) ids.push_back(sm.id);
    return ids;
}

} // namespace detail

/// Writes a dataset directory: one sequence manifest plus one binary file per
/// submap under submaps/.
inline void write_sequence_dir(const std::filesystem::path& dir,
                               const std::vector<DomainDataset>& domains,
                               std::uint64_t seed) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "submaps");

    nlohmann::json manifest;
    manifest["format"] = "lifelongpr-sequence";
    manifest["version"] = 1;
    manifest["seed"] = seed;
    manifest["domains"] = nlohmann::json::array();

    const auto dump_split = [&](const std::vector<Submap>& split) {
        for (const auto& sm : split) {
            std::ofstream os(dir / "submaps" / (std::to_string(sm.id) + ".lprs"),
                             std::ios::binary);
            if (!os) throw std::runtime_error("cannot create submap file");
            write_submap(os, sm);
        }
    };

    for (const auto& d : domains) {
        dump_split(d.train);
        dump_split(d.database);
        dump_split(d.query);
        nlohmann::json jd;
        jd["domain_id"] = d.domain_id;
        jd["name"] = d.name;
        jd["positive_radius"] = d.positive_radius;
        jd["negative_radius"] = d.negative_radius;
        jd["eval_radius"] = d.eval_radius;
        jd["profile"] = detail::profile_to_json(d.profile);
        jd["train"] = detail::split_ids(d.train);
        jd["database"] = detail::split_ids(d.database);
        jd["query"] = detail::split_ids(d.query);
        manifest["domains"].push_back(jd);
    }

    std::ofstream os(dir / "sequence.json");
    if (!os) throw std::runtime_error("cannot create sequence manifest");
    os << manifest.dump(2) << "\n";
}

struct LoadedSequence {
    std::uint64_t seed = 0;
    std::vector<DomainDataset> domains;
};

inline LoadedSequence load_sequence_dir(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::ifstream is(dir / "sequence.json");
    if (!is) throw std::runtime_error("missing sequence manifest in " + dir.string());
    nlohmann::json manifest = nlohmann::json::parse(is);
    if (manifest.at("format").get<std::string>() != "lifelongpr-sequence")
        throw std::runtime_error("not a sequence manifest");

    const auto load_one = [&](std::int64_t id) {
        std::ifstream f(dir / "submaps" / (std::to_string(id) + ".lprs"), std::ios::binary);
        if (!f) throw std::runtime_error("missing submap file " + std::to_string(id));
        Submap sm = read_submap(f);
        sm.id = id;
        return sm;
    };

    LoadedSequence seq;
    seq.seed = manifest.at("seed").get<std::uint64_t>();
    for (const auto& jd : manifest.at("domains")) {
        DomainDataset d;
        d.domain_id = jd.at("domain_id").get<int>();
        d.name = jd.at("name").get<std::string>();
        d.positive_radius = jd.at("positive_radius").get<double>();
        d.negative_radius = jd.at("negative_radius").get<double>();
        d.eval_radius = jd.at("eval_radius").get<double>();
        d.profile = detail::profile_from_json(jd.at("profile"));
        for (auto id : jd.at("train").get<std::vector<std::int64_t>>()) d.train.push_back(load_one(id));
        for (auto id : jd.at("database").get<std::vector<std::int64_t>>()) d.database.push_back(load_one(id));
        for (auto id : jd.at("query").get<std::vector<std::int64_t>>()) d.query.push_back(load_one(id));
        seq.domains.push_back(std::move(d));
    }
    return seq;
}

} // namespace lifelongpr

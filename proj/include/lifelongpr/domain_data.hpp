#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lifelongpr/rng.hpp"

namespace lifelongpr {

using PointMatrix = Eigen::Matrix<float, Eigen::Dynamic, 3>;

/// One point-cloud sample: local point set, planar geo-pose, identity.
/// Points are centroid-centered in a sensor-local frame.
struct Submap {
    std::int64_t id = 0;
    int domain_id = 0;
    Eigen::Vector2d pose = Eigen::Vector2d::Zero();
    PointMatrix points;
};

/// Euclidean distance between two submap geo-poses (planar).
inline double pairwise_pose_distance(const Submap& a, const Submap& b) {
    return (a.pose - b.pose).norm();
}

/// Sensor/world model parameters for one synthetic domain.
struct GapProfile {
    std::string name = "domain";
    // 0 means "derive from the sequence seed and domain index"; setting the
    // same nonzero value in two profiles makes them share landmarks and
    // trajectory (co-located stations across domains).
    std::uint64_t world_seed = 0;
    double world_extent = 100.0;     // side length of the square world
    double landmark_density = 0.012; // landmarks per unit^2
    double noise_sigma = 0.02;       // per-coordinate Gaussian noise
    double dropout = 0.0;            // per-landmark visibility dropout in [0,1)
    double sensing_radius = 28.0;
    int points_per_submap = 256;     // N_x
    int n_train = 400;
    int n_database = 150;
    int n_query = 75;
    double positive_radius = 6.0;
    double negative_radius = 18.0;
    double eval_radius = 6.0;
};

/// Ordered multi-domain generation request; order is the learning order.
struct SequenceSpec {
    std::uint64_t seed = 1;
    std::vector<GapProfile> domains;
};

struct DomainDataset {
    int domain_id = 0;
    std::string name;
    std::vector<Submap> train;
    std::vector<Submap> database;
    std::vector<Submap> query;
    double positive_radius = 6.0;
    double negative_radius = 18.0;
    double eval_radius = 6.0;
    GapProfile profile; // echo of the generating parameters
};

namespace detail {

struct Landmark {
    double x, y, radius, height;
    double u0, u1; // per-landmark lattice phases
};

struct World {
    std::vector<Landmark> landmarks;
    double loop_radius = 0.0;
    double wobble_amp[3] = {0, 0, 0};
    double wobble_phase[3] = {0, 0, 0};
};

inline World build_world(std::uint64_t world_seed, const GapProfile& p) {
    World w;
    auto rng = make_rng(world_seed, {0x57u});
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double half = p.world_extent * 0.5;
    const int count = std::max(3, static_cast<int>(std::lround(
        p.landmark_density * p.world_extent * p.world_extent)));
    w.landmarks.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        Landmark lm;
        lm.x = (unit(rng) * 2.0 - 1.0) * half;
        lm.y = (unit(rng) * 2.0 - 1.0) * half;
        lm.radius = 0.5 + 1.5 * unit(rng);
        lm.height = 3.0 + 9.0 * unit(rng);
        lm.u0 = unit(rng);
        lm.u1 = unit(rng);
        w.landmarks.push_back(lm);
    }
    w.loop_radius = 0.33 * p.world_extent;
    for (int m = 0; m < 3; ++m) {
        w.wobble_amp[m] = (unit(rng) * 2.0 - 1.0) * 0.08;
        w.wobble_phase[m] = unit(rng) * 2.0 * M_PI;
    }
    return w;
}

inline Eigen::Vector2d loop_pose(const World& w, double theta) {
    double r = w.loop_radius;
    for (int m = 0; m < 3; ++m)
        r += w.loop_radius * w.wobble_amp[m] * std::cos((m + 2) * theta + w.wobble_phase[m]);
    return {r * std::cos(theta), r * std::sin(theta)};
}

// Points are placed on a fixed golden-ratio lattice per landmark so that a
// station revisited with zero noise and zero dropout yields the same set.
inline PointMatrix sample_submap_points(const World& w, const Eigen::Vector2d& pose,
                                        const GapProfile& p, std::mt19937_64& sensor_rng) {
    std::vector<int> visible;
    for (int j = 0; j < static_cast<int>(w.landmarks.size()); ++j) {
        const auto& lm = w.landmarks[j];
        const double dx = lm.x - pose.x(), dy = lm.y - pose.y();
        if (std::hypot(dx, dy) <= p.sensing_radius) visible.push_back(j);
    }
    if (visible.empty()) return PointMatrix();

    std::sort(visible.begin(), visible.end(), [&](int a, int b) {
        const auto da = std::hypot(w.landmarks[a].x - pose.x(), w.landmarks[a].y - pose.y());
        const auto db = std::hypot(w.landmarks[b].x - pose.x(), w.landmarks[b].y - pose.y());
        return da != db ? da < db : a < b;
    });

    std::vector<int> survivors;
    if (p.dropout > 0.0) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int j : visible)
            if (unit(sensor_rng) >= p.dropout) survivors.push_back(j);
        if (survivors.empty()) survivors.push_back(visible.front());
    } else {
        survivors = visible;
    }

    const int nx = p.points_per_submap;
    Eigen::Matrix<double, Eigen::Dynamic, 3> pts(nx, 3);
    std::vector<int> occurrence(survivors.size(), 0);
    constexpr double kGoldenA = 0.6180339887498949;
    constexpr double kGoldenB = 0.3819660112501051;
    for (int s = 0; s < nx; ++s) {
        const size_t slot = static_cast<size_t>(s) % survivors.size();
        const Landmark& lm = w.landmarks[static_cast<size_t>(survivors[slot])];
        const int k = occurrence[slot]++;
        const double phi = 2.0 * M_PI * std::fmod(lm.u0 + k * kGoldenA, 1.0);
        const double z = lm.height * std::fmod(lm.u1 + k * kGoldenB, 1.0);
        pts(s, 0) = lm.x + lm.radius * std::cos(phi) - pose.x();
        pts(s, 1) = lm.y + lm.radius * std::sin(phi) - pose.y();
        pts(s, 2) = z;
    }

    if (p.noise_sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, p.noise_sigma);
        for (int s = 0; s < nx; ++s)
            for (int c = 0; c < 3; ++c) pts(s, c) += noise(sensor_rng);
    }

    const Eigen::RowVector3d centroid = pts.colwise().mean();
    pts.rowwise() -= centroid;
    return pts.cast<float>();
}

} // namespace detail

/// Generates one synthetic domain: a landmark world, a loop trajectory, and
/// three disjoint passes (train / database / query). Queries are offset half
/// a station from the database pass so every query has an in-radius match.
inline DomainDataset generate_domain(const GapProfile& profile, int domain_id,
                                     std::uint64_t seed, std::int64_t id_base) {
    if (profile.world_extent <= 0.0) throw std::invalid_argument("generate_domain: world_extent must be positive");
    if (profile.landmark_density <= 0.0) throw std::invalid_argument("generate_domain: landmark_density must be positive");
    if (profile.dropout < 0.0 || profile.dropout >= 1.0) throw std::invalid_argument("generate_domain: dropout must be in [0,1)");
    if (profile.points_per_submap < 1) throw std::invalid_argument("generate_domain: points_per_submap must be >= 1");
    if (!(profile.positive_radius < profile.negative_radius))
        throw std::invalid_argument("generate_domain: positive_radius must be < negative_radius");

    constexpr int kMaxRetries = 8;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        const std::uint64_t world_seed = profile.world_seed != 0
            ? profile.world_seed
            : derive_seed(seed, {0x77u, static_cast<std::uint64_t>(domain_id), static_cast<std::uint64_t>(attempt)});
        const detail::World world = detail::build_world(world_seed, profile);

        DomainDataset ds;
        ds.domain_id = domain_id;
        ds.name = profile.name;
        ds.positive_radius = profile.positive_radius;
        ds.negative_radius = profile.negative_radius;
        ds.eval_radius = profile.eval_radius;
        ds.profile = profile;

        std::int64_t next_id = id_base;
        bool ok = true;
        const auto make_pass = [&](int pass_tag, int count, double phase_frac,
                                   std::vector<Submap>& out) {
            out.clear();
            out.reserve(static_cast<size_t>(count));
            for (int i = 0; i < count && ok; ++i) {
                const double theta = 2.0 * M_PI * ((i + phase_frac) / count);
                Submap sm;
                sm.id = next_id++;
                sm.domain_id = domain_id;
                sm.pose = detail::loop_pose(world, theta);
                auto rng = make_rng(seed, {0x5eu, static_cast<std::uint64_t>(domain_id),
                                           static_cast<std::uint64_t>(pass_tag),
                                           static_cast<std::uint64_t>(i),
                                           static_cast<std::uint64_t>(attempt)});
                sm.points = detail::sample_submap_points(world, sm.pose, profile, rng);
                if (sm.points.rows() != profile.points_per_submap) { ok = false; break; }
                out.push_back(std::move(sm));
            }
        };

        make_pass(1, profile.n_train, 0.0, ds.train);
        make_pass(2, profile.n_database, 0.0, ds.database);
        make_pass(3, profile.n_query, 0.5, ds.query);
        if (!ok) {
            if (profile.world_seed != 0) break; // fixed world cannot be re-rolled
            continue;
        }

        // Self-consistency: every query must have a database match in radius.
        bool covered = true;
        for (const auto& q : ds.query) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& d : ds.database)
                best = std::min(best, pairwise_pose_distance(q, d));
            if (best > profile.eval_radius) { covered = false; break; }
        }
        if (covered) return ds;
        if (profile.world_seed != 0) break;
    }
    throw std::runtime_error("generate_domain: could not satisfy query coverage for domain '" +
                             profile.name + "'");
}

/// Generates all domains of a sequence in learning order. Ids are unique
/// across the whole sequence.
inline std::vector<DomainDataset> generate_sequence(const SequenceSpec& spec) {
    if (spec.domains.empty()) throw std::invalid_argument("generate_sequence: no domains");
    std::vector<DomainDataset> out;
    out.reserve(spec.domains.size());
    for (size_t t = 0; t < spec.domains.size(); ++t) {
        const std::int64_t id_base = static_cast<std::int64_t>(t) * 1000000;
        out.push_back(generate_domain(spec.domains[t], static_cast<int>(t), spec.seed, id_base));
    }
    return out;
}

} // namespace lifelongpr

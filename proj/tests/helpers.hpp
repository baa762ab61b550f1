#pragma once

// Shared fixtures and reference implementations ("oracles") for the test
// binaries. Oracles are deliberately naive: they recompute everything from
// first principles so they can disagree with the optimized library code.

#include "gazewalk/record.hpp"
#include "gazewalk/types.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace testutil {

using gazewalk::MatX;
using gazewalk::Scalar;
using gazewalk::Vec2;
using gazewalk::VecX;

// ---------------------------------------------------------------------------
// Record builders

// One sample per code value, walking east dx meters per second. Metadata is
// filled so the record passes validation against the default area.
inline gazewalk::TrajectoryRecord make_record(std::string id, const std::vector<int>& codes,
                                              Scalar dx = 1.0, Vec2 start = Vec2(1.0, 15.0)) {
    gazewalk::TrajectoryRecord r;
    r.id = std::move(id);
    r.gender = gazewalk::Gender::Female;
    r.age_group = gazewalk::AgeGroup::YoungAdult;
    r.companions = 0;
    r.activities = {gazewalk::Activity::Checking};
    r.entry_gate = "gate_w";
    r.exit_gate = "gate_e";
    for (std::size_t i = 0; i < codes.size(); ++i) {
        gazewalk::GazeSample s;
        s.t = static_cast<int>(i);
        s.position = start + Vec2(dx * static_cast<Scalar>(i), 0.0);
        s.code = static_cast<gazewalk::GazeCode>(codes[i]);
        r.samples.push_back(s);
    }
    return r;
}

// Same, with fully explicit positions.
inline gazewalk::TrajectoryRecord make_record_at(std::string id, const std::vector<int>& codes,
                                                 const std::vector<Vec2>& positions) {
    gazewalk::TrajectoryRecord r = make_record(std::move(id), codes);
    for (std::size_t i = 0; i < positions.size(); ++i) r.samples[i].position = positions[i];
    return r;
}

// ---------------------------------------------------------------------------
// Brute-force centroid-linkage agglomeration

struct OracleMerge {
    int left = 0;
    int right = 0;
    int merged = 0;
    Scalar distance = 0.0;
};

// Recomputes every pairwise centroid distance at every step. Ties break on
// the smaller (left, right) creation-index pair, matching the library.
inline std::vector<OracleMerge> oracle_agglomerate(const MatX& points) {
    struct Node {
        VecX centroid;
        long count = 0;
    };
    std::vector<Node> nodes;
    std::vector<int> active;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        nodes.push_back({points.row(i).transpose(), 1});
        active.push_back(static_cast<int>(i));
    }
    std::vector<OracleMerge> merges;
    while (active.size() > 1) {
        int best_a = -1, best_b = -1;
        Scalar best_d = std::numeric_limits<Scalar>::infinity();
        for (std::size_t i = 0; i < active.size(); ++i) {
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                int a = std::min(active[i], active[j]);
                int b = std::max(active[i], active[j]);
                const Scalar d = (nodes[static_cast<std::size_t>(a)].centroid -
                                  nodes[static_cast<std::size_t>(b)].centroid)
                                     .norm();
                const bool better =
                    d < best_d ||
                    (d == best_d && (a < best_a || (a == best_a && b < best_b)));
                if (better) {
                    best_d = d;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        const Node& na = nodes[static_cast<std::size_t>(best_a)];
        const Node& nb = nodes[static_cast<std::size_t>(best_b)];
        Node merged;
        merged.count = na.count + nb.count;
        merged.centroid = (static_cast<Scalar>(na.count) * na.centroid +
                           static_cast<Scalar>(nb.count) * nb.centroid) /
                          static_cast<Scalar>(merged.count);
        const int id = static_cast<int>(nodes.size());
        nodes.push_back(merged);
        merges.push_back({best_a, best_b, id, best_d});
        active.erase(std::remove_if(active.begin(), active.end(),
                                    [&](int v) { return v == best_a || v == best_b; }),
                     active.end());
        active.push_back(id);
    }
    return merges;
}

// Partition after n - k merges; clusters renumbered by smallest member leaf.
inline std::vector<int> oracle_cut(int n_leaves, const std::vector<OracleMerge>& merges, int k) {
    std::vector<int> parent(static_cast<std::size_t>(n_leaves) + merges.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int v) {
        while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)];
        return v;
    };
    for (int m = 0; m < n_leaves - k; ++m) {
        const OracleMerge& mg = merges[static_cast<std::size_t>(m)];
        parent[static_cast<std::size_t>(find(mg.left))] = mg.merged;
        parent[static_cast<std::size_t>(find(mg.right))] = mg.merged;
    }
    std::vector<int> roots(static_cast<std::size_t>(n_leaves));
    for (int i = 0; i < n_leaves; ++i) roots[static_cast<std::size_t>(i)] = find(i);
    // first-seen order over leaves = numbering by smallest contained leaf
    std::map<int, int> ordered;
    int next = 0;
    for (int i = 0; i < n_leaves; ++i) {
        const int r = roots[static_cast<std::size_t>(i)];
        if (ordered.find(r) == ordered.end()) ordered[r] = next++;
    }
    std::vector<int> out(static_cast<std::size_t>(n_leaves));
    for (int i = 0; i < n_leaves; ++i) out[static_cast<std::size_t>(i)] = ordered[roots[static_cast<std::size_t>(i)]];
    return out;
}

// ---------------------------------------------------------------------------
// Direct O(n^2) silhouette

inline Scalar oracle_silhouette(const MatX& points, const std::vector<int>& assignments) {
    const auto n = static_cast<std::size_t>(points.rows());
    const int k = *std::max_element(assignments.begin(), assignments.end()) + 1;
    Scalar total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Scalar> sum(static_cast<std::size_t>(k), 0.0);
        std::vector<long> count(static_cast<std::size_t>(k), 0);
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const Scalar d = (points.row(static_cast<Eigen::Index>(i)) -
                              points.row(static_cast<Eigen::Index>(j)))
                                 .norm();
            sum[static_cast<std::size_t>(assignments[j])] += d;
            ++count[static_cast<std::size_t>(assignments[j])];
        }
        const int own = assignments[i];
        if (count[static_cast<std::size_t>(own)] == 0) continue;  // singleton scores 0
        const Scalar a = sum[static_cast<std::size_t>(own)] /
                         static_cast<Scalar>(count[static_cast<std::size_t>(own)]);
        Scalar b = std::numeric_limits<Scalar>::infinity();
        for (int c = 0; c < k; ++c) {
            if (c == own || count[static_cast<std::size_t>(c)] == 0) continue;
            b = std::min(b, sum[static_cast<std::size_t>(c)] /
                                static_cast<Scalar>(count[static_cast<std::size_t>(c)]));
        }
        if (std::isinf(b)) continue;
        total += (b - a) / std::max(a, b);
    }
    return total / static_cast<Scalar>(n);
}

// ---------------------------------------------------------------------------
// Numeric oracles

// Student t CDF by Simpson integration of the density; good to ~1e-10.
inline Scalar simpson_t_cdf(Scalar t, Scalar df) {
    const Scalar log_norm = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
                            0.5 * std::log(df * M_PI);
    auto density = [&](Scalar x) {
        return std::exp(log_norm - (df + 1.0) / 2.0 * std::log1p(x * x / df));
    };
    const Scalar hi = std::abs(t);
    const int steps = 20000;  // even
    const Scalar h = hi / steps;
    Scalar sum = density(0.0) + density(hi);
    for (int i = 1; i < steps; ++i) sum += density(h * i) * (i % 2 == 1 ? 4.0 : 2.0);
    const Scalar integral = sum * h / 3.0;
    return t >= 0.0 ? 0.5 + integral : 0.5 - integral;
}

// Two-sided Monte-Carlo permutation p-value for the difference in means.
inline Scalar permutation_p(std::span<const Scalar> a, std::span<const Scalar> b,
                            std::uint64_t seed, int iterations) {
    std::vector<Scalar> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::size_t na = a.size();
    auto mean_diff = [&](const std::vector<Scalar>& v) {
        Scalar sa = 0.0, sb = 0.0;
        for (std::size_t i = 0; i < na; ++i) sa += v[i];
        for (std::size_t i = na; i < v.size(); ++i) sb += v[i];
        return sa / static_cast<Scalar>(na) -
               sb / static_cast<Scalar>(v.size() - na);
    };
    const Scalar observed = std::abs(mean_diff(pooled));
    std::mt19937_64 gen(seed);
    long hits = 0;
    std::vector<Scalar> work = pooled;
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t i = work.size() - 1; i > 0; --i) {
            const std::size_t j = gen() % (i + 1);
            std::swap(work[i], work[j]);
        }
        if (std::abs(mean_diff(work)) >= observed - 1e-12) ++hits;
    }
    return static_cast<Scalar>(hits + 1) / static_cast<Scalar>(iterations + 1);
}

// ---------------------------------------------------------------------------
// Filesystem helpers

inline std::string slurp_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Self-deleting unique temp directory.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path = std::filesystem::temp_directory_path() /
               (tag + "_" + std::to_string(stamp) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

}  // namespace testutil

#include "gazewalk/cluster.hpp"

#include "gazewalk/stats.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace gazewalk {

namespace {

// Stage-1 walk keeps adding clusters while the criterion improvement stays
// above this fraction of the first improvement.
constexpr Scalar kCoarseRatio = 0.04;
// Stage-2 requires the best merge-distance ratio to beat the runner-up by
// this factor before trusting the smaller solution.
constexpr Scalar kRefineRatio = 1.15;

}  // namespace

std::string to_string(Criterion criterion) {
    return criterion == Criterion::Aic ? "aic" : "bic";
}

std::optional<Criterion> parse_criterion(std::string_view s) {
    if (s == "aic") return Criterion::Aic;
    if (s == "bic") return Criterion::Bic;
    return std::nullopt;
}

const std::vector<std::string> kClusterVariables = {
    "pct_screen_walk", "pct_wander_walk", "pct_screen_stat",  "pct_wander_stat",
    "walking_speed",   "walk_seconds",    "stat_seconds",     "n_stops",
    "total_stop_duration"};

std::optional<Scalar> feature_value(const FeatureVector& f, std::string_view name) {
    if (name == "pct_screen_walk") return f.pct_screen_walk;
    if (name == "pct_wander_walk") return f.pct_wander_walk;
    if (name == "pct_screen_stat") return f.pct_screen_stat;
    if (name == "pct_wander_stat") return f.pct_wander_stat;
    if (name == "walking_speed") return f.walking_speed;
    if (name == "walk_seconds") return static_cast<Scalar>(f.walk_seconds);
    if (name == "stat_seconds") return static_cast<Scalar>(f.stat_seconds);
    if (name == "n_stops") return static_cast<Scalar>(f.n_stops);
    if (name == "total_stop_duration") return static_cast<Scalar>(f.total_stop_duration);
    return std::nullopt;
}

PreClusterResult pre_cluster(const MatX& points, Scalar threshold) {
    if (threshold < 0.0) throw Error("bad_input", "pre-cluster threshold must be >= 0");
    PreClusterResult result;
    const auto n = points.rows();
    result.membership.resize(static_cast<std::size_t>(n), -1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const VecX x = points.row(i).transpose();
        int best = -1;
        Scalar best_dist = std::numeric_limits<Scalar>::infinity();
        for (std::size_t j = 0; j < result.sub_clusters.size(); ++j) {
            const Scalar dist = (result.sub_clusters[j].center() - x).norm();
            if (dist < best_dist) {
                best_dist = dist;
                best = static_cast<int>(j);
            }
        }
        if (best >= 0 && best_dist <= threshold) {
            SubCluster& sc = result.sub_clusters[static_cast<std::size_t>(best)];
            sc.count += 1;
            sc.linear_sum += x;
            sc.square_sum += x.cwiseProduct(x);
            result.membership[static_cast<std::size_t>(i)] = best;
        } else {
            SubCluster sc;
            sc.count = 1;
            sc.linear_sum = x;
            sc.square_sum = x.cwiseProduct(x);
            result.sub_clusters.push_back(std::move(sc));
            result.membership[static_cast<std::size_t>(i)] =
                static_cast<int>(result.sub_clusters.size()) - 1;
        }
    }
    return result;
}

Dendrogram agglomerate(const std::vector<SubCluster>& sub_clusters) {
    if (sub_clusters.empty()) throw Error("bad_input", "agglomerate needs >= 1 sub-cluster");
    const int m = static_cast<int>(sub_clusters.size());
    Dendrogram dend;
    dend.n_leaves = m;

    std::vector<SubCluster> nodes(sub_clusters);
    nodes.reserve(static_cast<std::size_t>(2 * m - 1));
    std::vector<bool> active(static_cast<std::size_t>(m), true);
    std::vector<int> live;
    for (int i = 0; i < m; ++i) live.push_back(i);

    for (int step = 0; step + 1 < m; ++step) {
        int best_i = -1, best_j = -1;
        Scalar best_dist = std::numeric_limits<Scalar>::infinity();
        // Scan in ascending (i, j) node order so equal distances keep the
        // lexicographically first pair.
        for (std::size_t a = 0; a + 1 < live.size(); ++a) {
            const VecX ca = nodes[static_cast<std::size_t>(live[a])].center();
            for (std::size_t b = a + 1; b < live.size(); ++b) {
                const Scalar dist =
                    (ca - nodes[static_cast<std::size_t>(live[b])].center()).norm();
                if (dist < best_dist) {
                    best_dist = dist;
                    best_i = live[a];
                    best_j = live[b];
                }
            }
        }
        SubCluster merged;
        merged.count = nodes[static_cast<std::size_t>(best_i)].count +
                       nodes[static_cast<std::size_t>(best_j)].count;
        merged.linear_sum = nodes[static_cast<std::size_t>(best_i)].linear_sum +
                            nodes[static_cast<std::size_t>(best_j)].linear_sum;
        merged.square_sum = nodes[static_cast<std::size_t>(best_i)].square_sum +
                            nodes[static_cast<std::size_t>(best_j)].square_sum;
        const int merged_idx = static_cast<int>(nodes.size());
        nodes.push_back(std::move(merged));
        dend.merges.push_back({best_i, best_j, merged_idx, best_dist});
        live.erase(std::remove_if(live.begin(), live.end(),
                                  [&](int v) { return v == best_i || v == best_j; }),
                   live.end());
        live.push_back(merged_idx);
    }
    return dend;
}

std::vector<int> cut_dendrogram(const Dendrogram& dendrogram, int k) {
    const int m = dendrogram.n_leaves;
    if (k < 1 || k > m) throw Error("bad_input", "cut level outside [1, n_leaves]");
    const int applied = m - k;
    std::vector<int> parent(static_cast<std::size_t>(m + applied), -1);
    for (int t = 0; t < applied; ++t) {
        const Merge& mg = dendrogram.merges[static_cast<std::size_t>(t)];
        parent[static_cast<std::size_t>(mg.left)] = mg.merged;
        parent[static_cast<std::size_t>(mg.right)] = mg.merged;
    }
    auto root = [&](int v) {
        while (v < static_cast<int>(parent.size()) && parent[static_cast<std::size_t>(v)] >= 0)
            v = parent[static_cast<std::size_t>(v)];
        return v;
    };
    std::vector<int> assignment(static_cast<std::size_t>(m), -1);
    std::map<int, int> cluster_of_root;
    for (int leaf = 0; leaf < m; ++leaf) {
        const int r = root(leaf);
        auto [it, inserted] = cluster_of_root.try_emplace(r, static_cast<int>(cluster_of_root.size()));
        assignment[static_cast<std::size_t>(leaf)] = it->second;
    }
    return assignment;
}

namespace {

// Criterion value for one dendrogram height. Likelihood uses the noise-
// augmented spherical form: each cluster variance is inflated by the global
// spherical variance, which caps the reward for splitting off tight satellite
// groups and lets parsimony win on unstructured data.
Scalar criterion_value(const std::vector<const SubCluster*>& groups, Scalar global_var,
                       long total_count, int dims, Criterion criterion) {
    const Scalar d = static_cast<Scalar>(dims);
    Scalar minus_2_log_l = 0.0;
    for (const SubCluster* g : groups) {
        const Scalar nj = static_cast<Scalar>(g->count);
        Scalar ss = 0.0;
        for (int v = 0; v < dims; ++v)
            ss += g->square_sum[v] - g->linear_sum[v] * g->linear_sum[v] / nj;
        const Scalar var_j = std::max(ss / (nj * d), 0.0);
        minus_2_log_l += nj * d * (std::log(2.0 * M_PI) + std::log(global_var + var_j));
    }
    const Scalar params = static_cast<Scalar>(groups.size()) * (d + 1.0);
    if (criterion == Criterion::Aic) return minus_2_log_l + 2.0 * params;
    return minus_2_log_l + std::log(static_cast<Scalar>(total_count)) * params;
}

}  // namespace

int select_k(const Dendrogram& dendrogram, const PreClusterResult& pre, Criterion criterion,
             std::pair<int, int> k_range, std::vector<CriterionPoint>* trace) {
    const int m = dendrogram.n_leaves;
    const int k_lo = k_range.first;
    const int k_hi = std::min(k_range.second, m);
    if (k_lo < 1 || k_lo > k_hi)
        throw Error("k_range", "no feasible cluster count in [" + std::to_string(k_range.first) +
                                   ", " + std::to_string(k_range.second) + "] with " +
                                   std::to_string(m) + " sub-clusters");

    long total_count = 0;
    int dims = static_cast<int>(pre.sub_clusters.front().linear_sum.size());
    VecX total_ls = VecX::Zero(dims);
    VecX total_sq = VecX::Zero(dims);
    for (const SubCluster& sc : pre.sub_clusters) {
        total_count += sc.count;
        total_ls += sc.linear_sum;
        total_sq += sc.square_sum;
    }
    Scalar global_ss = 0.0;
    for (int v = 0; v < dims; ++v)
        global_ss += total_sq[v] - total_ls[v] * total_ls[v] / static_cast<Scalar>(total_count);
    const Scalar global_var =
        std::max(global_ss / (static_cast<Scalar>(total_count) * dims), 1e-30);

    // Replay merges downward, recording the criterion at every height in range.
    std::vector<SubCluster> nodes(pre.sub_clusters);
    std::vector<bool> active(static_cast<std::size_t>(m), true);
    std::map<int, Scalar> ic;
    auto record = [&](int k) {
        if (k < k_lo || k > k_hi) return;
        std::vector<const SubCluster*> groups;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (active[i]) groups.push_back(&nodes[i]);
        ic[k] = criterion_value(groups, global_var, total_count, dims, criterion);
    };
    record(m);
    for (const Merge& mg : dendrogram.merges) {
        SubCluster merged;
        merged.count = nodes[static_cast<std::size_t>(mg.left)].count +
                       nodes[static_cast<std::size_t>(mg.right)].count;
        merged.linear_sum = nodes[static_cast<std::size_t>(mg.left)].linear_sum +
                            nodes[static_cast<std::size_t>(mg.right)].linear_sum;
        merged.square_sum = nodes[static_cast<std::size_t>(mg.left)].square_sum +
                            nodes[static_cast<std::size_t>(mg.right)].square_sum;
        nodes.push_back(std::move(merged));
        active[static_cast<std::size_t>(mg.left)] = false;
        active[static_cast<std::size_t>(mg.right)] = false;
        active.push_back(true);
        const int k_now = m - (mg.merged - m) - 1;
        record(k_now);
        if (k_now <= k_lo) break;
    }
    if (trace) {
        trace->clear();
        for (const auto& [k, value] : ic) trace->push_back({k, value});
    }

    if (k_lo == k_hi) return k_lo;

    // Stage 1: walk up from k_lo while the improvement stays meaningful.
    auto improvement = [&](int k) { return ic.at(k) - ic.at(k + 1); };
    int coarse = k_lo;
    const Scalar first = improvement(k_lo);
    if (first > 0.0) {
        for (int k = k_lo; k < k_hi; ++k)
            if (improvement(k) > kCoarseRatio * first) coarse = k + 1;
    }

    // Stage 2: among solutions up to the coarse pick, compare the cost of
    // destroying each solution with the cost that created it.
    const int refine_lo = std::max(2, k_lo);
    const int refine_hi = std::min({coarse, m - 1, k_hi});
    if (refine_lo > refine_hi) return coarse;
    auto merge_dist = [&](int k) {
        // Distance of the merge taking k + 1 active groups to k.
        return dendrogram.merges[static_cast<std::size_t>(m - 1 - k)].distance;
    };
    auto ratio = [&](int k) {
        const Scalar destroy = merge_dist(k - 1);
        const Scalar create = merge_dist(k);
        if (create == 0.0 && destroy == 0.0) return Scalar(1.0);
        if (create == 0.0) return std::numeric_limits<Scalar>::infinity();
        return destroy / create;
    };
    int best_k = refine_lo;
    Scalar best_r = ratio(refine_lo);
    for (int k = refine_lo + 1; k <= refine_hi; ++k) {
        const Scalar r = ratio(k);
        if (r >= best_r) {
            best_r = r;
            best_k = k;
        }
    }
    if (refine_lo == refine_hi) return best_k;
    int second_k = -1;
    Scalar second_r = -std::numeric_limits<Scalar>::infinity();
    for (int k = refine_lo; k <= refine_hi; ++k) {
        if (k == best_k) continue;
        const Scalar r = ratio(k);
        if (r >= second_r) {
            second_r = r;
            second_k = k;
        }
    }
    if (best_r > kRefineRatio * second_r) return best_k;
    return std::max(best_k, second_k);
}

std::optional<Scalar> silhouette_avg(const MatX& points, const std::vector<int>& assignments) {
    const auto n = points.rows();
    if (n == 0 || assignments.size() != static_cast<std::size_t>(n))
        throw Error("bad_input", "silhouette needs one assignment per point");
    int k = 0;
    for (int a : assignments) {
        if (a < 0) throw Error("bad_input", "negative cluster index");
        k = std::max(k, a + 1);
    }
    std::vector<long> sizes(static_cast<std::size_t>(k), 0);
    for (int a : assignments) ++sizes[static_cast<std::size_t>(a)];
    long populated = 0;
    for (long s : sizes)
        if (s > 0) ++populated;
    if (populated <= 1) return std::nullopt;

    Scalar total = 0.0;
    std::vector<Scalar> mean_dist(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < n; ++i) {
        const int ci = assignments[static_cast<std::size_t>(i)];
        if (sizes[static_cast<std::size_t>(ci)] == 1) continue;  // singleton scores 0
        std::fill(mean_dist.begin(), mean_dist.end(), 0.0);
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const Scalar dist = (points.row(i) - points.row(j)).norm();
            mean_dist[static_cast<std::size_t>(assignments[static_cast<std::size_t>(j)])] += dist;
        }
        const Scalar a =
            mean_dist[static_cast<std::size_t>(ci)] /
            static_cast<Scalar>(sizes[static_cast<std::size_t>(ci)] - 1);
        Scalar b = std::numeric_limits<Scalar>::infinity();
        for (int c = 0; c < k; ++c) {
            if (c == ci || sizes[static_cast<std::size_t>(c)] == 0) continue;
            b = std::min(b, mean_dist[static_cast<std::size_t>(c)] /
                                static_cast<Scalar>(sizes[static_cast<std::size_t>(c)]));
        }
        const Scalar denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / static_cast<Scalar>(n);
}

std::map<std::string, Scalar> variable_importance(const MatX& points,
                                                  const std::vector<int>& assignments,
                                                  const std::vector<std::string>& variables) {
    const auto n = points.rows();
    if (static_cast<std::size_t>(points.cols()) != variables.size())
        throw Error("bad_input", "one name per variable column required");
    int k = 0;
    for (int a : assignments) k = std::max(k, a + 1);
    if (k < 2) throw Error("bad_input", "variable importance needs k >= 2");

    std::vector<long> sizes(static_cast<std::size_t>(k), 0);
    for (int a : assignments) ++sizes[static_cast<std::size_t>(a)];

    std::map<std::string, Scalar> raw;
    Scalar max_raw = 0.0;
    for (Eigen::Index v = 0; v < points.cols(); ++v) {
        const Scalar grand_mean = points.col(v).mean();
        std::vector<Scalar> group_sum(static_cast<std::size_t>(k), 0.0);
        for (Eigen::Index i = 0; i < n; ++i)
            group_sum[static_cast<std::size_t>(assignments[static_cast<std::size_t>(i)])] +=
                points(i, v);
        Scalar ssb = 0.0;
        for (int c = 0; c < k; ++c) {
            if (sizes[static_cast<std::size_t>(c)] == 0) continue;
            const Scalar mean_c = group_sum[static_cast<std::size_t>(c)] /
                                  static_cast<Scalar>(sizes[static_cast<std::size_t>(c)]);
            ssb += static_cast<Scalar>(sizes[static_cast<std::size_t>(c)]) *
                   (mean_c - grand_mean) * (mean_c - grand_mean);
        }
        Scalar ssw = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const int c = assignments[static_cast<std::size_t>(i)];
            const Scalar mean_c = group_sum[static_cast<std::size_t>(c)] /
                                  static_cast<Scalar>(sizes[static_cast<std::size_t>(c)]);
            ssw += (points(i, v) - mean_c) * (points(i, v) - mean_c);
        }
        Scalar value;
        if (ssb <= 0.0) {
            value = 0.0;  // constant variable, or no between-group spread
        } else if (ssw <= 0.0 || n <= k) {
            value = 1.0;  // perfect separation
        } else {
            const Scalar f = (ssb / (k - 1)) / (ssw / static_cast<Scalar>(n - k));
            value = f_cdf(f, static_cast<Scalar>(k - 1), static_cast<Scalar>(n - k));
        }
        raw[variables[static_cast<std::size_t>(v)]] = value;
        max_raw = std::max(max_raw, value);
    }
    if (max_raw > 0.0)
        for (auto& [_, value] : raw) value /= max_raw;
    return raw;
}

namespace {

MatX standardized(const MatX& x, VecX& mean_out, VecX& scale_out, bool standardize) {
    const auto n = x.rows();
    const auto d = x.cols();
    if (!standardize) {
        mean_out = VecX::Zero(d);
        scale_out = VecX::Ones(d);
        return x;
    }
    mean_out = x.colwise().mean().transpose();
    scale_out = VecX::Zero(d);
    MatX z = x.rowwise() - mean_out.transpose();
    for (Eigen::Index v = 0; v < d; ++v) {
        if (n >= 2) {
            const Scalar sd = std::sqrt(z.col(v).squaredNorm() / static_cast<Scalar>(n - 1));
            scale_out[v] = sd;
        }
        if (scale_out[v] > 0.0)
            z.col(v) /= scale_out[v];
        else
            z.col(v).setZero();  // constant variable carries no distance
    }
    return z;
}

}  // namespace

ClusterModel cluster(const std::vector<FeatureVector>& features, const ClusterConfig& config) {
    if (features.empty()) throw Error("bad_input", "no feature vectors to cluster");
    if (config.variables.empty()) throw Error("bad_input", "no variables configured");
    if (config.distance != "euclidean")
        throw Error("bad_input", "unsupported distance: " + config.distance);
    for (const std::string& v : config.variables)
        if (std::find(kClusterVariables.begin(), kClusterVariables.end(), v) ==
            kClusterVariables.end())
            throw Error("bad_input", "unknown variable: " + v);
    for (const std::string& v : config.carry_variables) {
        if (std::find(kClusterVariables.begin(), kClusterVariables.end(), v) ==
            kClusterVariables.end())
            throw Error("bad_input", "unknown variable: " + v);
        if (std::find(config.variables.begin(), config.variables.end(), v) !=
            config.variables.end())
            throw Error("bad_input", "variable both clustered and carried: " + v);
    }

    const auto n = static_cast<Eigen::Index>(features.size());
    const auto d = static_cast<Eigen::Index>(config.variables.size());
    MatX x(n, d);
    std::vector<std::string> missing;
    std::set<std::string> seen_ids;
    for (Eigen::Index i = 0; i < n; ++i) {
        const FeatureVector& f = features[static_cast<std::size_t>(i)];
        if (!seen_ids.insert(f.record_id).second)
            throw Error("bad_input", "duplicate record id: " + f.record_id);
        bool row_missing = false;
        for (Eigen::Index v = 0; v < d; ++v) {
            const auto value = feature_value(f, config.variables[static_cast<std::size_t>(v)]);
            if (!value) {
                row_missing = true;
                continue;
            }
            if (!std::isfinite(*value))
                throw Error("bad_input", "non-finite feature value for record " + f.record_id);
            x(i, v) = *value;
        }
        if (row_missing) missing.push_back(f.record_id);
    }
    if (!missing.empty()) {
        std::string msg = "records missing configured variables:";
        for (const std::string& id : missing) msg += " " + id;
        throw Error("missing_variable", msg);
    }

    ClusterModel model;
    model.config = config;
    const MatX z = standardized(x, model.standardize_mean, model.standardize_scale,
                                config.standardize);

    const PreClusterResult pre = pre_cluster(z, config.pre_cluster_threshold);
    const Dendrogram dend = agglomerate(pre.sub_clusters);
    int k = select_k(dend, pre, config.criterion, config.k_range, &model.criterion_trace);
    const std::vector<int> cut = cut_dendrogram(dend, k);

    // Centroids of the dendrogram cut, from sufficient statistics.
    std::vector<VecX> centers(static_cast<std::size_t>(k), VecX::Zero(d));
    std::vector<long> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t s = 0; s < pre.sub_clusters.size(); ++s) {
        const int c = cut[s];
        centers[static_cast<std::size_t>(c)] += pre.sub_clusters[s].linear_sum;
        counts[static_cast<std::size_t>(c)] += pre.sub_clusters[s].count;
    }
    for (int c = 0; c < k; ++c) centers[static_cast<std::size_t>(c)] /= counts[static_cast<std::size_t>(c)];

    // Every original vector goes to its nearest cut centroid.
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        int best = 0;
        Scalar best_dist = std::numeric_limits<Scalar>::infinity();
        for (int c = 0; c < k; ++c) {
            const Scalar dist =
                (z.row(i).transpose() - centers[static_cast<std::size_t>(c)]).norm();
            if (dist < best_dist) {
                best_dist = dist;
                best = c;
            }
        }
        labels[static_cast<std::size_t>(i)] = best;
    }

    // Reassignment can drain a cut cluster; renumber to keep clusters dense.
    std::vector<long> final_counts(static_cast<std::size_t>(k), 0);
    for (int a : labels) ++final_counts[static_cast<std::size_t>(a)];
    std::vector<int> renumber(static_cast<std::size_t>(k), -1);
    int next = 0;
    for (int c = 0; c < k; ++c)
        if (final_counts[static_cast<std::size_t>(c)] > 0)
            renumber[static_cast<std::size_t>(c)] = next++;
    for (int& a : labels) a = renumber[static_cast<std::size_t>(a)];
    k = next;
    model.k = k;

    model.centroids_standardized.assign(static_cast<std::size_t>(k), VecX::Zero(d));
    std::vector<long> sizes(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        model.centroids_standardized[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] +=
            z.row(i).transpose();
        ++sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
    }
    model.centroids.resize(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        model.centroids_standardized[static_cast<std::size_t>(c)] /=
            static_cast<Scalar>(sizes[static_cast<std::size_t>(c)]);
        VecX orig(d);
        for (Eigen::Index v = 0; v < d; ++v)
            orig[v] = model.standardize_mean[v] +
                      model.standardize_scale[v] *
                          model.centroids_standardized[static_cast<std::size_t>(c)][v];
        model.centroids[static_cast<std::size_t>(c)] = orig;
    }

    for (Eigen::Index i = 0; i < n; ++i)
        model.assignments[features[static_cast<std::size_t>(i)].record_id] =
            labels[static_cast<std::size_t>(i)];

    // Carried variables ride along as per-cluster means without ever touching
    // the distance space.
    for (const std::string& name : config.carry_variables) {
        std::vector<Scalar> sums(static_cast<std::size_t>(k), 0.0);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto value = feature_value(features[static_cast<std::size_t>(i)], name);
            if (!value)
                throw Error("missing_variable", "record " +
                                                    features[static_cast<std::size_t>(i)].record_id +
                                                    " missing carried variable " + name);
            sums[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] += *value;
        }
        for (int c = 0; c < k; ++c)
            sums[static_cast<std::size_t>(c)] /= static_cast<Scalar>(sizes[static_cast<std::size_t>(c)]);
        model.carried[name] = std::move(sums);
    }

    if (k >= 2) {
        model.avg_silhouette = silhouette_avg(z, labels);
        model.importance = variable_importance(x, labels, config.variables);
    }
    return model;
}

std::string model_to_json(const ClusterModel& model) {
    nlohmann::json j;
    j["config"] = {{"variables", model.config.variables},
                   {"carry_variables", model.config.carry_variables},
                   {"distance", model.config.distance},
                   {"criterion", to_string(model.config.criterion)},
                   {"k_range", {model.config.k_range.first, model.config.k_range.second}},
                   {"pre_cluster_threshold", model.config.pre_cluster_threshold},
                   {"standardize", model.config.standardize}};
    j["k"] = model.k;
    auto vec_to_json = [](const VecX& v) {
        std::vector<Scalar> out(v.data(), v.data() + v.size());
        return out;
    };
    for (const VecX& c : model.centroids) j["centroids"].push_back(vec_to_json(c));
    for (const VecX& c : model.centroids_standardized)
        j["centroids_standardized"].push_back(vec_to_json(c));
    j["assignments"] = model.assignments;
    j["carried"] = model.carried;
    if (model.avg_silhouette)
        j["avg_silhouette"] = *model.avg_silhouette;
    else
        j["avg_silhouette"] = nullptr;
    j["importance"] = model.importance;
    j["criterion_trace"] = nlohmann::json::array();
    for (const CriterionPoint& p : model.criterion_trace)
        j["criterion_trace"].push_back({{"k", p.k}, {"value", p.value}});
    j["standardize_mean"] = vec_to_json(model.standardize_mean);
    j["standardize_scale"] = vec_to_json(model.standardize_scale);
    return j.dump(2) + "\n";
}

ClusterModel model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", std::string("cluster model JSON: ") + e.what());
    }
    try {
        ClusterModel model;
        const auto& cfg = j.at("config");
        model.config.variables = cfg.at("variables").get<std::vector<std::string>>();
        if (cfg.contains("carry_variables"))
            model.config.carry_variables =
                cfg.at("carry_variables").get<std::vector<std::string>>();
        model.config.distance = cfg.at("distance").get<std::string>();
        const auto criterion = parse_criterion(cfg.at("criterion").get<std::string>());
        if (!criterion) throw Error("parse", "unknown criterion in cluster model");
        model.config.criterion = *criterion;
        model.config.k_range = {cfg.at("k_range")[0].get<int>(), cfg.at("k_range")[1].get<int>()};
        model.config.pre_cluster_threshold = cfg.at("pre_cluster_threshold").get<Scalar>();
        model.config.standardize = cfg.at("standardize").get<bool>();
        model.k = j.at("k").get<int>();
        auto vec_from_json = [](const nlohmann::json& arr) {
            VecX v(arr.size());
            for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i].get<Scalar>();
            return v;
        };
        for (const auto& c : j.at("centroids")) model.centroids.push_back(vec_from_json(c));
        for (const auto& c : j.at("centroids_standardized"))
            model.centroids_standardized.push_back(vec_from_json(c));
        model.assignments = j.at("assignments").get<std::map<std::string, int>>();
        if (j.contains("carried"))
            model.carried = j.at("carried").get<std::map<std::string, std::vector<Scalar>>>();
        if (!j.at("avg_silhouette").is_null())
            model.avg_silhouette = j.at("avg_silhouette").get<Scalar>();
        model.importance = j.at("importance").get<std::map<std::string, Scalar>>();
        for (const auto& p : j.at("criterion_trace"))
            model.criterion_trace.push_back({p.at("k").get<int>(), p.at("value").get<Scalar>()});
        model.standardize_mean = vec_from_json(j.at("standardize_mean"));
        model.standardize_scale = vec_from_json(j.at("standardize_scale"));
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", std::string("cluster model JSON: ") + e.what());
    }
}

}  // namespace gazewalk

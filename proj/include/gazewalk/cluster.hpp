#pragma once

#include "gazewalk/features.hpp"
#include "gazewalk/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gazewalk {

enum class Criterion { Aic, Bic };

std::string to_string(Criterion criterion);
std::optional<Criterion> parse_criterion(std::string_view s);

struct ClusterConfig {
    std::vector<std::string> variables;
    // Reported per cluster (means in original units) but kept out of the
    // distance space; lets narrow gaze-share models still carry speed.
    std::vector<std::string> carry_variables;
    std::string distance = "euclidean";
    Criterion criterion = Criterion::Aic;
    std::pair<int, int> k_range = {1, 15};
    // 0 keeps every distinct point in its own sub-cluster (exact mode).
    Scalar pre_cluster_threshold = 0.0;
    bool standardize = true;
};

// Sufficient statistics: centroid and variance are exact functions of
// (count, linear_sum, square_sum), so points are never revisited.
struct SubCluster {
    long count = 0;
    VecX linear_sum;
    VecX square_sum;  // per-dimension

    VecX center() const { return linear_sum / static_cast<Scalar>(count); }
};

struct PreClusterResult {
    std::vector<SubCluster> sub_clusters;
    std::vector<int> membership;  // point index -> sub-cluster index
};

// One agglomeration step. Leaves occupy node indices 0..n_leaves-1 in
// creation order; each merge appends a node at the next index.
struct Merge {
    int left = 0;
    int right = 0;
    int merged = 0;
    Scalar distance = 0.0;  // Euclidean distance between the joined centers
};

struct Dendrogram {
    int n_leaves = 0;
    std::vector<Merge> merges;  // n_leaves - 1 entries
};

struct CriterionPoint {
    int k = 0;
    Scalar value = 0.0;
};

struct ClusterModel {
    ClusterConfig config;
    int k = 0;
    std::vector<VecX> centroids;  // original units
    std::vector<VecX> centroids_standardized;
    std::map<std::string, int> assignments;  // record id -> cluster index
    // Per carried variable: mean over each cluster's members, original units.
    std::map<std::string, std::vector<Scalar>> carried;
    std::optional<Scalar> avg_silhouette;    // absent when k == 1
    std::map<std::string, Scalar> importance;
    std::vector<CriterionPoint> criterion_trace;
    VecX standardize_mean;   // zeros when standardize = false
    VecX standardize_scale;  // per-variable sample SD; 0 marks a constant variable
};

// Looks up a feature by the name used in ClusterConfig::variables; empty
// for a missing stationary feature, nullopt only from unknown names is not
// distinguishable here, so callers validate names against kClusterVariables.
std::optional<Scalar> feature_value(const FeatureVector& features, std::string_view name);

// Every clusterable variable name, in canonical order.
extern const std::vector<std::string> kClusterVariables;

// Sequential absorption: each point joins the nearest existing sub-cluster
// center when that distance is <= threshold, else opens a new sub-cluster.
// Order dependent by construction; threshold 0 groups only coincident points.
PreClusterResult pre_cluster(const MatX& points, Scalar threshold);

// Centroid-linkage agglomeration over all sub-clusters. Ties on distance
// break lexicographically on (left, right) creation indices.
Dendrogram agglomerate(const std::vector<SubCluster>& sub_clusters);

// State after n_leaves - k merges; sub-cluster index -> cluster index, with
// clusters numbered by their smallest contained leaf index.
std::vector<int> cut_dendrogram(const Dendrogram& dendrogram, int k);

// Two-stage choice: information-criterion walk for a coarse k, then
// refinement by the ratio of consecutive merge distances.
int select_k(const Dendrogram& dendrogram, const PreClusterResult& pre, Criterion criterion,
             std::pair<int, int> k_range, std::vector<CriterionPoint>* trace = nullptr);

// pre_cluster -> agglomerate -> select_k -> nearest-centroid assignment of
// every original vector; centroids reported in original units.
ClusterModel cluster(const std::vector<FeatureVector>& features, const ClusterConfig& config);

// Mean of (b - a) / max(a, b) over points; singleton-cluster points score 0.
// A single cluster has no silhouette, reported as nullopt rather than a number.
std::optional<Scalar> silhouette_avg(const MatX& points, const std::vector<int>& assignments);

// Per-variable one-way F statistic mapped through its CDF (1 - p-value),
// rescaled so the best-separating variable scores exactly 1. Constant
// variables score 0 and never rescale.
std::map<std::string, Scalar> variable_importance(const MatX& points,
                                                  const std::vector<int>& assignments,
                                                  const std::vector<std::string>& variables);

std::string model_to_json(const ClusterModel& model);
ClusterModel model_from_json(const std::string& text);

}  // namespace gazewalk

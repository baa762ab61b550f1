#pragma once

#include "gazewalk/cluster.hpp"
#include "gazewalk/stats.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gazewalk {

// Pedestrian archetypes. Pf*/Sz* short codes follow the walker (1),
// stationary-leaning (2) and immersed (3) variants of each figure.
enum class FigureLabel {
    PostFlaneur,            // Pf1, walkers model
    StationaryPostFlaneur,  // Pf2, walk-stop model
    ImmersedPostFlaneur,    // Pf3, walk-stop model
    SmartphoneZombie,       // Sz1, walkers model
    SecondDegreeZombie,     // Sz2, walkers model
    ImmersedZombie,         // Sz3, walk-stop model
    DestinationOriented,    // walkers model
    InBetween,              // walkers model
    Disinterested,          // walk-stop model
    Unclassified
};

std::string to_string(FigureLabel label);
std::string short_code(FigureLabel label);
std::optional<FigureLabel> parse_figure_label(std::string_view s);

// One conjunctive predicate over a cluster centroid. max/min compare the
// centroid against every other cluster; thresholds are absolute; the speed
// comparison is relative to the corpus mean, so rescaling all speeds by a
// positive constant never changes the outcome.
struct Condition {
    std::string variable;
    bool is_max = false;
    bool is_min = false;
    std::optional<Scalar> gt;
    std::optional<Scalar> ge;
    std::optional<Scalar> lt;
    std::optional<Scalar> le;
    std::optional<bool> above_corpus_mean;
    std::optional<std::string> ge_var;  // variable >= other variable, same centroid
    std::optional<std::string> gt_var;
};

struct TaxonomyRule {
    FigureLabel label = FigureLabel::Unclassified;
    std::vector<Condition> conditions;  // empty = always matches
};

// Ordered; first matching rule wins per cluster. A terminal catch-all rule
// guarantees every cluster a label.
struct TaxonomyRules {
    std::vector<TaxonomyRule> rules;
};

struct CorpusStats {
    Scalar mean_speed = 0.0;
};

TaxonomyRules parse_rules(const std::string& json_text);
std::string rules_to_json(const TaxonomyRules& rules);

// Built-in defaults for each cluster-model subset.
TaxonomyRules default_walker_rules();
TaxonomyRules default_walkstop_rules();

// Pure function of centroids and corpus mean speed. When several clusters
// tie on a max/min rule, the larger margin wins and the tie is logged.
std::map<int, FigureLabel> label_clusters(const ClusterModel& model, const TaxonomyRules& rules,
                                          const CorpusStats& corpus,
                                          std::vector<std::string>* log = nullptr);

struct FigureSummary {
    Table figures;      // one row per assigned label
    Table umbrella;     // pooled post-flaneur and smartphone-zombie rows
    Table by_age;       // share of each age group's records per label
    Table by_activity;  // share of each activity group's records per label
};

// Records carry demographics, features carry speed and walking-gaze
// fractions; the two lists are joined by record id. Records holding two
// activities count once in each of their activity groups.
FigureSummary figure_summary(const std::vector<TrajectoryRecord>& records,
                             const std::vector<FeatureVector>& features,
                             const std::map<std::string, FigureLabel>& label_per_record);

void write_figure_labels_csv(const std::map<std::string, FigureLabel>& label_per_record,
                             std::ostream& out);
std::map<std::string, FigureLabel> read_figure_labels_csv(std::istream& in);

}  // namespace gazewalk

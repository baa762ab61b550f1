#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gazewalk/taxonomy.hpp"
#include "helpers.hpp"

#include <sstream>

using namespace gazewalk;
using testutil::make_record;

namespace {

// Hand-built walkers model: centroids in the walking-gaze plane (fractions),
// speed carried per cluster.
ClusterModel walkers_model(const std::vector<std::array<Scalar, 3>>& rows) {
    ClusterModel m;
    m.config.variables = {"pct_screen_walk", "pct_wander_walk"};
    m.config.carry_variables = {"walking_speed"};
    m.k = static_cast<int>(rows.size());
    std::vector<Scalar> speeds;
    for (const auto& r : rows) {
        VecX c(2);
        c << r[0], r[1];
        m.centroids.push_back(c);
        speeds.push_back(r[2]);
    }
    m.carried["walking_speed"] = speeds;
    return m;
}

ClusterModel walkstop_model(const std::vector<std::array<Scalar, 5>>& rows) {
    ClusterModel m;
    m.config.variables = {"pct_screen_walk", "pct_wander_walk", "pct_screen_stat",
                          "pct_wander_stat"};
    m.config.carry_variables = {"walking_speed"};
    m.k = static_cast<int>(rows.size());
    std::vector<Scalar> speeds;
    for (const auto& r : rows) {
        VecX c(4);
        c << r[0], r[1], r[2], r[3];
        m.centroids.push_back(c);
        speeds.push_back(r[4]);
    }
    m.carried["walking_speed"] = speeds;
    return m;
}

}  // namespace

TEST_CASE("figure labels round-trip through long names and short codes") {
    const FigureLabel all[] = {
        FigureLabel::PostFlaneur,       FigureLabel::StationaryPostFlaneur,
        FigureLabel::ImmersedPostFlaneur, FigureLabel::SmartphoneZombie,
        FigureLabel::SecondDegreeZombie,  FigureLabel::ImmersedZombie,
        FigureLabel::DestinationOriented, FigureLabel::InBetween,
        FigureLabel::Disinterested,       FigureLabel::Unclassified};
    for (FigureLabel l : all) {
        CHECK(parse_figure_label(to_string(l)) == l);
        CHECK(parse_figure_label(short_code(l)) == l);
    }
    CHECK(short_code(FigureLabel::PostFlaneur) == "Pf1");
    CHECK(short_code(FigureLabel::ImmersedZombie) == "Sz3");
    CHECK_FALSE(parse_figure_label("FLANEUR").has_value());
}

TEST_CASE("walker rules recover the five written descriptions") {
    // screen-dominant and fast; wander-dominant and slow; neither gaze and
    // fastest; mid screen share; mixed remainder
    const ClusterModel model = walkers_model({{0.823, 0.044, 1.20},
                                              {0.1016, 0.7726, 0.93},
                                              {0.4496, 0.052, 1.107},
                                              {0.025, 0.012, 1.35},
                                              {0.31, 0.46, 0.95}});
    const CorpusStats corpus{1.06};
    const auto labels = label_clusters(model, default_walker_rules(), corpus);
    CHECK(labels.at(0) == FigureLabel::SmartphoneZombie);
    CHECK(labels.at(1) == FigureLabel::PostFlaneur);
    CHECK(labels.at(2) == FigureLabel::SecondDegreeZombie);
    CHECK(labels.at(3) == FigureLabel::DestinationOriented);
    CHECK(labels.at(4) == FigureLabel::InBetween);
}

TEST_CASE("walk-stop rules separate the four stopping figures") {
    const ClusterModel model = walkstop_model({{0.1105, 0.7429, 0.2185, 0.6896, 0.85},
                                               {0.0919, 0.1068, 0.5340, 0.2066, 0.90},
                                               {0.1327, 0.6951, 0.7337, 0.1485, 0.88},
                                               {0.6468, 0.0312, 0.9128, 0.0302, 1.01}});
    const auto labels = label_clusters(model, default_walkstop_rules(), CorpusStats{1.06});
    CHECK(labels.at(0) == FigureLabel::StationaryPostFlaneur);
    CHECK(labels.at(1) == FigureLabel::Disinterested);
    CHECK(labels.at(2) == FigureLabel::ImmersedPostFlaneur);
    CHECK(labels.at(3) == FigureLabel::ImmersedZombie);
}

TEST_CASE("a cluster matching no rule falls through to the catch-all") {
    // all-zero gaze shares satisfy none of the walk-stop descriptions
    const ClusterModel model = walkstop_model({{0.0, 0.0, 0.0, 0.0, 1.0}});
    const auto labels = label_clusters(model, default_walkstop_rules(), CorpusStats{1.0});
    CHECK(labels.at(0) == FigureLabel::Unclassified);
}

TEST_CASE("exact extremum ties are resolved and logged") {
    // two clusters share the maximal screen share; one must win, loudly
    const ClusterModel model = walkers_model({{0.80, 0.05, 1.2},
                                              {0.80, 0.06, 1.1},
                                              {0.05, 0.70, 0.9}});
    std::vector<std::string> log;
    const auto labels = label_clusters(model, default_walker_rules(), CorpusStats{1.0}, &log);
    const int zombies = (labels.at(0) == FigureLabel::SmartphoneZombie ? 1 : 0) +
                        (labels.at(1) == FigureLabel::SmartphoneZombie ? 1 : 0);
    CHECK(zombies == 1);
    REQUIRE_FALSE(log.empty());
    CHECK(log[0].find("tie") != std::string::npos);
    CHECK(labels.at(2) == FigureLabel::PostFlaneur);
}

TEST_CASE("the corpus-mean speed comparison is scale-free") {
    const std::vector<std::array<Scalar, 3>> rows = {{0.02, 0.01, 1.4}, {0.05, 0.82, 0.9}};
    const auto base =
        label_clusters(walkers_model(rows), default_walker_rules(), CorpusStats{1.1});
    // scale every speed by 3: the relative comparison must not move
    auto scaled_rows = rows;
    for (auto& r : scaled_rows) r[2] *= 3.0;
    const auto scaled =
        label_clusters(walkers_model(scaled_rows), default_walker_rules(), CorpusStats{3.3});
    CHECK(base.at(0) == FigureLabel::DestinationOriented);
    CHECK(scaled.at(0) == FigureLabel::DestinationOriented);
    CHECK(base.at(1) == scaled.at(1));
}

TEST_CASE("rule variables must exist in the model") {
    const ClusterModel model = walkers_model({{0.5, 0.2, 1.0}});
    TaxonomyRules rules;
    rules.rules.push_back({FigureLabel::InBetween,
                           {Condition{.variable = "pct_screen_stat", .gt = 0.5}}});
    CHECK_THROWS_WITH_AS(label_clusters(model, rules, CorpusStats{1.0}),
                         doctest::Contains("pct_screen_stat"), Error);
}

TEST_CASE("taxonomy rules survive a JSON round trip") {
    for (const TaxonomyRules& rules : {default_walker_rules(), default_walkstop_rules()}) {
        const std::string text = rules_to_json(rules);
        const TaxonomyRules back = parse_rules(text);
        CHECK(rules_to_json(back) == text);
        REQUIRE(back.rules.size() == rules.rules.size());
        for (std::size_t i = 0; i < rules.rules.size(); ++i) {
            CHECK(back.rules[i].label == rules.rules[i].label);
            CHECK(back.rules[i].conditions.size() == rules.rules[i].conditions.size());
        }
    }
    CHECK_THROWS_AS(parse_rules("{}"), Error);
    CHECK_THROWS_AS(parse_rules("{\"rules\": []}"), Error);
    // a threshold condition without any comparison is meaningless
    CHECK_THROWS_AS(
        parse_rules(R"({"rules": [{"label": "IN_BETWEEN", "when": [{"var": "x"}]}]})"),
        Error);
}

TEST_CASE("figure summary pools the umbrella figures and cross-tabulates") {
    // two post-flaneur variants, one zombie, one destination walker
    std::vector<TrajectoryRecord> records = {
        make_record("a", std::vector<int>(30, 2)), make_record("b", std::vector<int>(30, 2)),
        make_record("c", std::vector<int>(30, 19)), make_record("d", std::vector<int>(30, 1))};
    records[0].age_group = AgeGroup::Teenager;
    records[1].age_group = AgeGroup::Teenager;
    records[2].age_group = AgeGroup::Adult;
    records[3].age_group = AgeGroup::Adult;
    records[3].activities = {Activity::Listening, Activity::Reading};  // counted in G1 and G2

    std::vector<FeatureVector> features = extract_features(records);
    features[0].walking_speed = 0.9;
    features[1].walking_speed = 1.1;
    features[2].walking_speed = 1.2;
    features[3].walking_speed = 1.4;

    const std::map<std::string, FigureLabel> labels = {
        {"a", FigureLabel::PostFlaneur},
        {"b", FigureLabel::ImmersedPostFlaneur},
        {"c", FigureLabel::SmartphoneZombie},
        {"d", FigureLabel::DestinationOriented}};

    const FigureSummary summary = figure_summary(records, features, labels);

    // pooled post-flaneur row: n=2, share 50%, mean speed 1.00
    REQUIRE(summary.umbrella.rows.size() == 2);
    const auto& pf = summary.umbrella.rows[0];
    CHECK(pf[0] == "POST_FLANEUR_ALL");
    CHECK(pf[2] == "2");
    CHECK(pf[3] == "50.00");
    CHECK(pf[4] == "1.00");
    const auto& sz = summary.umbrella.rows[1];
    CHECK(sz[2] == "1");
    CHECK(sz[3] == "25.00");

    // per-figure table lists each assigned label once
    CHECK(summary.figures.rows.size() == 4);

    // every teenager is a post-flaneur variant; no teenage zombie
    REQUIRE_FALSE(summary.by_age.rows.empty());
    bool saw_pf1 = false;
    for (const auto& row : summary.by_age.rows) {
        if (row[0] == "POST_FLANEUR") {
            CHECK(row[1] == "50.00");  // 1 of 2 teenagers
            saw_pf1 = true;
        }
        if (row[0] == "SMARTPHONE_ZOMBIE") CHECK(row[1] == "0.00");
    }
    CHECK(saw_pf1);

    // the two-activity record appears in both of its groups
    bool saw_do = false;
    for (const auto& row : summary.by_activity.rows) {
        if (row[0] == "DESTINATION_ORIENTED") {
            CHECK(row[1] == "100.00");  // only G1 record
            CHECK(row[2] == "100.00");  // only G2 record
            saw_do = true;
        }
    }
    CHECK(saw_do);

    // a labeled id without a matching record is an id mismatch
    std::map<std::string, FigureLabel> bad = labels;
    bad["ghost"] = FigureLabel::InBetween;
    CHECK_THROWS_AS(figure_summary(records, features, bad), Error);
}

TEST_CASE("figure label files round-trip") {
    const std::map<std::string, FigureLabel> labels = {
        {"r1", FigureLabel::PostFlaneur},
        {"r2", FigureLabel::ImmersedZombie},
        {"r3", FigureLabel::Unclassified}};
    std::ostringstream out;
    write_figure_labels_csv(labels, out);
    std::istringstream in(out.str());
    CHECK(read_figure_labels_csv(in) == labels);
}

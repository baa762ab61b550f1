#include "gazewalk/taxonomy.hpp"

#include "gazewalk/csv.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace gazewalk {

namespace {

constexpr std::array<FigureLabel, 10> kAllLabels = {
    FigureLabel::PostFlaneur,          FigureLabel::StationaryPostFlaneur,
    FigureLabel::ImmersedPostFlaneur,  FigureLabel::SmartphoneZombie,
    FigureLabel::SecondDegreeZombie,   FigureLabel::ImmersedZombie,
    FigureLabel::DestinationOriented,  FigureLabel::InBetween,
    FigureLabel::Disinterested,        FigureLabel::Unclassified};

}  // namespace

std::string to_string(FigureLabel label) {
    switch (label) {
        case FigureLabel::PostFlaneur: return "POST_FLANEUR";
        case FigureLabel::StationaryPostFlaneur: return "STATIONARY_POST_FLANEUR";
        case FigureLabel::ImmersedPostFlaneur: return "IMMERSED_POST_FLANEUR";
        case FigureLabel::SmartphoneZombie: return "SMARTPHONE_ZOMBIE";
        case FigureLabel::SecondDegreeZombie: return "SECOND_DEGREE_ZOMBIE";
        case FigureLabel::ImmersedZombie: return "IMMERSED_ZOMBIE";
        case FigureLabel::DestinationOriented: return "DESTINATION_ORIENTED";
        case FigureLabel::InBetween: return "IN_BETWEEN";
        case FigureLabel::Disinterested: return "DISINTERESTED";
        case FigureLabel::Unclassified: return "UNCLASSIFIED";
    }
    return "?";
}

std::string short_code(FigureLabel label) {
    switch (label) {
        case FigureLabel::PostFlaneur: return "Pf1";
        case FigureLabel::StationaryPostFlaneur: return "Pf2";
        case FigureLabel::ImmersedPostFlaneur: return "Pf3";
        case FigureLabel::SmartphoneZombie: return "Sz1";
        case FigureLabel::SecondDegreeZombie: return "Sz2";
        case FigureLabel::ImmersedZombie: return "Sz3";
        case FigureLabel::DestinationOriented: return "DO";
        case FigureLabel::InBetween: return "IB";
        case FigureLabel::Disinterested: return "DIS";
        case FigureLabel::Unclassified: return "UC";
    }
    return "?";
}

std::optional<FigureLabel> parse_figure_label(std::string_view s) {
    for (FigureLabel label : kAllLabels)
        if (s == to_string(label) || s == short_code(label)) return label;
    return std::nullopt;
}

namespace {

Condition condition_from_json(const nlohmann::json& j) {
    Condition c;
    if (j.contains("max")) {
        c.variable = j.at("max").get<std::string>();
        c.is_max = true;
        return c;
    }
    if (j.contains("min")) {
        c.variable = j.at("min").get<std::string>();
        c.is_min = true;
        return c;
    }
    c.variable = j.at("var").get<std::string>();
    if (j.contains("gt")) c.gt = j.at("gt").get<Scalar>();
    if (j.contains("ge")) c.ge = j.at("ge").get<Scalar>();
    if (j.contains("lt")) c.lt = j.at("lt").get<Scalar>();
    if (j.contains("le")) c.le = j.at("le").get<Scalar>();
    if (j.contains("above_corpus_mean")) c.above_corpus_mean = j.at("above_corpus_mean").get<bool>();
    if (j.contains("ge_var")) c.ge_var = j.at("ge_var").get<std::string>();
    if (j.contains("gt_var")) c.gt_var = j.at("gt_var").get<std::string>();
    if (!c.gt && !c.ge && !c.lt && !c.le && !c.above_corpus_mean && !c.ge_var && !c.gt_var)
        throw Error("parse", "rule condition on " + c.variable + " has no comparison");
    return c;
}

nlohmann::json condition_to_json(const Condition& c) {
    nlohmann::json j;
    if (c.is_max) return {{"max", c.variable}};
    if (c.is_min) return {{"min", c.variable}};
    j["var"] = c.variable;
    if (c.gt) j["gt"] = *c.gt;
    if (c.ge) j["ge"] = *c.ge;
    if (c.lt) j["lt"] = *c.lt;
    if (c.le) j["le"] = *c.le;
    if (c.above_corpus_mean) j["above_corpus_mean"] = *c.above_corpus_mean;
    if (c.ge_var) j["ge_var"] = *c.ge_var;
    if (c.gt_var) j["gt_var"] = *c.gt_var;
    return j;
}

}  // namespace

TaxonomyRules parse_rules(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", std::string("taxonomy rules JSON: ") + e.what());
    }
    try {
        TaxonomyRules rules;
        for (const auto& jr : j.at("rules")) {
            TaxonomyRule rule;
            const auto label = parse_figure_label(jr.at("label").get<std::string>());
            if (!label)
                throw Error("parse", "unknown figure label: " + jr.at("label").get<std::string>());
            rule.label = *label;
            if (jr.contains("when"))
                for (const auto& jc : jr.at("when")) rule.conditions.push_back(condition_from_json(jc));
            rules.rules.push_back(std::move(rule));
        }
        if (rules.rules.empty()) throw Error("parse", "taxonomy rules list is empty");
        return rules;
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", std::string("taxonomy rules JSON: ") + e.what());
    }
}

std::string rules_to_json(const TaxonomyRules& rules) {
    nlohmann::json j;
    j["rules"] = nlohmann::json::array();
    for (const TaxonomyRule& rule : rules.rules) {
        nlohmann::json jr;
        jr["label"] = to_string(rule.label);
        if (!rule.conditions.empty()) {
            jr["when"] = nlohmann::json::array();
            for (const Condition& c : rule.conditions) jr["when"].push_back(condition_to_json(c));
        }
        j["rules"].push_back(jr);
    }
    return j.dump(2) + "\n";
}

TaxonomyRules default_walker_rules() {
    TaxonomyRules r;
    r.rules.push_back({FigureLabel::SmartphoneZombie,
                       {Condition{.variable = "pct_screen_walk", .is_max = true},
                        Condition{.variable = "pct_screen_walk", .gt = 0.50}}});
    r.rules.push_back({FigureLabel::PostFlaneur,
                       {Condition{.variable = "pct_wander_walk", .is_max = true},
                        Condition{.variable = "pct_screen_walk", .lt = 0.25}}});
    r.rules.push_back({FigureLabel::DestinationOriented,
                       {Condition{.variable = "pct_wander_walk", .is_min = true},
                        Condition{.variable = "pct_screen_walk", .is_min = true},
                        Condition{.variable = "walking_speed", .above_corpus_mean = true}}});
    r.rules.push_back({FigureLabel::SecondDegreeZombie,
                       {Condition{.variable = "pct_screen_walk", .ge = 0.35, .lt = 0.50},
                        Condition{.variable = "pct_wander_walk", .lt = 0.25}}});
    r.rules.push_back({FigureLabel::InBetween, {}});
    return r;
}

TaxonomyRules default_walkstop_rules() {
    TaxonomyRules r;
    r.rules.push_back({FigureLabel::ImmersedZombie,
                       {Condition{.variable = "pct_screen_walk", .gt = 0.50},
                        Condition{.variable = "pct_screen_stat", .gt = 0.50}}});
    r.rules.push_back({FigureLabel::ImmersedPostFlaneur,
                       {Condition{.variable = "pct_wander_walk", .ge = 0.40},
                        Condition{.variable = "pct_screen_stat", .gt = 0.50}}});
    r.rules.push_back({FigureLabel::StationaryPostFlaneur,
                       {Condition{.variable = "pct_wander_walk", .ge = 0.40},
                        Condition{.variable = "pct_wander_stat", .ge_var = "pct_screen_stat"}}});
    r.rules.push_back({FigureLabel::Disinterested,
                       {Condition{.variable = "pct_wander_walk", .lt = 0.25},
                        Condition{.variable = "pct_screen_walk", .lt = 0.25},
                        Condition{.variable = "pct_screen_stat", .gt_var = "pct_screen_walk"}}});
    r.rules.push_back({FigureLabel::Unclassified, {}});
    return r;
}

namespace {

struct CentroidView {
    const ClusterModel* model = nullptr;

    // Clustered variables read from the centroid, carried ones from their
    // per-cluster means; both are original units.
    Scalar value(int cluster, const std::string& variable) const {
        const auto& vars = model->config.variables;
        const auto it = std::find(vars.begin(), vars.end(), variable);
        if (it != vars.end())
            return model->centroids[static_cast<std::size_t>(cluster)][it - vars.begin()];
        const auto carried = model->carried.find(variable);
        if (carried != model->carried.end())
            return carried->second[static_cast<std::size_t>(cluster)];
        throw Error("bad_input", "rule variable not in cluster model: " + variable);
    }
};

}  // namespace

std::map<int, FigureLabel> label_clusters(const ClusterModel& model, const TaxonomyRules& rules,
                                          const CorpusStats& corpus,
                                          std::vector<std::string>* log) {
    if (model.k < 1) throw Error("bad_input", "cluster model is empty");
    const CentroidView view{&model};

    auto satisfies = [&](const Condition& c, int cluster) {
        const Scalar v = view.value(cluster, c.variable);
        if (c.is_max) {
            for (int other = 0; other < model.k; ++other)
                if (other != cluster && view.value(other, c.variable) > v) return false;
            return true;
        }
        if (c.is_min) {
            for (int other = 0; other < model.k; ++other)
                if (other != cluster && view.value(other, c.variable) < v) return false;
            return true;
        }
        if (c.gt && !(v > *c.gt)) return false;
        if (c.ge && !(v >= *c.ge)) return false;
        if (c.lt && !(v < *c.lt)) return false;
        if (c.le && !(v <= *c.le)) return false;
        if (c.above_corpus_mean) {
            if (c.variable != "walking_speed")
                throw Error("bad_input", "above_corpus_mean applies to walking_speed only");
            const bool above = v > corpus.mean_speed;
            if (above != *c.above_corpus_mean) return false;
        }
        if (c.ge_var && !(v >= view.value(cluster, *c.ge_var))) return false;
        if (c.gt_var && !(v > view.value(cluster, *c.gt_var))) return false;
        return true;
    };

    // Margin of victory on the rule's extremum conditions, used only to
    // break exact ties between clusters matching the same max/min rule.
    auto margin = [&](const TaxonomyRule& rule, int cluster) {
        Scalar total = 0.0;
        for (const Condition& c : rule.conditions) {
            if (!c.is_max && !c.is_min) continue;
            Scalar best_other = c.is_max ? -std::numeric_limits<Scalar>::infinity()
                                         : std::numeric_limits<Scalar>::infinity();
            for (int other = 0; other < model.k; ++other) {
                if (other == cluster) continue;
                const Scalar ov = view.value(other, c.variable);
                best_other = c.is_max ? std::max(best_other, ov) : std::min(best_other, ov);
            }
            if (model.k > 1)
                total += c.is_max ? view.value(cluster, c.variable) - best_other
                                  : best_other - view.value(cluster, c.variable);
        }
        return total;
    };

    std::map<int, FigureLabel> labels;
    for (const TaxonomyRule& rule : rules.rules) {
        std::vector<int> candidates;
        for (int c = 0; c < model.k; ++c) {
            if (labels.count(c)) continue;
            bool ok = true;
            for (const Condition& cond : rule.conditions)
                if (!satisfies(cond, c)) {
                    ok = false;
                    break;
                }
            if (ok) candidates.push_back(c);
        }
        const bool extremum = std::any_of(rule.conditions.begin(), rule.conditions.end(),
                                          [](const Condition& c) { return c.is_max || c.is_min; });
        if (extremum && candidates.size() > 1) {
            int winner = candidates.front();
            Scalar best = margin(rule, winner);
            for (std::size_t i = 1; i < candidates.size(); ++i) {
                const Scalar m = margin(rule, candidates[i]);
                if (m > best) {
                    best = m;
                    winner = candidates[i];
                }
            }
            if (log) {
                std::string msg = "rule " + to_string(rule.label) + ": clusters";
                for (int c : candidates) msg += " " + std::to_string(c);
                msg += " tie; assigned to cluster " + std::to_string(winner) +
                       " by larger margin";
                log->push_back(msg);
            }
            labels[winner] = rule.label;
        } else {
            for (int c : candidates) labels[c] = rule.label;
        }
    }
    for (int c = 0; c < model.k; ++c)
        if (!labels.count(c)) labels[c] = FigureLabel::Unclassified;
    return labels;
}

namespace {

std::string fmt2(Scalar v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

struct GroupAccum {
    long n = 0;
    std::vector<Scalar> speeds;
    Scalar screen_sum = 0.0;
    Scalar wander_sum = 0.0;

    void add(const FeatureVector& f) {
        ++n;
        speeds.push_back(f.walking_speed);
        screen_sum += f.pct_screen_walk;
        wander_sum += f.pct_wander_walk;
    }

    std::vector<std::string> row(const std::string& name, const std::string& code,
                                 long total) const {
        Scalar mean = 0.0, sd = 0.0;
        if (n > 0) {
            for (Scalar s : speeds) mean += s;
            mean /= static_cast<Scalar>(n);
            if (n > 1) {
                for (Scalar s : speeds) sd += (s - mean) * (s - mean);
                sd = std::sqrt(sd / static_cast<Scalar>(n - 1));
            }
        }
        return {name,
                code,
                std::to_string(n),
                fmt2(total > 0 ? 100.0 * static_cast<Scalar>(n) / static_cast<Scalar>(total) : 0.0),
                n > 0 ? fmt2(mean) : "",
                n > 1 ? fmt2(sd) : "",
                n > 0 ? fmt2(100.0 * screen_sum / static_cast<Scalar>(n)) : "",
                n > 0 ? fmt2(100.0 * wander_sum / static_cast<Scalar>(n)) : ""};
    }
};

bool is_pf(FigureLabel l) {
    return l == FigureLabel::PostFlaneur || l == FigureLabel::StationaryPostFlaneur ||
           l == FigureLabel::ImmersedPostFlaneur;
}

bool is_sz(FigureLabel l) {
    return l == FigureLabel::SmartphoneZombie || l == FigureLabel::SecondDegreeZombie ||
           l == FigureLabel::ImmersedZombie;
}

}  // namespace

FigureSummary figure_summary(const std::vector<TrajectoryRecord>& records,
                             const std::vector<FeatureVector>& features,
                             const std::map<std::string, FigureLabel>& label_per_record) {
    std::map<std::string, const TrajectoryRecord*> record_by_id;
    for (const TrajectoryRecord& r : records) record_by_id[r.id] = &r;
    std::map<std::string, const FeatureVector*> features_by_id;
    for (const FeatureVector& f : features) features_by_id[f.record_id] = &f;

    for (const auto& [id, _] : label_per_record)
        if (!record_by_id.count(id) || !features_by_id.count(id))
            throw Error("id_mismatch", "labeled record without record/features: " + id);

    const long total = static_cast<long>(label_per_record.size());
    std::map<FigureLabel, GroupAccum> per_label;
    GroupAccum pf_all, sz_all;
    for (const auto& [id, label] : label_per_record) {
        const FeatureVector& f = *features_by_id.at(id);
        per_label[label].add(f);
        if (is_pf(label)) pf_all.add(f);
        if (is_sz(label)) sz_all.add(f);
    }

    FigureSummary summary;
    const std::vector<std::string> header = {"figure",     "code",       "n",
                                             "share_pct",  "speed_mean", "speed_sd",
                                             "screen_walk_pct", "wander_walk_pct"};
    summary.figures.name = "figures";
    summary.figures.header = header;
    for (FigureLabel label : kAllLabels) {
        const auto it = per_label.find(label);
        if (it == per_label.end()) continue;
        summary.figures.rows.push_back(it->second.row(to_string(label), short_code(label), total));
    }

    summary.umbrella.name = "figures_pooled";
    summary.umbrella.header = header;
    summary.umbrella.rows.push_back(pf_all.row("POST_FLANEUR_ALL", "Pf", total));
    summary.umbrella.rows.push_back(sz_all.row("SMARTPHONE_ZOMBIE_ALL", "Sz", total));

    // Column-normalized cross-tabs: each cell is the share of that column's
    // records carrying the row's label.
    const std::array<AgeGroup, 4> ages = {AgeGroup::Teenager, AgeGroup::YoungAdult,
                                          AgeGroup::Adult, AgeGroup::Elderly};
    std::map<AgeGroup, long> age_totals;
    std::map<FigureLabel, std::map<AgeGroup, long>> age_cells;
    const std::array<ActivityGroup, 4> groups = {ActivityGroup::G1, ActivityGroup::G2,
                                                 ActivityGroup::G3, ActivityGroup::G4};
    std::map<ActivityGroup, long> group_totals;
    std::map<FigureLabel, std::map<ActivityGroup, long>> group_cells;
    for (const auto& [id, label] : label_per_record) {
        const TrajectoryRecord& r = *record_by_id.at(id);
        ++age_totals[r.age_group];
        ++age_cells[label][r.age_group];
        for (ActivityGroup g : activity_groups(r.activities)) {
            ++group_totals[g];
            ++group_cells[label][g];
        }
    }

    summary.by_age.name = "figures_by_age";
    summary.by_age.header = {"figure", "teenager", "young_adult", "adult", "elderly"};
    for (FigureLabel label : kAllLabels) {
        if (!per_label.count(label)) continue;
        std::vector<std::string> row = {to_string(label)};
        for (AgeGroup age : ages) {
            const long denom = age_totals.count(age) ? age_totals.at(age) : 0;
            const long cell =
                age_cells.count(label) && age_cells.at(label).count(age) ? age_cells.at(label).at(age) : 0;
            row.push_back(denom > 0 ? fmt2(100.0 * cell / static_cast<Scalar>(denom)) : "");
        }
        summary.by_age.rows.push_back(row);
    }
    {
        std::vector<std::string> row = {"records"};
        for (AgeGroup age : ages)
            row.push_back(std::to_string(age_totals.count(age) ? age_totals.at(age) : 0));
        summary.by_age.rows.push_back(row);
    }

    summary.by_activity.name = "figures_by_activity";
    summary.by_activity.header = {"figure", "listening_speaking", "typing_reading",
                                  "photo_video_navigating", "holding_checking"};
    for (FigureLabel label : kAllLabels) {
        if (!per_label.count(label)) continue;
        std::vector<std::string> row = {to_string(label)};
        for (ActivityGroup g : groups) {
            const long denom = group_totals.count(g) ? group_totals.at(g) : 0;
            const long cell =
                group_cells.count(label) && group_cells.at(label).count(g) ? group_cells.at(label).at(g) : 0;
            row.push_back(denom > 0 ? fmt2(100.0 * cell / static_cast<Scalar>(denom)) : "");
        }
        summary.by_activity.rows.push_back(row);
    }
    {
        std::vector<std::string> row = {"records"};
        for (ActivityGroup g : groups)
            row.push_back(std::to_string(group_totals.count(g) ? group_totals.at(g) : 0));
        summary.by_activity.rows.push_back(row);
    }

    return summary;
}

void write_figure_labels_csv(const std::map<std::string, FigureLabel>& label_per_record,
                             std::ostream& out) {
    out << "record_id,figure\n";
    for (const auto& [id, label] : label_per_record) out << id << ',' << to_string(label) << '\n';
}

std::map<std::string, FigureLabel> read_figure_labels_csv(std::istream& in) {
    std::map<std::string, FigureLabel> labels;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = csv::split_line(line);
        if (lineno == 1 && !fields.empty() && fields[0] == "record_id") continue;
        if (fields.size() != 2)
            throw Error("parse", "labels line " + std::to_string(lineno) + ": expected 2 fields");
        const auto label = parse_figure_label(fields[1]);
        if (!label)
            throw Error("parse", "labels line " + std::to_string(lineno) + ": unknown figure");
        labels[fields[0]] = *label;
    }
    return labels;
}

}  // namespace gazewalk

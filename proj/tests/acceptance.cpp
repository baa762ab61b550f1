// End-to-end acceptance checks. Each criterion prints exactly one
// "criterion N: PASS|FAIL" line; the process exit code is the number of
// failing criteria. Run from the repository root so data/ resolves.
#include "gazewalk/cluster.hpp"
#include "gazewalk/features.hpp"
#include "gazewalk/gaze.hpp"
#include "gazewalk/grid.hpp"
#include "gazewalk/io.hpp"
#include "gazewalk/pipeline.hpp"
#include "gazewalk/record.hpp"
#include "gazewalk/stats.hpp"
#include "gazewalk/synth.hpp"
#include "gazewalk/taxonomy.hpp"
#include "helpers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace gazewalk;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void run_criterion(int number, const std::function<std::string()>& body) {
    // body returns "" on success, else a short failure reason
    std::string verdict;
    try {
        verdict = body();
    } catch (const std::exception& e) {
        verdict = std::string("exception: ") + e.what();
    }
    if (verdict.empty()) {
        std::printf("criterion %d: PASS\n", number);
    } else {
        std::printf("criterion %d: FAIL (%s)\n", number, verdict.c_str());
        ++failures;
    }
    std::fflush(stdout);
}

double best_of_ms(int repeats, const std::function<void()>& work) {
    double best = 1e9;
    for (int i = 0; i < repeats; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        work();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buffer[256];
    std::snprintf(buffer, sizeof(buffer), pattern, a, b, c);
    return buffer;
}

// Shared corpus for criteria 4, 5 and 9: the bundled seed-pinned dataset,
// read back through the same CSV path the CLI uses.
struct CorpusFixture {
    std::vector<TrajectoryRecord> records;
    std::vector<FeatureVector> features;
    std::vector<FeatureVector> walker_features, walkstop_features;
    ClusterModel walkers, walkstop;
    std::map<std::string, FigureLabel> truth;
    CorpusStats corpus_stats;
    double cluster_seconds = 0.0;
    std::string error;  // non-empty when loading failed
};

CorpusFixture load_corpus() {
    CorpusFixture fx;
    try {
        std::ifstream samples("data/corpus_samples.csv"), metadata("data/corpus_metadata.csv");
        if (!samples || !metadata) {
            fx.error = "bundled corpus missing under data/";
            return fx;
        }
        const RunConfig config = default_run_config();
        const auto t0 = std::chrono::steady_clock::now();
        const ParseResult parsed = parse_records_csv(samples, metadata);
        const EligibilityResult elig =
            filter_eligible(parsed.records, config.filter.min_path, config.filter.runner_speed);
        fx.records = elig.eligible;
        fx.features = extract_features(fx.records);
        for (const FeatureVector& f : fx.features)
            (f.has_stops() ? fx.walkstop_features : fx.walker_features).push_back(f);
        fx.walkers = cluster(fx.walker_features, config.walkers);
        fx.walkstop = cluster(fx.walkstop_features, config.walk_stop);
        const auto t1 = std::chrono::steady_clock::now();
        fx.cluster_seconds = std::chrono::duration<double>(t1 - t0).count();

        Scalar speed_sum = 0.0;
        for (const FeatureVector& f : fx.features) speed_sum += f.walking_speed;
        fx.corpus_stats.mean_speed = speed_sum / static_cast<Scalar>(fx.features.size());

        // ground truth comes from regenerating the bundled corpus at its seed
        fx.truth = generate(default_area(), default_archetypes(), config.seed).truth;
    } catch (const std::exception& e) {
        fx.error = e.what();
    }
    return fx;
}

// Design targets straight from the generator archetypes: gaze fractions in
// the model's variable order plus the speed mean.
struct Target {
    FigureLabel name = FigureLabel::Unclassified;
    VecX gaze;
    Scalar speed = 0.0;
};

std::vector<Target> targets_for(const std::vector<std::string>& variables, bool walk_stop) {
    std::vector<Target> targets;
    for (const Archetype& a : default_archetypes()) {
        if (a.count == 0 || a.screen_stat.has_value() != walk_stop) continue;
        Target t;
        t.name = a.name;
        t.gaze.resize(static_cast<Eigen::Index>(variables.size()));
        for (std::size_t v = 0; v < variables.size(); ++v) {
            const std::string& name = variables[v];
            Scalar mean = 0.0;
            if (name == "pct_screen_walk") mean = a.screen_walk.mean;
            else if (name == "pct_wander_walk") mean = a.wander_walk.mean;
            else if (name == "pct_screen_stat") mean = a.screen_stat->mean;
            else if (name == "pct_wander_stat") mean = a.wander_stat->mean;
            t.gaze[static_cast<Eigen::Index>(v)] = mean;
        }
        t.speed = a.speed.mean;
        targets.push_back(t);
    }
    return targets;
}

// Nearest-centroid match per target; requires a bijection and per-variable
// tolerances (fraction_tol on gaze shares, speed_tol on the carried speed).
// Fills matched (target index -> cluster index) on success.
std::string match_centroids(const ClusterModel& model, const std::vector<Target>& targets,
                            Scalar fraction_tol, Scalar speed_tol,
                            std::map<std::size_t, int>* matched = nullptr) {
    if (static_cast<std::size_t>(model.k) != targets.size())
        return fmt("k=%.0f, expected %.0f", model.k, static_cast<double>(targets.size()));
    const auto speed_it = model.carried.find("walking_speed");
    if (speed_it == model.carried.end()) return "carried walking_speed missing";

    std::set<int> used;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        int best = -1;
        Scalar best_d = 0.0;
        for (int c = 0; c < model.k; ++c) {
            const Scalar d = (model.centroids[c] - targets[t].gaze).cwiseAbs().sum();
            if (best < 0 || d < best_d) {
                best = c;
                best_d = d;
            }
        }
        if (!used.insert(best).second) return "two targets matched the same cluster";
        const VecX diff = (model.centroids[best] - targets[t].gaze).cwiseAbs();
        if (diff.maxCoeff() > fraction_tol)
            return fmt("gaze centroid off by %.3f (tol %.3f)", diff.maxCoeff(), fraction_tol);
        const Scalar speed_diff = std::abs(speed_it->second[best] - targets[t].speed);
        if (speed_diff > speed_tol)
            return fmt("speed off by %.3f (tol %.3f)", speed_diff, speed_tol);
        if (matched) (*matched)[t] = best;
    }
    return "";
}

std::optional<Scalar> table_value(const Table& table, const std::string& row_key,
                                  const std::string& column) {
    const auto col_it = std::find(table.header.begin(), table.header.end(), column);
    if (col_it == table.header.end()) return std::nullopt;
    const std::size_t col = static_cast<std::size_t>(col_it - table.header.begin());
    for (const auto& row : table.rows)
        if (!row.empty() && row[0] == row_key && col < row.size()) return std::stod(row[col]);
    return std::nullopt;
}

Scalar distance_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 d = b - a;
    const Scalar len2 = d.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const Scalar t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    return (p - (a + t * d)).norm();
}

Scalar top_decile_cut(const GridField& field) {
    std::vector<Scalar> values;
    for (int r = 0; r < field.nrows; ++r)
        for (int c = 0; c < field.ncols; ++c)
            if (field.at(r, c) != field.nodata) values.push_back(field.at(r, c));
    std::sort(values.begin(), values.end());
    return values[static_cast<std::size_t>(0.9 * static_cast<double>(values.size()))];
}

}  // namespace

int main() {
    // 1. sample-size formula hits the reference value instantly
    run_criterion(1, [] {
        long n = 0;
        const double ms = best_of_ms(5, [&] {
            n = cochran_n({.population = 350, .confidence = 0.90, .precision = 0.05,
                           .proportion = 0.5});
        });
        if (n != 153) return fmt("n=%.0f, expected 153", static_cast<double>(n));
        if (ms >= 1.0) return fmt("took %.3f ms", ms);
        return std::string();
    });

    // 2. coder-disagreement rates over 153 double-coded records
    run_criterion(2, [] {
        const std::vector<std::string> attributes = {"age_group", "gender", "activity",
                                                     "companions"};
        Coding a, b;
        for (int i = 0; i < 153; ++i) {
            char id[8];
            std::snprintf(id, sizeof(id), "r%03d", i);
            for (const std::string& attr : attributes) a[id][attr] = "base";
            b[id] = a[id];
        }
        // 6, 3, 2 and 1 differing records per attribute
        for (int i = 0; i < 6; ++i) b["r00" + std::to_string(i)]["age_group"] = "other";
        for (int i = 0; i < 3; ++i) b["r01" + std::to_string(i)]["gender"] = "other";
        for (int i = 0; i < 2; ++i) b["r02" + std::to_string(i)]["activity"] = "other";
        b["r030"]["companions"] = "other";

        std::map<std::string, Scalar> rates;
        const double ms =
            best_of_ms(5, [&] { rates = disagreement_rates(a, b, attributes); });
        const std::map<std::string, Scalar> expected = {{"age_group", 3.92},
                                                        {"gender", 1.96},
                                                        {"activity", 1.31},
                                                        {"companions", 0.65}};
        for (const auto& [attr, want] : expected)
            if (round2(rates.at(attr)) != want)
                return attr + fmt(": %.2f, expected %.2f", round2(rates.at(attr)), want);
        if (ms >= 1.0) return fmt("took %.3f ms", ms);
        return std::string();
    });

    // 3. intercept-count shares from the bundled counts file
    run_criterion(3, [] {
        std::ifstream in("data/intercept_counts.csv");
        if (!in) return std::string("data/intercept_counts.csv missing");
        const auto counts = read_counts_csv(in);
        const std::vector<std::pair<std::optional<AgeGroup>, Scalar>> expected = {
            {std::nullopt, 7.83},
            {AgeGroup::Teenager, 22.53},
            {AgeGroup::YoungAdult, 24.62},
            {AgeGroup::Adult, 4.79},
            {AgeGroup::Elderly, 2.69}};
        for (const auto& [age, want] : expected) {
            const Scalar got = smartphone_share(counts, age);
            if (std::abs(got - want) > 0.01)
                return fmt("share %.4f, expected %.2f +/- 0.01", got, want);
        }
        return std::string();
    });

    const CorpusFixture fx = load_corpus();

    // 4. cluster-count and centroid recovery on the bundled corpus
    run_criterion(4, [&fx] {
        if (!fx.error.empty()) return fx.error;
        if (fx.walker_features.size() != 257 || fx.walkstop_features.size() != 93)
            return fmt("split %.0f/%.0f, expected 257/93",
                       static_cast<double>(fx.walker_features.size()),
                       static_cast<double>(fx.walkstop_features.size()));
        if (fx.cluster_seconds >= 30.0) return fmt("took %.1f s", fx.cluster_seconds);
        if (!fx.walkers.avg_silhouette || *fx.walkers.avg_silhouette < 0.5)
            return fmt("walker silhouette %.3f < 0.5",
                       fx.walkers.avg_silhouette.value_or(-1.0));
        if (!fx.walkstop.avg_silhouette || *fx.walkstop.avg_silhouette < 0.5)
            return fmt("walk-stop silhouette %.3f < 0.5",
                       fx.walkstop.avg_silhouette.value_or(-1.0));
        std::string verdict = match_centroids(
            fx.walkers, targets_for(fx.walkers.config.variables, false), 0.08, 0.1);
        if (!verdict.empty()) return "walkers: " + verdict;
        verdict = match_centroids(fx.walkstop,
                                  targets_for(fx.walkstop.config.variables, true), 0.08, 0.1);
        if (!verdict.empty()) return "walk-stop: " + verdict;
        return std::string();
    });

    // 5. figure labeling, per-figure recovery and pooled summary table
    run_criterion(5, [&fx] {
        if (!fx.error.empty()) return fx.error;

        const auto walker_labels =
            label_clusters(fx.walkers, default_walker_rules(), fx.corpus_stats);
        const auto walkstop_labels =
            label_clusters(fx.walkstop, default_walkstop_rules(), fx.corpus_stats);

        // the clusters matching the flaneur/zombie design targets carry those labels
        const auto walker_targets = targets_for(fx.walkers.config.variables, false);
        std::map<std::size_t, int> matched;
        const std::string verdict =
            match_centroids(fx.walkers, walker_targets, 0.08, 0.1, &matched);
        if (!verdict.empty()) return "walkers: " + verdict;
        for (std::size_t t = 0; t < walker_targets.size(); ++t) {
            const FigureLabel want = walker_targets[t].name;
            if (want != FigureLabel::PostFlaneur && want != FigureLabel::SmartphoneZombie)
                continue;
            if (walker_labels.at(matched.at(t)) != want)
                return "cluster for " + to_string(want) + " labeled " +
                       to_string(walker_labels.at(matched.at(t)));
        }

        std::map<std::string, FigureLabel> predicted;
        for (const auto& [id, c] : fx.walkers.assignments) predicted[id] = walker_labels.at(c);
        for (const auto& [id, c] : fx.walkstop.assignments)
            predicted[id] = walkstop_labels.at(c);

        // >= 95% of each figure's records recover their generating label
        std::map<FigureLabel, std::pair<int, int>> recovery;  // label -> {hit, total}
        for (const auto& [id, truth_label] : fx.truth) {
            const auto it = predicted.find(id);
            if (it == predicted.end()) return "no prediction for " + id;
            auto& [hit, total] = recovery[truth_label];
            ++total;
            if (it->second == truth_label) ++hit;
        }
        for (const auto& [label, counts] : recovery)
            if (counts.first < 0.95 * counts.second)
                return to_string(label) +
                       fmt(" recovery %.0f/%.0f", static_cast<double>(counts.first),
                           static_cast<double>(counts.second));

        // pooled umbrella rows sit on the reference summary within tolerance
        const FigureSummary summary = figure_summary(fx.records, fx.features, predicted);
        const struct {
            const char* row;
            const char* column;
            Scalar want, tol;
        } checks[] = {
            {"POST_FLANEUR_ALL", "share_pct", 22.29, 3.0},
            {"POST_FLANEUR_ALL", "speed_mean", 0.93, 0.05},
            {"POST_FLANEUR_ALL", "screen_walk_pct", 10.16, 3.0},
            {"POST_FLANEUR_ALL", "wander_walk_pct", 77.26, 3.0},
            {"SMARTPHONE_ZOMBIE_ALL", "share_pct", 31.43, 3.0},
            {"SMARTPHONE_ZOMBIE_ALL", "speed_mean", 1.13, 0.05},
            {"SMARTPHONE_ZOMBIE_ALL", "screen_walk_pct", 62.46, 3.0},
            {"SMARTPHONE_ZOMBIE_ALL", "wander_walk_pct", 4.80, 3.0},
        };
        for (const auto& check : checks) {
            const auto got = table_value(summary.umbrella, check.row, check.column);
            if (!got) return std::string(check.row) + " " + check.column + " missing";
            if (std::abs(*got - check.want) > check.tol)
                return std::string(check.row) + " " + check.column +
                       fmt(" %.2f, expected %.2f +/- %.2f", *got, check.want, check.tol);
        }
        return std::string();
    });

    // 6. exact equivalence with brute-force clustering oracles
    run_criterion(6, [] {
        int silhouettes_checked = 0;
        for (int dataset = 0; dataset < 100; ++dataset) {
            std::mt19937_64 gen(9000 + static_cast<std::uint64_t>(dataset));
            const int n = 2 + static_cast<int>(gen() % 11);
            const int dims = 1 + static_cast<int>(gen() % 3);
            std::normal_distribution<Scalar> normal(0.0, 1.0);
            MatX points(n, dims);
            for (int i = 0; i < n; ++i)
                for (int d = 0; d < dims; ++d) points(i, d) = normal(gen);

            const PreClusterResult pre = pre_cluster(points, 0.0);
            const Dendrogram dendrogram = agglomerate(pre.sub_clusters);
            const auto oracle_merges = testutil::oracle_agglomerate(points);
            if (dendrogram.merges.size() != oracle_merges.size())
                return fmt("dataset %.0f: merge count", dataset);
            for (std::size_t m = 0; m < oracle_merges.size(); ++m) {
                const Merge& got = dendrogram.merges[m];
                const testutil::OracleMerge& want = oracle_merges[m];
                if (got.left != want.left || got.right != want.right ||
                    got.merged != want.merged ||
                    std::abs(got.distance - want.distance) > 1e-9)
                    return fmt("dataset %.0f: merge %.0f differs", dataset,
                               static_cast<double>(m));
            }
            for (int k = 1; k <= n; ++k) {
                const std::vector<int> cut = cut_dendrogram(dendrogram, k);
                std::vector<int> assignment(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i)
                    assignment[static_cast<std::size_t>(i)] =
                        cut[static_cast<std::size_t>(pre.membership[static_cast<std::size_t>(i)])];
                const std::vector<int> want = testutil::oracle_cut(n, oracle_merges, k);
                if (assignment != want)
                    return fmt("dataset %.0f: partition at k=%.0f", dataset, k);
                if (k >= 2) {
                    const auto got = silhouette_avg(points, assignment);
                    const Scalar want_s = testutil::oracle_silhouette(points, assignment);
                    if (!got || std::abs(*got - want_s) > 1e-12)
                        return fmt("dataset %.0f: silhouette at k=%.0f", dataset, k);
                    ++silhouettes_checked;
                }
            }
        }
        if (silhouettes_checked < 300) return std::string("silhouette family too small");
        return std::string();
    });

    // 7. pooled t-test against a permutation oracle, plus invariances
    run_criterion(7, [] {
        std::mt19937_64 gen(777);
        std::normal_distribution<Scalar> base(0.0, 1.0);
        std::vector<Scalar> a(30), b(30);
        for (Scalar& v : a) v = base(gen);
        for (Scalar& v : b) v = base(gen) + 0.55;

        const TTestResult pooled = t_test(a, b, TTestVariant::Pooled);
        const Scalar p_perm = testutil::permutation_p(a, b, 101, 1'000'000);
        if (std::abs(pooled.p - p_perm) >= 0.01)
            return fmt("p %.4f vs permutation %.4f", pooled.p, p_perm);

        auto transformed = [&](Scalar scale, Scalar shift) {
            std::vector<Scalar> ta(a), tb(b);
            for (Scalar& v : ta) v = v * scale + shift;
            for (Scalar& v : tb) v = v * scale + shift;
            return t_test(ta, tb, TTestVariant::Pooled);
        };
        const TTestResult scaled = transformed(3.7, 0.0);
        const TTestResult shifted = transformed(1.0, 11.0);
        if (std::abs(scaled.t - pooled.t) > 1e-10 || std::abs(scaled.p - pooled.p) > 1e-10)
            return std::string("scale invariance");
        if (std::abs(shifted.t - pooled.t) > 1e-10 || std::abs(shifted.p - pooled.p) > 1e-10)
            return std::string("shift invariance");
        const TTestResult swapped = t_test(b, a, TTestVariant::Pooled);
        if (std::abs(swapped.t + pooled.t) > 1e-12 || swapped.p != pooled.p)
            return std::string("swap invariance");

        // reference report: groups of 33 and 34 give 65 pooled degrees of freedom
        std::vector<Scalar> g1(33), g2(34);
        for (Scalar& v : g1) v = base(gen);
        for (Scalar& v : g2) v = base(gen) + 0.5;
        const TTestResult structural = t_test(g1, g2, TTestVariant::Pooled);
        if (structural.df != 65.0) return fmt("df %.1f, expected 65", structural.df);
        return std::string();
    });

    // 8. density surface conserves mass, support and linearity
    run_criterion(8, [] {
        const KernelSpec kernel{"quartic", 2.0};
        const Scalar cell = kernel.bandwidth / 10.0;
        const GridField base = make_field(Vec2(0.0, 0.0), cell, 220, 220, 0.0);
        const Vec2 center(22.0, 22.0);
        const Scalar weight = 3.5;
        const GridField field = kde({{center, weight}}, base, kernel, KdeMode::Normalized);

        Scalar mass = 0.0;
        for (int r = 0; r < field.nrows; ++r)
            for (int c = 0; c < field.ncols; ++c) {
                const Scalar v = field.at(r, c);
                mass += v * cell * cell;
                const Scalar d = (field.cell_center(r, c) - center).norm();
                if (d > kernel.bandwidth && v != 0.0)
                    return fmt("support leak at distance %.2f", d);
            }
        if (std::abs(mass - weight) > 0.01 * weight)
            return fmt("mass %.4f, expected %.2f +/- 1%%", mass, weight);

        const GridField doubled = kde({{center, 2.0 * weight}}, base, kernel);
        const GridField pair =
            kde({{center, weight}, {Vec2(30.0, 30.0), 1.25}}, base, kernel);
        const GridField lone = kde({{Vec2(30.0, 30.0), 1.25}}, base, kernel);
        for (int r = 0; r < field.nrows; ++r)
            for (int c = 0; c < field.ncols; ++c) {
                if (std::abs(doubled.at(r, c) - 2.0 * field.at(r, c)) > 1e-12)
                    return std::string("weight linearity");
                if (std::abs(pair.at(r, c) - field.at(r, c) - lone.at(r, c)) > 1e-12)
                    return std::string("superposition linearity");
            }
        return std::string();
    });

    // 9. screen attention concentrates on the gate corridors, wandering gaze
    //    around the landmark
    run_criterion(9, [&fx] {
        if (!fx.error.empty()) return fx.error;
        const ObservationArea area = default_area();
        const GridField base = field_for_area(area, 0.0);

        std::vector<RouteAttribute> screen_routes;
        std::vector<WeightedPoint> wander_points;
        for (std::size_t i = 0; i < fx.records.size(); ++i) {
            const TrajectoryRecord& r = fx.records[i];
            std::vector<Vec2> polyline;
            polyline.reserve(r.samples.size());
            for (const GazeSample& s : r.samples) {
                polyline.push_back(s.position);
                if (is_wandering(s.code)) wander_points.push_back({s.position, 1.0});
            }
            screen_routes.push_back({r.id, polyline, fx.features[i].pct_screen_walk});
        }
        const GridField screen = rasterize_mean(screen_routes, base);
        const GridField wander = kde(wander_points, base, KernelSpec{"quartic", 2.0});

        // corridors: within 4 m of a straight line between two gate midpoints
        std::vector<Vec2> gate_mids;
        for (const Gate& g : area.gates) gate_mids.push_back(g.midpoint());
        auto in_corridor = [&](const Vec2& p) {
            for (std::size_t i = 0; i < gate_mids.size(); ++i)
                for (std::size_t j = i + 1; j < gate_mids.size(); ++j)
                    if (distance_to_segment(p, gate_mids[i], gate_mids[j]) <= 4.0) return true;
            return false;
        };

        const Scalar screen_cut = top_decile_cut(screen);
        int top_cells = 0, top_in_corridor = 0;
        for (int r = 0; r < screen.nrows; ++r)
            for (int c = 0; c < screen.ncols; ++c) {
                const Scalar v = screen.at(r, c);
                if (v == screen.nodata || v < screen_cut) continue;
                ++top_cells;
                if (in_corridor(screen.cell_center(r, c))) ++top_in_corridor;
            }
        if (top_cells == 0) return std::string("empty screen top decile");
        const double corridor_rate = static_cast<double>(top_in_corridor) / top_cells;
        if (corridor_rate < 0.8)
            return fmt("corridor rate %.2f < 0.8", corridor_rate);

        // landmark ring: cell centers 3 to 5 m from the landmark centroid
        const Vec2 landmark = area.landmarks[0].centroid();
        const Scalar wander_cut = top_decile_cut(wander);
        int ring_cells = 0, ring_in_top = 0;
        for (int r = 0; r < wander.nrows; ++r)
            for (int c = 0; c < wander.ncols; ++c) {
                const Scalar d = (wander.cell_center(r, c) - landmark).norm();
                if (d < 3.0 || d > 5.0) continue;
                ++ring_cells;
                if (wander.at(r, c) >= wander_cut) ++ring_in_top;
            }
        if (ring_cells == 0) return std::string("empty landmark ring");
        const double ring_rate = static_cast<double>(ring_in_top) / ring_cells;
        if (ring_rate < 0.8) return fmt("landmark ring rate %.2f < 0.8", ring_rate);
        return std::string();
    });

    // 10. two identical runs produce byte-identical bundles
    run_criterion(10, [] {
        testutil::TempDir scratch("gw_acceptance");
        RunConfig config = default_run_config();
        config.out_dir = (scratch.path / "first").string();
        const RunResult first = run_pipeline(config);
        config.out_dir = (scratch.path / "second").string();
        const RunResult second = run_pipeline(config);
        if (first.outputs != second.outputs) return std::string("output lists differ");
        for (const std::string& rel : first.outputs) {
            const std::string bytes_a = testutil::slurp_file(scratch.path / "first" / rel);
            const std::string bytes_b = testutil::slurp_file(scratch.path / "second" / rel);
            if (bytes_a != bytes_b) return rel + " differs between runs";
        }
        return std::string();
    });

    return failures;
}

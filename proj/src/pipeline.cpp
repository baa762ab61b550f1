#include "gazewalk/pipeline.hpp"

#include "gazewalk/features.hpp"
#include "gazewalk/gaze.hpp"
#include "gazewalk/io.hpp"
#include "gazewalk/stats.hpp"
#include "gazewalk/taxonomy.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gazewalk {

namespace {

constexpr const char* kToolVersion = "0.1.0";

// ---------------------------------------------------------------------------
// SHA-256 (FIPS 180-4), self-contained so manifests need no extra dependency.

constexpr std::uint32_t kSha256K[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
    0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
    0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
    0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
    0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
    0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
    0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
    0xc67178f2};

struct Sha256 {
    std::uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                          0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    std::uint64_t total = 0;
    unsigned char buf[64];
    std::size_t fill = 0;

    static std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void block(const unsigned char* p) {
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            const std::uint32_t s0 =
                rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            const std::uint32_t s1 =
                rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3];
        std::uint32_t e = h[4], f = h[5], g = h[6], hh = h[7];
        for (int i = 0; i < 64; ++i) {
            const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            const std::uint32_t ch = (e & f) ^ (~e & g);
            const std::uint32_t t1 = hh + s1 + ch + kSha256K[i] + w[i];
            const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            const std::uint32_t t2 = s0 + maj;
            hh = g;
            g = f;
            f = e;
            e = d + t1;
            d = c;
            c = b;
            b = a;
            a = t1 + t2;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
        h[5] += f;
        h[6] += g;
        h[7] += hh;
    }

    void update(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        total += n;
        while (n > 0) {
            const std::size_t take = std::min(n, sizeof buf - fill);
            std::memcpy(buf + fill, p, take);
            fill += take;
            p += take;
            n -= take;
            if (fill == sizeof buf) {
                block(buf);
                fill = 0;
            }
        }
    }

    std::array<unsigned char, 32> finish() {
        const std::uint64_t bits = total * 8;
        const unsigned char one = 0x80;
        update(&one, 1);
        const unsigned char zero = 0x00;
        while (fill != 56) update(&zero, 1);
        unsigned char len[8];
        for (int i = 0; i < 8; ++i) len[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
        update(len, 8);
        std::array<unsigned char, 32> out;
        for (int i = 0; i < 8; ++i)
            for (int b = 0; b < 4; ++b)
                out[static_cast<std::size_t>(4 * i + b)] =
                    static_cast<unsigned char>(h[i] >> (24 - 8 * b));
        return out;
    }
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    Sha256 state;
    state.update(bytes.data(), bytes.size());
    const auto digest = state.finish();
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (unsigned char byte : digest) {
        out.push_back(hex[byte >> 4]);
        out.push_back(hex[byte & 0x0f]);
    }
    return out;
}

namespace {

namespace fs = std::filesystem;

nlohmann::json cluster_config_to_json(const ClusterConfig& c) {
    return {{"variables", c.variables},
            {"carry_variables", c.carry_variables},
            {"distance", c.distance},
            {"criterion", to_string(c.criterion)},
            {"k_range", {c.k_range.first, c.k_range.second}},
            {"pre_cluster_threshold", c.pre_cluster_threshold},
            {"standardize", c.standardize}};
}

ClusterConfig cluster_config_from_json(const nlohmann::json& j, ClusterConfig base) {
    if (j.contains("variables")) base.variables = j.at("variables").get<std::vector<std::string>>();
    if (j.contains("carry_variables"))
        base.carry_variables = j.at("carry_variables").get<std::vector<std::string>>();
    if (j.contains("distance")) base.distance = j.at("distance").get<std::string>();
    if (j.contains("criterion")) {
        const auto criterion = parse_criterion(j.at("criterion").get<std::string>());
        if (!criterion) throw Error("parse", "run config: unknown criterion");
        base.criterion = *criterion;
    }
    if (j.contains("k_range"))
        base.k_range = {j.at("k_range")[0].get<int>(), j.at("k_range")[1].get<int>()};
    if (j.contains("pre_cluster_threshold"))
        base.pre_cluster_threshold = j.at("pre_cluster_threshold").get<Scalar>();
    if (j.contains("standardize")) base.standardize = j.at("standardize").get<bool>();
    return base;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("missing_input", "cannot open input file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

RunConfig default_run_config() {
    RunConfig c;
    c.records = "data/corpus_samples.csv";
    c.metadata = "data/corpus_metadata.csv";
    c.area = "data/area_default.geojson";
    c.counts = "data/intercept_counts.csv";
    c.walkers.variables = {"pct_screen_walk", "pct_wander_walk"};
    c.walkers.carry_variables = {"walking_speed"};
    c.walkers.k_range = {1, 12};
    c.walk_stop.variables = {"pct_screen_walk", "pct_wander_walk", "pct_screen_stat",
                             "pct_wander_stat"};
    c.walk_stop.carry_variables = {"walking_speed"};
    c.walk_stop.k_range = {1, 12};
    c.out_dir = "out";
    c.seed = 2094;
    return c;
}

std::string run_config_to_json(const RunConfig& config) {
    nlohmann::json j;
    j["records"] = config.records;
    j["metadata"] = config.metadata;
    j["area"] = config.area;
    j["counts"] = config.counts;
    j["filter"] = {{"min_path_m", config.filter.min_path},
                   {"runner_speed", config.filter.runner_speed}};
    j["walkers"] = cluster_config_to_json(config.walkers);
    j["walk_stop"] = cluster_config_to_json(config.walk_stop);
    j["rules"] = config.rules;
    j["kernel"] = {{"shape", config.kernel.shape}, {"bandwidth", config.kernel.bandwidth}};
    j["out_dir"] = config.out_dir;
    j["seed"] = config.seed;
    return j.dump(2) + "\n";
}

RunConfig parse_run_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", std::string("run config JSON: ") + e.what());
    }
    RunConfig c = default_run_config();
    try {
        if (j.contains("records")) c.records = j.at("records").get<std::string>();
        if (j.contains("metadata")) c.metadata = j.at("metadata").get<std::string>();
        if (j.contains("area")) c.area = j.at("area").get<std::string>();
        if (j.contains("counts")) c.counts = j.at("counts").get<std::string>();
        if (j.contains("filter")) {
            const auto& f = j.at("filter");
            if (f.contains("min_path_m")) c.filter.min_path = f.at("min_path_m").get<Scalar>();
            if (f.contains("runner_speed"))
                c.filter.runner_speed = f.at("runner_speed").get<Scalar>();
        }
        if (j.contains("walkers")) c.walkers = cluster_config_from_json(j.at("walkers"), c.walkers);
        if (j.contains("walk_stop"))
            c.walk_stop = cluster_config_from_json(j.at("walk_stop"), c.walk_stop);
        if (j.contains("rules")) c.rules = j.at("rules").get<std::string>();
        if (j.contains("kernel")) {
            const auto& k = j.at("kernel");
            if (k.contains("shape")) c.kernel.shape = k.at("shape").get<std::string>();
            if (k.contains("bandwidth")) c.kernel.bandwidth = k.at("bandwidth").get<Scalar>();
        }
        if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", std::string("run config JSON: ") + e.what());
    }
    return c;
}

RunResult run_pipeline(const RunConfig& config) {
    std::vector<fs::path> written;
    std::vector<std::string> rel_names;
    nlohmann::json output_digests = nlohmann::json::object();

    auto emit = [&](const std::string& rel, const std::string& content) {
        const fs::path full = fs::path(config.out_dir) / rel;
        std::ofstream out(full, std::ios::binary);
        if (!out) throw Error("io", "cannot write " + full.string());
        out << content;
        out.close();
        if (!out) throw Error("io", "failed writing " + full.string());
        written.push_back(full);
        rel_names.push_back(rel);
        output_digests[rel] = sha256_hex(content);
    };
    auto cleanup = [&]() {
        for (const fs::path& p : written) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    };
    auto stage = [&](const char* name, auto&& body) {
        try {
            body();
        } catch (const Error& e) {
            cleanup();
            throw Error(e.kind(), std::string("stage ") + name + ": " + e.what());
        } catch (const std::exception& e) {
            cleanup();
            throw Error("pipeline", std::string("stage ") + name + ": " + e.what());
        }
    };

    // Inputs are read up front so a bad path aborts before anything exists.
    std::string records_text, metadata_text, area_text, counts_text, rules_text;
    stage("ingest", [&] {
        records_text = read_file(config.records);
        metadata_text = read_file(config.metadata);
        area_text = read_file(config.area);
        if (!config.counts.empty()) counts_text = read_file(config.counts);
        if (!config.rules.empty()) rules_text = read_file(config.rules);
        std::error_code ec;
        fs::create_directories(config.out_dir, ec);
        if (ec) throw Error("io", "cannot create output directory " + config.out_dir);
    });

    ParseResult parsed;
    ObservationArea area;
    stage("ingest", [&] {
        std::istringstream samples(records_text), metadata(metadata_text);
        parsed = parse_records_csv(samples, metadata);
        std::istringstream area_in(area_text);
        area = load_area(area_in);
        std::string warn_lines;
        for (const std::string& w : parsed.warnings) warn_lines += w + "\n";
        emit("ingest_warnings.txt", warn_lines);
    });

    EligibilityResult eligibility;
    stage("filter", [&] {
        eligibility =
            filter_eligible(parsed.records, config.filter.min_path, config.filter.runner_speed);
        std::string out = "record_id,reason\n";
        for (const Exclusion& e : eligibility.excluded)
            out += e.record_id + "," + to_string(e.reason) + "\n";
        emit("exclusions.csv", out);
    });
    const std::vector<TrajectoryRecord>& records = eligibility.eligible;

    std::vector<FeatureVector> features;
    stage("features", [&] {
        if (records.empty()) throw Error("bad_input", "no eligible records");
        features = extract_features(records);
        std::ostringstream out;
        write_features_csv(features, out);
        emit("features.csv", out.str());
    });

    std::vector<FeatureVector> walkers_features, walkstop_features;
    for (const FeatureVector& f : features)
        (f.has_stops() ? walkstop_features : walkers_features).push_back(f);

    ClusterModel walkers_model, walkstop_model;
    stage("cluster", [&] {
        if (walkers_features.empty()) throw Error("bad_input", "no walker-only records");
        if (walkstop_features.empty()) throw Error("bad_input", "no walk-stop records");
        walkers_model = cluster(walkers_features, config.walkers);
        walkstop_model = cluster(walkstop_features, config.walk_stop);
        emit("cluster_walkers.json", model_to_json(walkers_model));
        emit("cluster_walk_stop.json", model_to_json(walkstop_model));
    });

    std::map<std::string, FigureLabel> label_per_record;
    FigureSummary summary;
    stage("classify", [&] {
        TaxonomyRules walker_rules, walkstop_rules;
        if (config.rules.empty()) {
            walker_rules = default_walker_rules();
            walkstop_rules = default_walkstop_rules();
        } else {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(rules_text);
            } catch (const nlohmann::json::exception& e) {
                throw Error("parse", std::string("taxonomy rules JSON: ") + e.what());
            }
            if (!j.contains("walkers") || !j.contains("walk_stop"))
                throw Error("parse", "rule file needs 'walkers' and 'walk_stop' rule sets");
            walker_rules = parse_rules(j.at("walkers").dump());
            walkstop_rules = parse_rules(j.at("walk_stop").dump());
        }

        Scalar speed_sum = 0.0;
        for (const FeatureVector& f : features) speed_sum += f.walking_speed;
        const CorpusStats corpus{speed_sum / static_cast<Scalar>(features.size())};

        std::vector<std::string> log;
        const auto walker_labels = label_clusters(walkers_model, walker_rules, corpus, &log);
        const auto walkstop_labels = label_clusters(walkstop_model, walkstop_rules, corpus, &log);
        for (const auto& [id, cluster_idx] : walkers_model.assignments)
            label_per_record[id] = walker_labels.at(cluster_idx);
        for (const auto& [id, cluster_idx] : walkstop_model.assignments)
            label_per_record[id] = walkstop_labels.at(cluster_idx);

        std::string log_text;
        log_text += "walkers_model:\n";
        for (const auto& [cluster_idx, label] : walker_labels)
            log_text +=
                "  cluster " + std::to_string(cluster_idx) + " -> " + to_string(label) + "\n";
        log_text += "walk_stop_model:\n";
        for (const auto& [cluster_idx, label] : walkstop_labels)
            log_text +=
                "  cluster " + std::to_string(cluster_idx) + " -> " + to_string(label) + "\n";
        for (const std::string& line : log) log_text += line + "\n";
        emit("classify_log.txt", log_text);

        std::ostringstream labels_csv;
        write_figure_labels_csv(label_per_record, labels_csv);
        emit("figure_labels.csv", labels_csv.str());

        summary = figure_summary(records, features, label_per_record);
        auto emit_table = [&](const Table& table, const std::string& rel) {
            std::ostringstream out;
            write_table_csv(table, out);
            emit(rel, out.str());
        };
        emit_table(summary.figures, "figures.csv");
        emit_table(summary.umbrella, "figures_pooled.csv");
        emit_table(summary.by_age, "figures_by_age.csv");
        emit_table(summary.by_activity, "figures_by_activity.csv");
    });

    stage("summaries", [&] {
        if (counts_text.empty()) return;
        std::istringstream counts_in(counts_text);
        const auto counts = read_counts_csv(counts_in);
        const DescriptiveReport report = descriptive_report(counts, records);
        auto emit_table = [&](const Table& table, const std::string& rel) {
            std::ostringstream out;
            write_table_csv(table, out);
            emit(rel, out.str());
        };
        emit_table(report.smartphone_share, "report_smartphone_share.csv");
        emit_table(report.activity_shares, "report_activity_shares.csv");
        emit_table(report.companion_shares, "report_companion_shares.csv");
        emit_table(report.stop_behavior, "report_stop_behavior.csv");
        emit_table(report.gaze_aggregates, "report_gaze_aggregates.csv");
        emit_table(report.speed_aggregates, "report_speed_aggregates.csv");
    });

    stage("spatial", [&] {
        const GridField base = field_for_area(area, 0.0);

        std::vector<RouteAttribute> screen_routes, wander_routes;
        std::vector<WeightedPoint> route_points, wander_points, stop_points;
        for (std::size_t i = 0; i < records.size(); ++i) {
            const TrajectoryRecord& r = records[i];
            const FeatureVector& f = features[i];
            std::vector<Vec2> polyline;
            polyline.reserve(r.samples.size());
            for (const GazeSample& s : r.samples) polyline.push_back(s.position);
            screen_routes.push_back({r.id, polyline, f.pct_screen_walk});
            wander_routes.push_back({r.id, polyline, f.pct_wander_walk});
            for (const GazeSample& s : r.samples) {
                route_points.push_back({s.position, 1.0});
                if (is_wandering(s.code)) wander_points.push_back({s.position, 1.0});
            }
            for (const StopEpisode& e : detect_stops(r))
                if (e.screen_seconds > 0)
                    stop_points.push_back(
                        {e.centroid, static_cast<Scalar>(e.screen_seconds)});
        }

        const GridField screen_mean = rasterize_mean(screen_routes, base);
        const GridField wander_mean = rasterize_mean(wander_routes, base);
        const GridField density = kde(route_points, base, config.kernel, KdeMode::Normalized);
        const GridField wander_density =
            kde(wander_points, base, config.kernel, KdeMode::Normalized);
        const GridField stop_density =
            kde(stop_points, base, config.kernel, KdeMode::Normalized);

        auto emit_grid = [&](const GridField& field, const std::string& rel) {
            std::ostringstream out;
            export_ascii_grid(field, out);
            emit(rel, out.str());
        };
        emit_grid(screen_mean, "raster_screen_walk_mean.asc");
        emit_grid(wander_mean, "raster_wander_walk_mean.asc");
        emit_grid(density, "raster_route_density.asc");
        emit_grid(wander_density, "raster_wander_density.asc");
        emit_grid(stop_density, "raster_stop_screen_density.asc");

        std::ostringstream geo;
        export_geojson(screen_mean, geo);
        emit("raster_screen_walk_mean.geojson", geo.str());
    });

    RunResult result;
    stage("manifest", [&] {
        nlohmann::json manifest;
        manifest["tool"] = "gazewalk";
        manifest["version"] = kToolVersion;
        // The destination directory is not part of the run's identity; leaving
        // it out keeps identical runs byte-identical wherever they land.
        RunConfig echo = config;
        echo.out_dir = "";
        manifest["config"] = nlohmann::json::parse(run_config_to_json(echo));
        manifest["config_sha256"] = sha256_hex(run_config_to_json(echo));
        nlohmann::json inputs = nlohmann::json::object();
        inputs[config.records] = sha256_hex(records_text);
        inputs[config.metadata] = sha256_hex(metadata_text);
        inputs[config.area] = sha256_hex(area_text);
        if (!config.counts.empty()) inputs[config.counts] = sha256_hex(counts_text);
        if (!config.rules.empty()) inputs[config.rules] = sha256_hex(rules_text);
        manifest["inputs"] = inputs;
        manifest["outputs"] = output_digests;
        emit("manifest.json", manifest.dump(2) + "\n");
        result.outputs = rel_names;
    });
    return result;
}

}  // namespace gazewalk

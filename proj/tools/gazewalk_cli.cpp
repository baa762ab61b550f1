// gazewalk: batch analytics for gaze-coded pedestrian trajectories.
// Subcommands mirror the pipeline stages so every intermediate artifact can
// be produced and consumed standalone; `run` chains them with a manifest.

#include "gazewalk/cluster.hpp"
#include "gazewalk/features.hpp"
#include "gazewalk/grid.hpp"
#include "gazewalk/io.hpp"
#include "gazewalk/pipeline.hpp"
#include "gazewalk/record.hpp"
#include "gazewalk/stats.hpp"
#include "gazewalk/synth.hpp"
#include "gazewalk/taxonomy.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace gazewalk;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("missing_input", "cannot open input file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void spit(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io", "cannot write " + path.string());
    out << content;
}

// Global option state shared by all subcommands.
struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;

    RunConfig load_config() const {
        RunConfig config =
            config_path.empty() ? default_run_config() : parse_run_config(slurp(config_path));
        if (seed) config.seed = *seed;
        if (!out_dir.empty()) {
            config.out_dir = out_dir;
        } else if (config_path.empty()) {
            // No config file: the environment may supply the output root.
            if (const char* env = std::getenv("GAZEWALK_OUT")) config.out_dir = env;
        }
        return config;
    }

    fs::path out_path(const RunConfig& config, const std::string& name) const {
        std::error_code ec;
        fs::create_directories(config.out_dir, ec);
        return fs::path(config.out_dir) / name;
    }
};

ParseResult parse_input(const std::string& records, const std::string& metadata,
                        const std::string& format) {
    if (format == "jsonl") {
        std::istringstream in(slurp(records));
        return parse_records_jsonl(in);
    }
    if (metadata.empty())
        throw Error("bad_input", "csv input needs --metadata alongside --records");
    std::istringstream samples(slurp(records)), meta(slurp(metadata));
    return parse_records_csv(samples, meta);
}

// Wide CSV, header record_id,<attribute>...; one coded value per cell.
Coding read_coding_csv(const std::string& path) {
    std::istringstream in(slurp(path));
    std::string line;
    if (!std::getline(in, line)) throw Error("parse", path + ": empty coding file");
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string field;
        std::istringstream fields(s);
        while (std::getline(fields, field, ',')) out.push_back(field);
        if (!s.empty() && s.back() == ',') out.push_back("");
        return out;
    };
    const std::vector<std::string> header = split(line);
    if (header.size() < 2 || header[0] != "record_id")
        throw Error("parse", path + ": header must start with record_id");
    Coding coding;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> fields = split(line);
        if (fields.size() != header.size())
            throw Error("parse", path + ": row width differs from header");
        for (std::size_t i = 1; i < header.size(); ++i)
            coding[fields[0]][header[i]] = fields[i];
    }
    return coding;
}

std::string table_to_string(const Table& table) {
    std::ostringstream out;
    write_table_csv(table, out);
    return out.str();
}

void cmd_ingest(const GlobalOpts& global, const std::string& records,
                const std::string& metadata, const std::string& format,
                const std::string& area_path) {
    const RunConfig config = global.load_config();
    const ParseResult parsed = parse_input(records, metadata, format);

    std::vector<std::string> warnings = parsed.warnings;
    if (!area_path.empty()) {
        const ObservationArea area = load_area_file(area_path);
        for (const TrajectoryRecord& r : parsed.records) {
            const ValidationReport report = validate_record(r, &area);
            warnings.insert(warnings.end(), report.warnings.begin(), report.warnings.end());
        }
    }

    const EligibilityResult eligibility =
        filter_eligible(parsed.records, config.filter.min_path, config.filter.runner_speed);

    std::ostringstream samples_out, metadata_out;
    write_records_csv(eligibility.eligible, samples_out, metadata_out);
    spit(global.out_path(config, "eligible_samples.csv"), samples_out.str());
    spit(global.out_path(config, "eligible_metadata.csv"), metadata_out.str());

    std::string exclusions = "record_id,reason\n";
    for (const Exclusion& e : eligibility.excluded)
        exclusions += e.record_id + "," + to_string(e.reason) + "\n";
    spit(global.out_path(config, "exclusions.csv"), exclusions);

    std::string warning_text;
    for (const std::string& w : warnings) warning_text += w + "\n";
    spit(global.out_path(config, "ingest_warnings.txt"), warning_text);

    std::cout << "parsed " << parsed.records.size() << " records, " << eligibility.eligible.size()
              << " eligible, " << eligibility.excluded.size() << " excluded, " << warnings.size()
              << " warnings -> " << config.out_dir << "\n";
}

void cmd_features(const GlobalOpts& global, const std::string& records,
                  const std::string& metadata, const std::string& format, bool gross) {
    const RunConfig config = global.load_config();
    const ParseResult parsed = parse_input(records, metadata, format);
    FeatureOptions options;
    options.speed_mode = gross ? SpeedMode::Gross : SpeedMode::Net;
    const std::vector<FeatureVector> features = extract_features(parsed.records, options);
    std::ostringstream out;
    write_features_csv(features, out);
    spit(global.out_path(config, "features.csv"), out.str());
    std::cout << "extracted " << features.size() << " feature vectors -> " << config.out_dir
              << "/features.csv\n";
}

void cmd_cluster(const GlobalOpts& global, const std::string& features_path,
                 const std::string& subset, const std::vector<std::string>& variables,
                 const std::vector<std::string>& carry, const std::string& criterion,
                 std::optional<int> k_min, std::optional<int> k_max, std::optional<int> k_fixed,
                 std::optional<Scalar> threshold, std::optional<bool> standardize,
                 const std::string& model_name) {
    const RunConfig run = global.load_config();
    ClusterConfig config = subset == "walk_stop" ? run.walk_stop : run.walkers;
    if (!variables.empty()) config.variables = variables;
    if (!carry.empty()) config.carry_variables = carry;
    if (!criterion.empty()) {
        const auto parsed = parse_criterion(criterion);
        if (!parsed) throw Error("bad_input", "unknown criterion: " + criterion);
        config.criterion = *parsed;
    }
    if (k_min) config.k_range.first = *k_min;
    if (k_max) config.k_range.second = *k_max;
    if (k_fixed) config.k_range = {*k_fixed, *k_fixed};
    if (threshold) config.pre_cluster_threshold = *threshold;
    if (standardize) config.standardize = *standardize;

    std::istringstream in(slurp(features_path));
    std::vector<FeatureVector> all = read_features_csv(in);
    std::vector<FeatureVector> rows;
    for (const FeatureVector& f : all) {
        if (subset == "walkers" && f.has_stops()) continue;
        if (subset == "walk_stop" && !f.has_stops()) continue;
        rows.push_back(f);
    }
    if (rows.empty()) throw Error("bad_input", "no feature rows in subset " + subset);

    const ClusterModel model = cluster(rows, config);
    spit(global.out_path(run, model_name), model_to_json(model));

    std::cout << rows.size() << " vectors, k = " << model.k;
    if (model.avg_silhouette) std::cout << ", avg silhouette = " << *model.avg_silhouette;
    std::cout << "\ncriterion trace (" << to_string(config.criterion) << "):\n";
    for (const CriterionPoint& p : model.criterion_trace)
        std::cout << "  k=" << p.k << "  " << p.value << "\n";
    std::cout << "variable importance:\n";
    for (const auto& [name, value] : model.importance)
        std::cout << "  " << name << "  " << value << "\n";
    std::cout << "model -> " << run.out_dir << "/" << model_name << "\n";
}

void cmd_classify(const GlobalOpts& global, const std::string& walkers_model_path,
                  const std::string& walkstop_model_path, const std::string& features_path,
                  const std::string& rules_path, const std::string& records,
                  const std::string& metadata, const std::string& format) {
    const RunConfig config = global.load_config();
    if (walkers_model_path.empty() && walkstop_model_path.empty())
        throw Error("bad_input", "classify needs --walkers-model and/or --walkstop-model");

    TaxonomyRules walker_rules = default_walker_rules();
    TaxonomyRules walkstop_rules = default_walkstop_rules();
    if (!rules_path.empty()) {
        const nlohmann::json j = nlohmann::json::parse(slurp(rules_path));
        if (!j.contains("walkers") || !j.contains("walk_stop"))
            throw Error("parse", "rule file needs 'walkers' and 'walk_stop' rule sets");
        walker_rules = parse_rules(j.at("walkers").dump());
        walkstop_rules = parse_rules(j.at("walk_stop").dump());
    }

    std::istringstream features_in(slurp(features_path));
    const std::vector<FeatureVector> features = read_features_csv(features_in);
    if (features.empty()) throw Error("bad_input", "no feature rows in " + features_path);
    Scalar speed_sum = 0.0;
    for (const FeatureVector& f : features) speed_sum += f.walking_speed;
    const CorpusStats corpus{speed_sum / static_cast<Scalar>(features.size())};

    std::map<std::string, FigureLabel> label_per_record;
    std::vector<std::string> log;
    auto apply = [&](const std::string& path, const TaxonomyRules& rules) {
        const ClusterModel model = model_from_json(slurp(path));
        const auto labels = label_clusters(model, rules, corpus, &log);
        for (const auto& [cluster_idx, label] : labels)
            log.push_back(path + ": cluster " + std::to_string(cluster_idx) + " -> " +
                          to_string(label));
        for (const auto& [id, cluster_idx] : model.assignments)
            label_per_record[id] = labels.at(cluster_idx);
    };
    if (!walkers_model_path.empty()) apply(walkers_model_path, walker_rules);
    if (!walkstop_model_path.empty()) apply(walkstop_model_path, walkstop_rules);

    std::ostringstream labels_csv;
    write_figure_labels_csv(label_per_record, labels_csv);
    spit(global.out_path(config, "figure_labels.csv"), labels_csv.str());
    std::string log_text;
    for (const std::string& line : log) log_text += line + "\n";
    spit(global.out_path(config, "classify_log.txt"), log_text);

    if (!records.empty()) {
        const ParseResult parsed = parse_input(records, metadata, format);
        const FigureSummary summary = figure_summary(parsed.records, features, label_per_record);
        spit(global.out_path(config, "figures.csv"), table_to_string(summary.figures));
        spit(global.out_path(config, "figures_pooled.csv"), table_to_string(summary.umbrella));
        spit(global.out_path(config, "figures_by_age.csv"), table_to_string(summary.by_age));
        spit(global.out_path(config, "figures_by_activity.csv"),
             table_to_string(summary.by_activity));
    }
    std::cout << "labeled " << label_per_record.size() << " records -> " << config.out_dir
              << "/figure_labels.csv\n";
}

void cmd_heatmap(const GlobalOpts& global, const std::string& records,
                 const std::string& metadata, const std::string& format,
                 const std::string& area_path, const std::string& layer,
                 std::optional<Scalar> bandwidth, const std::string& shape, bool raw,
                 bool geojson) {
    const RunConfig config = global.load_config();
    const ObservationArea area =
        area_path.empty() ? load_area_file(config.area) : load_area_file(area_path);
    const ParseResult parsed = parse_input(records, metadata, format);
    if (parsed.records.empty()) throw Error("bad_input", "no records to map");

    KernelSpec kernel = config.kernel;
    if (bandwidth) kernel.bandwidth = *bandwidth;
    if (!shape.empty()) kernel.shape = shape;
    const KdeMode mode = raw ? KdeMode::Raw : KdeMode::Normalized;
    const GridField base = field_for_area(area, 0.0);

    GridField field;
    if (layer == "route") {
        std::vector<WeightedPoint> points;
        for (const TrajectoryRecord& r : parsed.records)
            for (const GazeSample& s : r.samples) points.push_back({s.position, 1.0});
        field = kde(points, base, kernel, mode);
    } else if (layer == "stops") {
        std::vector<WeightedPoint> points;
        for (const TrajectoryRecord& r : parsed.records)
            for (const StopEpisode& e : detect_stops(r))
                if (e.screen_seconds > 0)
                    points.push_back({e.centroid, static_cast<Scalar>(e.screen_seconds)});
        if (points.empty()) throw Error("bad_input", "no screen-coded stops in input");
        field = kde(points, base, kernel, mode);
    } else {
        const std::vector<FeatureVector> features = extract_features(parsed.records);
        std::vector<RouteAttribute> routes;
        for (std::size_t i = 0; i < parsed.records.size(); ++i) {
            const TrajectoryRecord& r = parsed.records[i];
            std::vector<Vec2> polyline;
            polyline.reserve(r.samples.size());
            for (const GazeSample& s : r.samples) polyline.push_back(s.position);
            const Scalar value = layer == "screen" ? features[i].pct_screen_walk
                                                   : features[i].pct_wander_walk;
            routes.push_back({r.id, polyline, value});
        }
        field = rasterize_mean(routes, base);
    }

    const std::string stem = "raster_" + layer;
    std::ostringstream asc;
    export_ascii_grid(field, asc);
    spit(global.out_path(config, stem + ".asc"), asc.str());
    if (geojson) {
        std::ostringstream geo;
        export_geojson(field, geo);
        spit(global.out_path(config, stem + ".geojson"), geo.str());
    }
    std::cout << layer << " field (" << field.ncols << "x" << field.nrows << ") -> "
              << config.out_dir << "/" << stem << ".asc\n";
}

void cmd_synth(const GlobalOpts& global, const std::string& archetypes_path,
               const std::string& area_path) {
    const RunConfig config = global.load_config();
    const std::vector<Archetype> archetypes =
        archetypes_path.empty() ? default_archetypes() : parse_archetypes(slurp(archetypes_path));
    const ObservationArea area =
        area_path.empty() ? default_area() : load_area_file(area_path);

    const SynthResult result = generate(area, archetypes, config.seed);

    std::ostringstream samples, metadata;
    write_records_csv(result.records, samples, metadata);
    spit(global.out_path(config, "corpus_samples.csv"), samples.str());
    spit(global.out_path(config, "corpus_metadata.csv"), metadata.str());

    std::string truth = "record_id,figure\n";
    for (const auto& [id, label] : result.truth) truth += id + "," + to_string(label) + "\n";
    spit(global.out_path(config, "corpus_truth.csv"), truth);

    std::ostringstream area_out;
    save_area(area, area_out);
    spit(global.out_path(config, "area.geojson"), area_out.str());
    spit(global.out_path(config, "archetypes.json"), archetypes_to_json(archetypes));

    std::cout << "generated " << result.records.size() << " records (seed " << config.seed
              << ") -> " << config.out_dir << "\n";
}

void cmd_run(const GlobalOpts& global) {
    const RunConfig config = global.load_config();
    const RunResult result = run_pipeline(config);
    for (const std::string& rel : result.outputs)
        std::cout << config.out_dir << "/" << rel << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gazewalk: gaze-coded pedestrian trajectory analytics"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts global;
    app.add_option("--config", global.config_path, "Run configuration JSON file");
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "Random seed override");
    app.add_option("--out", global.out_dir,
                   "Output directory (default: config out_dir, then $GAZEWALK_OUT, then ./out)");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Parse, validate and filter raw records");
    std::string in_records, in_metadata, in_format = "csv", in_area;
    ingest->add_option("--records", in_records, "Samples CSV or JSONL file")->required();
    ingest->add_option("--metadata", in_metadata, "Metadata CSV (csv format only)");
    ingest->add_option("--format", in_format, "Input format")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    ingest->add_option("--area", in_area, "Observation area GeoJSON for bounds warnings");

    // features
    auto* features = app.add_subcommand("features", "Extract per-record analysis variables");
    std::string ft_records, ft_metadata, ft_format = "csv";
    bool ft_gross = false;
    features->add_option("--records", ft_records, "Samples CSV or JSONL file")->required();
    features->add_option("--metadata", ft_metadata, "Metadata CSV (csv format only)");
    features->add_option("--format", ft_format, "Input format")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    features->add_flag("--gross", ft_gross, "Gross speed (path length over coded duration)");

    // cluster
    auto* cluster_cmd = app.add_subcommand("cluster", "Two-step cluster analysis on features");
    std::string cl_features, cl_subset = "walkers", cl_criterion, cl_model_name =
        "cluster_model.json";
    std::vector<std::string> cl_variables, cl_carry;
    std::optional<int> cl_kmin, cl_kmax, cl_k;
    std::optional<Scalar> cl_threshold;
    bool cl_std_on = false, cl_std_off = false;
    cluster_cmd->add_option("--features", cl_features, "Feature CSV")->required();
    cluster_cmd->add_option("--subset", cl_subset, "Row filter by stop presence")
        ->check(CLI::IsMember({"walkers", "walk_stop", "all"}));
    cluster_cmd->add_option("--variables", cl_variables, "Clustering variables")->delimiter(',');
    cluster_cmd->add_option("--carry", cl_carry, "Carried variables (reported, not clustered)")
        ->delimiter(',');
    cluster_cmd->add_option("--criterion", cl_criterion, "aic or bic");
    cluster_cmd->add_option("--k-min", cl_kmin, "Smallest candidate k");
    cluster_cmd->add_option("--k-max", cl_kmax, "Largest candidate k");
    cluster_cmd->add_option("--k", cl_k, "Fix k instead of selecting by criterion");
    cluster_cmd->add_option("--threshold", cl_threshold, "Pre-cluster absorption threshold");
    cluster_cmd->add_flag("--standardize", cl_std_on, "Z-score variables before distances");
    cluster_cmd->add_flag("--no-standardize", cl_std_off, "Cluster in original units");
    cluster_cmd->add_option("--model-name", cl_model_name, "Output model file name");

    // classify
    auto* classify = app.add_subcommand("classify", "Label cluster models with figure taxonomy");
    std::string cf_walkers, cf_walkstop, cf_features, cf_rules, cf_records, cf_metadata,
        cf_format = "csv";
    classify->add_option("--walkers-model", cf_walkers, "Walkers cluster model JSON");
    classify->add_option("--walkstop-model", cf_walkstop, "Walk-stop cluster model JSON");
    classify->add_option("--features", cf_features, "Feature CSV (corpus speed baseline)")
        ->required();
    classify->add_option("--rules", cf_rules, "Taxonomy rules JSON (built-ins when absent)");
    classify->add_option("--records", cf_records, "Samples file for summary tables");
    classify->add_option("--metadata", cf_metadata, "Metadata CSV for summary tables");
    classify->add_option("--format", cf_format, "Input format")
        ->check(CLI::IsMember({"csv", "jsonl"}));

    // heatmap
    auto* heatmap = app.add_subcommand("heatmap", "Grid and kernel-density spatial fields");
    std::string hm_records, hm_metadata, hm_format = "csv", hm_area, hm_layer = "route",
        hm_shape;
    std::optional<Scalar> hm_bandwidth;
    bool hm_raw = false, hm_geojson = false;
    heatmap->add_option("--records", hm_records, "Samples CSV or JSONL file")->required();
    heatmap->add_option("--metadata", hm_metadata, "Metadata CSV (csv format only)");
    heatmap->add_option("--format", hm_format, "Input format")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    heatmap->add_option("--area", hm_area, "Observation area GeoJSON");
    heatmap->add_option("--layer", hm_layer, "Field to compute")
        ->check(CLI::IsMember({"route", "stops", "screen", "wander"}));
    heatmap->add_option("--bandwidth", hm_bandwidth, "Kernel bandwidth in meters");
    heatmap->add_option("--kernel", hm_shape, "Kernel shape (quartic)");
    heatmap->add_flag("--raw", hm_raw, "Unnormalized kernel values");
    heatmap->add_flag("--geojson", hm_geojson, "Also export the field as GeoJSON");

    // stats
    auto* stats = app.add_subcommand("stats", "Supporting statistics");
    stats->require_subcommand(1);
    stats->fallthrough();

    auto* cochran = stats->add_subcommand("cochran", "Cochran sample size with finite correction");
    SampleSizeParams cochran_params;
    cochran->add_option("--population", cochran_params.population, "Population size N")
        ->required();
    cochran->add_option("--confidence", cochran_params.confidence, "Two-sided confidence level");
    cochran->add_option("--precision", cochran_params.precision, "Margin of error e");
    cochran->add_option("--proportion", cochran_params.proportion, "Expected proportion p");

    auto* disagree = stats->add_subcommand("disagreement", "Inter-coder disagreement rates");
    std::string da_a, da_b;
    std::vector<std::string> da_attrs;
    disagree->add_option("--coder-a", da_a, "First coding CSV (record_id,attr...)")->required();
    disagree->add_option("--coder-b", da_b, "Second coding CSV")->required();
    disagree->add_option("--attributes", da_attrs, "Attributes to compare (default: all shared)")
        ->delimiter(',');

    auto* ttest = stats->add_subcommand("ttest", "Two-sample t-test on a feature variable");
    std::string tt_a, tt_b, tt_variable = "walking_speed";
    bool tt_welch = false;
    ttest->add_option("--features-a", tt_a, "Feature CSV, group A")->required();
    ttest->add_option("--features-b", tt_b, "Feature CSV, group B")->required();
    ttest->add_option("--variable", tt_variable, "Feature column to compare");
    ttest->add_flag("--welch", tt_welch, "Welch instead of pooled variance");

    auto* describe = stats->add_subcommand("describe", "Descriptive tables from counts + records");
    std::string de_counts, de_records, de_metadata, de_format = "csv";
    describe->add_option("--counts", de_counts, "Count survey CSV")->required();
    describe->add_option("--records", de_records, "Samples CSV or JSONL file")->required();
    describe->add_option("--metadata", de_metadata, "Metadata CSV (csv format only)");
    describe->add_option("--format", de_format, "Input format")
        ->check(CLI::IsMember({"csv", "jsonl"}));

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic corpus");
    std::string sy_archetypes, sy_area;
    synth->add_option("--archetypes", sy_archetypes, "Archetype JSON (built-ins when absent)");
    synth->add_option("--area", sy_area, "Observation area GeoJSON (built-in when absent)");

    // run
    auto* run = app.add_subcommand("run", "Full pipeline with manifest");

    try {
        app.parse(argc, argv);
        if (*seed_opt) global.seed = seed_value;

        if (app.got_subcommand(ingest)) {
            cmd_ingest(global, in_records, in_metadata, in_format, in_area);
        } else if (app.got_subcommand(features)) {
            cmd_features(global, ft_records, ft_metadata, ft_format, ft_gross);
        } else if (app.got_subcommand(cluster_cmd)) {
            std::optional<bool> standardize;
            if (cl_std_on) standardize = true;
            if (cl_std_off) standardize = false;
            cmd_cluster(global, cl_features, cl_subset, cl_variables, cl_carry, cl_criterion,
                        cl_kmin, cl_kmax, cl_k, cl_threshold, standardize, cl_model_name);
        } else if (app.got_subcommand(classify)) {
            cmd_classify(global, cf_walkers, cf_walkstop, cf_features, cf_rules, cf_records,
                         cf_metadata, cf_format);
        } else if (app.got_subcommand(heatmap)) {
            cmd_heatmap(global, hm_records, hm_metadata, hm_format, hm_area, hm_layer,
                        hm_bandwidth, hm_shape, hm_raw, hm_geojson);
        } else if (app.got_subcommand(stats)) {
            if (stats->got_subcommand(cochran)) {
                std::cout << "n = " << cochran_n(cochran_params) << "\n";
            } else if (stats->got_subcommand(disagree)) {
                const Coding a = read_coding_csv(da_a), b = read_coding_csv(da_b);
                std::vector<std::string> attrs = da_attrs;
                if (attrs.empty() && !a.empty())
                    for (const auto& [attr, value] : a.begin()->second) attrs.push_back(attr);
                const auto rates = disagreement_rates(a, b, attrs);
                for (const std::string& attr : attrs)
                    std::cout << attr << "  " << round2(rates.at(attr)) << "%\n";
            } else if (stats->got_subcommand(ttest)) {
                auto column = [&](const std::string& path) {
                    std::istringstream in(slurp(path));
                    std::vector<Scalar> values;
                    for (const FeatureVector& f : read_features_csv(in))
                        if (const auto v = feature_value(f, tt_variable)) values.push_back(*v);
                    return values;
                };
                const std::vector<Scalar> a = column(tt_a), b = column(tt_b);
                const TTestResult r =
                    t_test(a, b, tt_welch ? TTestVariant::Welch : TTestVariant::Pooled);
                std::cout << "t(" << r.df << ") = " << r.t << ", p = " << r.p << "\n"
                          << "group a: n=" << a.size() << " mean=" << r.mean_a
                          << " sd=" << r.sd_a << "\n"
                          << "group b: n=" << b.size() << " mean=" << r.mean_b
                          << " sd=" << r.sd_b << "\n";
            } else if (stats->got_subcommand(describe)) {
                std::istringstream counts_in(slurp(de_counts));
                const auto counts = read_counts_csv(counts_in);
                const ParseResult parsed = parse_input(de_records, de_metadata, de_format);
                const DescriptiveReport report = descriptive_report(counts, parsed.records);
                for (const Table* t : {&report.smartphone_share, &report.activity_shares,
                                       &report.companion_shares, &report.stop_behavior,
                                       &report.gaze_aggregates, &report.speed_aggregates})
                    std::cout << table_to_string(*t) << "\n";
            }
        } else if (app.got_subcommand(synth)) {
            cmd_synth(global, sy_archetypes, sy_area);
        } else if (app.got_subcommand(run)) {
            cmd_run(global);
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error [" << e.kind() << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

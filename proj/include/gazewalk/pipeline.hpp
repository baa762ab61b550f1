#pragma once

#include "gazewalk/cluster.hpp"
#include "gazewalk/grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gazewalk {

struct FilterParams {
    Scalar min_path = 20.0;
    Scalar runner_speed = 2.5;
};

// Everything one full analysis run needs. Paths are resolved as given
// (relative paths are relative to the working directory).
struct RunConfig {
    std::string records;   // per-second samples CSV
    std::string metadata;  // per-record metadata CSV
    std::string area;      // observation area GeoJSON
    std::string counts;    // intercept-count table CSV; "" skips its report
    FilterParams filter;
    ClusterConfig walkers;
    ClusterConfig walk_stop;
    std::string rules;  // taxonomy rule file; "" uses the built-in rules
    KernelSpec kernel;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
};

RunConfig default_run_config();
RunConfig parse_run_config(const std::string& json_text);
std::string run_config_to_json(const RunConfig& config);

struct RunResult {
    std::vector<std::string> outputs;  // paths relative to out_dir, manifest last
};

// ingest -> filter -> features -> split by stop presence -> cluster each
// subset -> label -> summaries -> spatial fields -> manifest. Any stage
// failure removes everything already written and rethrows with the stage
// name; a completed run is byte-reproducible for identical config + inputs.
RunResult run_pipeline(const RunConfig& config);

// SHA-256 digest as lowercase hex; the manifest uses it for config and files.
std::string sha256_hex(const std::string& bytes);

}  // namespace gazewalk

#pragma once

#include "gazewalk/features.hpp"
#include "gazewalk/record.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace gazewalk {

enum class RecordFormat { Csv, JsonLines };

struct ParseResult {
    std::vector<TrajectoryRecord> records;  // input order preserved
    std::vector<std::string> warnings;      // plausibility flags, non-fatal
};

// Samples CSV (record_id,t,x_m,y_m,code) plus the per-record metadata sidecar
// (record_id,gender,age_group,companions,activities,entry_gate,exit_gate).
// Parsing is all-or-nothing: any invariant violation throws Error("parse")
// naming the record and line.
ParseResult parse_records_csv(std::istream& samples, std::istream& metadata);

// One record object per line mirroring TrajectoryRecord.
ParseResult parse_records_jsonl(std::istream& in);

void write_records_csv(const std::vector<TrajectoryRecord>& records,
                       std::ostream& samples, std::ostream& metadata);

void write_records_jsonl(const std::vector<TrajectoryRecord>& records, std::ostream& out);

// Observation area as a GeoJSON FeatureCollection in a projected meter CRS.
// Feature roles: "boundary" (polygon, optional grid_cell/grid_origin
// properties), "gate" (two-point line, named), "landmark" (polygon).
ObservationArea load_area(std::istream& in);
ObservationArea load_area_file(const std::string& path);
void save_area(const ObservationArea& area, std::ostream& out);

// Feature table: one row per record, stationary fields empty when absent,
// activity groups semicolon-joined.
void write_features_csv(const std::vector<FeatureVector>& features, std::ostream& out);
std::vector<FeatureVector> read_features_csv(std::istream& in);

}  // namespace gazewalk

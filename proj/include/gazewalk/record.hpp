#pragma once

#include "gazewalk/gaze.hpp"
#include "gazewalk/types.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gazewalk {

// One coded second of one smartphone user: position in a local planar frame
// (meters) and the gaze code observed during that second.
struct GazeSample {
    int t = 0;        // seconds since record start, consecutive from 0
    Vec2 position = Vec2::Zero();
    GazeCode code = GazeCode::C1;
};

// One observed smartphone user. Immutable after construction; all analysis
// operations are pure functions over records.
struct TrajectoryRecord {
    std::string id;
    Gender gender = Gender::Unknown;
    AgeGroup age_group = AgeGroup::Unknown;
    int companions = 0;
    std::set<Activity> activities;  // 1 or 2 dominant smartphone activities
    std::string entry_gate;
    std::string exit_gate;
    std::vector<GazeSample> samples;

    int duration_s() const { return static_cast<int>(samples.size()); }
};

struct Gate {
    std::string name;
    Vec2 a = Vec2::Zero();
    Vec2 b = Vec2::Zero();

    Vec2 midpoint() const { return 0.5 * (a + b); }
};

struct Landmark {
    std::string name;
    std::vector<Vec2> polygon;  // closed ring, meters

    Vec2 centroid() const;
};

// The observed public space: boundary polygon, named observation gates on the
// boundary, optional landmarks/obstacles, and the analysis grid frame.
// Coordinates are a local projected frame in meters; no geodesy is performed.
struct ObservationArea {
    std::vector<Vec2> boundary;  // closed ring (first vertex not repeated)
    std::vector<Gate> gates;
    std::vector<Landmark> landmarks;
    Vec2 grid_origin = Vec2::Zero();
    Scalar grid_cell = 0.5;

    const Gate* find_gate(const std::string& name) const;
};

// Consecutive samples farther apart than this are flagged as implausible at
// 1 Hz (digitization jitter); a warning, not a rejection.
inline constexpr Scalar kStepPlausibilityBound = 3.0;

// Structural problems found in a record. `errors` violate invariants and make
// the record unusable; `warnings` are plausibility flags only.
struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    bool ok() const { return errors.empty(); }
};

ValidationReport validate_record(const TrajectoryRecord& record,
                                 const ObservationArea* area = nullptr);

void validate_area(const ObservationArea& area);  // throws Error on violation

// Sum of Euclidean distances between consecutive sample positions.
Scalar path_length(const TrajectoryRecord& record);

enum class ExclusionReason { ShortPath, Runner, NoWalkingPhase };

std::string to_string(ExclusionReason r);

struct Exclusion {
    std::string record_id;
    ExclusionReason reason;
};

struct EligibilityResult {
    std::vector<TrajectoryRecord> eligible;
    std::vector<Exclusion> excluded;
};

// Eligibility filter: keep records with path_length >= min_path and net
// walking speed below runner_speed. Records without any walking-phase second
// cannot be speed-checked and are excluded with their own reason tag.
EligibilityResult filter_eligible(const std::vector<TrajectoryRecord>& records,
                                  Scalar min_path = 20.0,
                                  Scalar runner_speed = 2.5);

}  // namespace gazewalk

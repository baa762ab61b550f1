#pragma once

#include "gazewalk/record.hpp"

#include <optional>
#include <set>
#include <vector>

namespace gazewalk {

// Fractions of one posture's seconds by gaze class. The three classes
// partition the posture's seconds, so env + through_screen + screen == 1.
struct GazeBreakdown {
    Scalar env = 0.0;
    Scalar through_screen = 0.0;
    Scalar screen = 0.0;

    Scalar screen_based() const { return through_screen + screen; }
};

// Per-posture breakdowns; stationary is absent when the record has no
// stationary second (propagated as missing, never as zero).
struct GazeFractions {
    GazeBreakdown walking;
    std::optional<GazeBreakdown> stationary;
};

// A maximal run of consecutive stationary-coded seconds.
struct StopEpisode {
    int start_t = 0;
    int end_t = 0;                 // inclusive
    Vec2 centroid = Vec2::Zero();  // mean of episode positions
    int screen_seconds = 0;        // screen-based gaze within the episode
    int wander_seconds = 0;        // wandering gaze within the episode

    int duration() const { return end_t - start_t + 1; }
};

// Per-record analysis variables feeding the cluster and figure analyses.
struct FeatureVector {
    std::string record_id;
    Scalar pct_screen_walk = 0.0;   // screen-based fraction of walking seconds
    Scalar pct_wander_walk = 0.0;   // wandering fraction of walking seconds
    std::optional<Scalar> pct_screen_stat;  // absent if no stationary seconds
    std::optional<Scalar> pct_wander_stat;
    Scalar walking_speed = 0.0;     // m/s, see FeatureOptions::speed_mode
    int walk_seconds = 0;
    int stat_seconds = 0;
    int n_stops = 0;
    int total_stop_duration = 0;    // seconds
    std::set<ActivityGroup> activity_groups;

    bool has_stops() const { return n_stops > 0; }
};

enum class SpeedMode {
    Net,   // walking-phase displacement over walking seconds (default)
    Gross  // total path length over total coded duration
};

struct FeatureOptions {
    SpeedMode speed_mode = SpeedMode::Net;
};

GazeFractions gaze_fractions(const TrajectoryRecord& record);

// Wandering fraction over the requested posture's seconds; absent posture
// yields a distinguished empty result, never a silent zero.
std::optional<Scalar> wandering_fraction(const TrajectoryRecord& record, Posture posture);

// Net walking speed: displacement accumulated during walking-coded seconds
// (the second's own code attributes its movement) divided by the number of
// walking-coded seconds. Throws Error("no_walking_phase") when the record
// has no walking second.
Scalar walking_speed(const TrajectoryRecord& record);

// Total path length over total coded duration, for sensitivity checks.
Scalar gross_speed(const TrajectoryRecord& record);

std::vector<StopEpisode> detect_stops(const TrajectoryRecord& record);

FeatureVector extract_features(const TrajectoryRecord& record,
                               const FeatureOptions& options = {});

std::vector<FeatureVector> extract_features(const std::vector<TrajectoryRecord>& records,
                                            const FeatureOptions& options = {});

}  // namespace gazewalk

#include "gazewalk/features.hpp"

namespace gazewalk {

GazeFractions gaze_fractions(const TrajectoryRecord& record) {
    int walk[3] = {0, 0, 0};
    int stat[3] = {0, 0, 0};
    int walk_n = 0;
    int stat_n = 0;
    for (const GazeSample& s : record.samples) {
        const int cls = static_cast<int>(gaze_class(s.code));
        if (posture(s.code) == Posture::Walking) {
            ++walk[cls];
            ++walk_n;
        } else {
            ++stat[cls];
            ++stat_n;
        }
    }

    auto breakdown = [](const int counts[3], int n) {
        GazeBreakdown b;
        b.env = static_cast<Scalar>(counts[0]) / n;
        b.through_screen = static_cast<Scalar>(counts[1]) / n;
        b.screen = static_cast<Scalar>(counts[2]) / n;
        return b;
    };

    GazeFractions f;
    if (walk_n > 0) f.walking = breakdown(walk, walk_n);
    if (stat_n > 0) f.stationary = breakdown(stat, stat_n);
    return f;
}

std::optional<Scalar> wandering_fraction(const TrajectoryRecord& record, Posture p) {
    int total = 0;
    int wandering = 0;
    for (const GazeSample& s : record.samples) {
        if (posture(s.code) != p) continue;
        ++total;
        if (is_wandering(s.code)) ++wandering;
    }
    if (total == 0) return std::nullopt;
    return static_cast<Scalar>(wandering) / total;
}

Scalar walking_speed(const TrajectoryRecord& record) {
    // A second's own code attributes its movement: the displacement from
    // sample t to t+1 counts as walking distance iff code(t) is a walking
    // code. The denominator is the count of walking-coded seconds.
    Scalar distance = 0.0;
    int walk_seconds = 0;
    for (std::size_t i = 0; i < record.samples.size(); ++i) {
        if (posture(record.samples[i].code) != Posture::Walking) continue;
        ++walk_seconds;
        if (i + 1 < record.samples.size())
            distance += (record.samples[i + 1].position - record.samples[i].position).norm();
    }
    if (walk_seconds == 0)
        throw Error("no_walking_phase",
                    "record " + record.id + " has no walking-coded second");
    return distance / walk_seconds;
}

Scalar gross_speed(const TrajectoryRecord& record) {
    if (record.samples.empty())
        throw Error("no_walking_phase", "record " + record.id + " is empty");
    return path_length(record) / static_cast<Scalar>(record.samples.size());
}

std::vector<StopEpisode> detect_stops(const TrajectoryRecord& record) {
    std::vector<StopEpisode> episodes;
    StopEpisode current;
    Vec2 position_sum = Vec2::Zero();
    bool open = false;

    auto close = [&]() {
        current.centroid = position_sum / static_cast<Scalar>(current.duration());
        episodes.push_back(current);
        open = false;
    };

    for (const GazeSample& s : record.samples) {
        if (posture(s.code) == Posture::Stationary) {
            if (!open) {
                current = StopEpisode{};
                current.start_t = s.t;
                position_sum = Vec2::Zero();
                open = true;
            }
            current.end_t = s.t;
            position_sum += s.position;
            if (is_screen_based(s.code)) ++current.screen_seconds;
            if (is_wandering(s.code)) ++current.wander_seconds;
        } else if (open) {
            close();
        }
    }
    if (open) close();
    return episodes;
}

FeatureVector extract_features(const TrajectoryRecord& record,
                               const FeatureOptions& options) {
    FeatureVector f;
    f.record_id = record.id;

    const GazeFractions fractions = gaze_fractions(record);
    f.pct_screen_walk = fractions.walking.screen_based();
    if (fractions.stationary) {
        f.pct_screen_stat = fractions.stationary->screen_based();
        f.pct_wander_stat = wandering_fraction(record, Posture::Stationary);
    }
    if (auto w = wandering_fraction(record, Posture::Walking)) f.pct_wander_walk = *w;

    for (const GazeSample& s : record.samples) {
        if (posture(s.code) == Posture::Walking)
            ++f.walk_seconds;
        else
            ++f.stat_seconds;
    }

    f.walking_speed = options.speed_mode == SpeedMode::Net ? walking_speed(record)
                                                           : gross_speed(record);

    const auto stops = detect_stops(record);
    f.n_stops = static_cast<int>(stops.size());
    for (const StopEpisode& e : stops) f.total_stop_duration += e.duration();

    f.activity_groups = activity_groups(record.activities);
    return f;
}

std::vector<FeatureVector> extract_features(const std::vector<TrajectoryRecord>& records,
                                            const FeatureOptions& options) {
    std::vector<FeatureVector> out;
    out.reserve(records.size());
    for (const TrajectoryRecord& r : records) out.push_back(extract_features(r, options));
    return out;
}

}  // namespace gazewalk

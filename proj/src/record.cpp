#include "gazewalk/record.hpp"

#include "gazewalk/features.hpp"

#include <algorithm>
#include <cmath>

namespace gazewalk {

namespace {

Scalar point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const Scalar len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const Scalar t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

Scalar point_ring_distance(const Vec2& p, const std::vector<Vec2>& ring) {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Vec2& a = ring[i];
        const Vec2& b = ring[(i + 1) % ring.size()];
        best = std::min(best, point_segment_distance(p, a, b));
    }
    return best;
}

constexpr Scalar kGateOnBoundaryTol = 1e-3;  // meters

}  // namespace

Vec2 Landmark::centroid() const {
    Vec2 c = Vec2::Zero();
    if (polygon.empty()) return c;
    for (const Vec2& v : polygon) c += v;
    return c / static_cast<Scalar>(polygon.size());
}

const Gate* ObservationArea::find_gate(const std::string& name) const {
    for (const Gate& g : gates)
        if (g.name == name) return &g;
    return nullptr;
}

ValidationReport validate_record(const TrajectoryRecord& record,
                                 const ObservationArea* area) {
    ValidationReport report;
    auto err = [&](std::string msg) {
        report.errors.push_back("record " + record.id + ": " + std::move(msg));
    };

    if (record.samples.empty()) err("no samples");
    if (record.activities.empty() || record.activities.size() > 2)
        err("activities set must contain 1 or 2 entries, has " +
            std::to_string(record.activities.size()));

    for (std::size_t i = 0; i < record.samples.size(); ++i) {
        const GazeSample& s = record.samples[i];
        if (s.t != static_cast<int>(i)) {
            err("timestamps must be consecutive integers from 0; sample " +
                std::to_string(i) + " has t=" + std::to_string(s.t));
            break;
        }
    }
    for (std::size_t i = 1; i < record.samples.size(); ++i) {
        const Scalar step =
            (record.samples[i].position - record.samples[i - 1].position).norm();
        if (step > kStepPlausibilityBound) {
            report.warnings.push_back(
                "record " + record.id + ": step of " + std::to_string(step) +
                " m at t=" + std::to_string(record.samples[i].t) +
                " exceeds the 1 Hz plausibility bound");
        }
    }

    if (area != nullptr) {
        if (area->find_gate(record.entry_gate) == nullptr)
            err("entry gate '" + record.entry_gate + "' is not a declared gate");
        if (area->find_gate(record.exit_gate) == nullptr)
            err("exit gate '" + record.exit_gate + "' is not a declared gate");
    }
    return report;
}

void validate_area(const ObservationArea& area) {
    if (area.boundary.size() < 3)
        throw Error("bad_area", "observation area boundary needs at least 3 vertices");
    if (area.grid_cell <= 0.0)
        throw Error("bad_area", "grid_cell must be positive");
    if (area.gates.empty())
        throw Error("bad_area", "observation area declares no gates");
    for (const Gate& g : area.gates) {
        if (point_ring_distance(g.a, area.boundary) > kGateOnBoundaryTol ||
            point_ring_distance(g.b, area.boundary) > kGateOnBoundaryTol)
            throw Error("bad_area", "gate '" + g.name + "' does not lie on the boundary");
    }
}

Scalar path_length(const TrajectoryRecord& record) {
    Scalar total = 0.0;
    for (std::size_t i = 1; i < record.samples.size(); ++i)
        total += (record.samples[i].position - record.samples[i - 1].position).norm();
    return total;
}

std::string to_string(ExclusionReason r) {
    switch (r) {
        case ExclusionReason::ShortPath: return "short_path";
        case ExclusionReason::Runner: return "runner";
        case ExclusionReason::NoWalkingPhase: return "no_walking_phase";
    }
    return "?";
}

EligibilityResult filter_eligible(const std::vector<TrajectoryRecord>& records,
                                  Scalar min_path, Scalar runner_speed) {
    EligibilityResult result;
    for (const TrajectoryRecord& record : records) {
        if (path_length(record) < min_path) {
            result.excluded.push_back({record.id, ExclusionReason::ShortPath});
            continue;
        }
        bool has_walking = false;
        for (const GazeSample& s : record.samples)
            if (posture(s.code) == Posture::Walking) { has_walking = true; break; }
        if (!has_walking) {
            result.excluded.push_back({record.id, ExclusionReason::NoWalkingPhase});
            continue;
        }
        if (walking_speed(record) >= runner_speed) {
            result.excluded.push_back({record.id, ExclusionReason::Runner});
            continue;
        }
        result.eligible.push_back(record);
    }
    return result;
}

}  // namespace gazewalk

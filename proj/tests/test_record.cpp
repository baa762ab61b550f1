#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gazewalk/record.hpp"
#include "gazewalk/synth.hpp"
#include "helpers.hpp"

#include <cmath>

using namespace gazewalk;
using testutil::make_record;
using testutil::make_record_at;

TEST_CASE("path length sums consecutive displacements") {
    // right angle: 3 east then 4 north
    const auto r = make_record_at("p1", {1, 1, 1},
                                  {{0.0, 0.0}, {3.0, 0.0}, {3.0, 4.0}});
    CHECK(path_length(r) == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(path_length(make_record("p2", {1})) == 0.0);
}

TEST_CASE("a well-formed record validates cleanly") {
    const auto r = make_record("v1", {1, 2, 19, 22, 8});
    const auto report = validate_record(r);
    CHECK(report.ok());
    CHECK(report.warnings.empty());
}

TEST_CASE("validation rejects structural violations") {
    SUBCASE("no samples") {
        auto r = make_record("v2", {});
        const auto report = validate_record(r);
        CHECK_FALSE(report.ok());
    }
    SUBCASE("timestamps must count up from zero") {
        auto r = make_record("v3", {1, 1, 1});
        r.samples[1].t = 5;
        const auto report = validate_record(r);
        REQUIRE_FALSE(report.ok());
        CHECK(report.errors[0].find("v3") != std::string::npos);
    }
    SUBCASE("activity set size is 1 or 2") {
        auto r = make_record("v4", {1});
        r.activities.clear();
        CHECK_FALSE(validate_record(r).ok());
        r.activities = {Activity::Checking, Activity::Reading, Activity::Typing};
        CHECK_FALSE(validate_record(r).ok());
        r.activities = {Activity::Checking, Activity::Reading};
        CHECK(validate_record(r).ok());
    }
}

TEST_CASE("implausible steps warn but do not invalidate") {
    auto r = make_record("w1", {1, 1, 1});
    r.samples[2].position = r.samples[1].position + Vec2(3.5, 0.0);  // > 3 m/s
    const auto report = validate_record(r);
    CHECK(report.ok());
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].find("w1") != std::string::npos);
    CHECK(report.warnings[0].find("t=2") != std::string::npos);
}

TEST_CASE("gate names are checked only when an area is supplied") {
    auto r = make_record("g1", {1, 1});
    r.entry_gate = "gate_nowhere";
    CHECK(validate_record(r).ok());  // no area, no gate check
    const ObservationArea area = default_area();
    CHECK_FALSE(validate_record(r, &area).ok());
    r.entry_gate = "gate_w";
    CHECK(validate_record(r, &area).ok());
}

TEST_CASE("area validation enforces gates on the boundary") {
    ObservationArea area = default_area();
    CHECK_NOTHROW(validate_area(area));

    SUBCASE("gate off the boundary") {
        area.gates[0].a = Vec2(5.0, 5.0);  // interior point
        CHECK_THROWS_AS(validate_area(area), Error);
    }
    SUBCASE("degenerate boundary") {
        area.boundary.resize(2);
        CHECK_THROWS_AS(validate_area(area), Error);
    }
    SUBCASE("no gates") {
        area.gates.clear();
        CHECK_THROWS_AS(validate_area(area), Error);
    }
    SUBCASE("bad grid cell") {
        area.grid_cell = 0.0;
        CHECK_THROWS_AS(validate_area(area), Error);
    }
}

TEST_CASE("gate midpoint and landmark centroid are simple means") {
    const Gate g{"g", Vec2(0.0, 12.0), Vec2(0.0, 18.0)};
    CHECK(g.midpoint() == Vec2(0.0, 15.0));
    Landmark l;
    l.polygon = {{0.0, 0.0}, {2.0, 0.0}, {2.0, 2.0}, {0.0, 2.0}};
    CHECK(l.centroid() == Vec2(1.0, 1.0));
}

TEST_CASE("eligibility keeps ordinary walkers and names each exclusion") {
    // 30 walking seconds at 1 m/s: plainly eligible
    const auto ok = make_record("e_ok", std::vector<int>(30, 1), 1.0);
    // total path 5 m: too short to be a crossing
    const auto short_path = make_record("e_short", std::vector<int>(5, 1), 1.0);
    // 24 displacements of 2.8 m over 25 walking seconds: running, not walking
    const auto runner = make_record("e_run", std::vector<int>(25, 1), 2.8);
    // long path but every second stationary: speed is undefined
    auto no_walk = make_record("e_stat", std::vector<int>(25, 7), 1.0);

    const auto result = filter_eligible({ok, short_path, runner, no_walk});
    REQUIRE(result.eligible.size() == 1);
    CHECK(result.eligible[0].id == "e_ok");
    REQUIRE(result.excluded.size() == 3);
    CHECK(result.excluded[0].record_id == "e_short");
    CHECK(result.excluded[0].reason == ExclusionReason::ShortPath);
    CHECK(result.excluded[1].record_id == "e_run");
    CHECK(result.excluded[1].reason == ExclusionReason::Runner);
    CHECK(result.excluded[2].record_id == "e_stat");
    CHECK(result.excluded[2].reason == ExclusionReason::NoWalkingPhase);
}

TEST_CASE("eligibility thresholds are boundaries, not bands") {
    // exactly 20 m of path stays in; exactly 2.5 m/s is already a runner
    const auto at_min_path = make_record("b1", std::vector<int>(21, 1), 1.0);  // 20 m
    CHECK(path_length(at_min_path) == doctest::Approx(20.0));
    CHECK(filter_eligible({at_min_path}).eligible.size() == 1);

    const auto at_runner = make_record("b2", std::vector<int>(11, 1), 2.5);
    // 10 displacements over 11 walking seconds: net speed just under 2.5
    CHECK(filter_eligible({at_runner}).eligible.size() == 1);
    const auto above = make_record("b3", std::vector<int>(11, 1), 2.75);
    CHECK(filter_eligible({above}).excluded.size() == 1);
    CHECK(filter_eligible({above}).excluded[0].reason == ExclusionReason::Runner);
}

TEST_CASE("exclusion reasons serialize to stable tags") {
    CHECK(to_string(ExclusionReason::ShortPath) == "short_path");
    CHECK(to_string(ExclusionReason::Runner) == "runner");
    CHECK(to_string(ExclusionReason::NoWalkingPhase) == "no_walking_phase");
}

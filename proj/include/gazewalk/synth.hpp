#pragma once

#include "gazewalk/record.hpp"
#include "gazewalk/taxonomy.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace gazewalk {

// Deterministic draw helpers. All randomness flows through these so corpora
// are bit-identical across standard libraries; std::mt19937_64 is seeded per
// record from a splitmix64-derived sub-seed.
namespace rng {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index);
Scalar uniform(std::mt19937_64& gen);                    // [0, 1)
Scalar normal(std::mt19937_64& gen);                     // Box-Muller, fresh pair per call
int categorical(std::mt19937_64& gen, const std::vector<Scalar>& weights);
void shuffle(std::mt19937_64& gen, std::vector<int>& values);  // Fisher-Yates

}  // namespace rng

struct FractionTarget {
    Scalar mean = 0.0;
    Scalar sd = 0.10;
};

// One behavioral archetype feeding the generator. Walk-stop archetypes carry
// stationary gaze targets; walker archetypes leave them absent and never stop.
struct Archetype {
    FigureLabel name = FigureLabel::Unclassified;
    int count = 0;
    std::string path_style = "linear_flow";  // or organic_wander
    FractionTarget screen_walk;
    FractionTarget wander_walk;
    std::optional<FractionTarget> screen_stat;
    std::optional<FractionTarget> wander_stat;
    FractionTarget speed{1.1, 0.25};
    std::vector<Scalar> stop_count_weights = {1.0};  // P(n stops = index)
    std::pair<int, int> stop_duration_range = {0, 0};  // total stationary s/record
    Scalar short_stop_share = 0.0;  // records with a single < 10 s stop
    Scalar through_screen_share = 0.3;  // screen-based seconds spent seeing through it
    Scalar persistence = 8.0;  // target code-run length, seconds
    std::array<Scalar, 4> age_weights = {0.25, 0.25, 0.25, 0.25};
    std::map<Activity, Scalar> activity_weights;
    Scalar second_activity_p = 0.3;
    Scalar alone_p = 0.435;
};

std::vector<Archetype> parse_archetypes(const std::string& json_text);
std::string archetypes_to_json(const std::vector<Archetype>& archetypes);

// The bundled nine-archetype corpus: five walker and four walk-stop groups
// whose pooled post-flaneur and zombie aggregates land on the reference
// summary table by construction.
std::vector<Archetype> default_archetypes();

// Rectangular plaza with three gates and one off-corridor landmark.
ObservationArea default_area();

struct SynthResult {
    std::vector<TrajectoryRecord> records;
    std::map<std::string, FigureLabel> truth;  // record id -> generating archetype
};

// Deterministic per seed; records are emitted in archetype order with ids
// r0001, r0002, ... Every record passes validation and the eligibility
// filters by construction.
SynthResult generate(const ObservationArea& area, const std::vector<Archetype>& archetypes,
                     std::uint64_t seed);

}  // namespace gazewalk

#include "gazewalk/synth.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace gazewalk {

namespace rng {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
    // Stateless stream: record i gets the i-th splitmix output, so corpora
    // are stable under archetype reordering of later records.
    return splitmix64(seed + index * 0x9E3779B97F4A7C15ULL);
}

Scalar uniform(std::mt19937_64& gen) {
    return static_cast<Scalar>(gen() >> 11) * 0x1.0p-53;
}

Scalar normal(std::mt19937_64& gen) {
    // Box-Muller with explicit draws; std::normal_distribution varies across
    // standard libraries and would break cross-platform determinism.
    Scalar u1 = 1.0 - uniform(gen);  // (0, 1]
    const Scalar u2 = uniform(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int categorical(std::mt19937_64& gen, const std::vector<Scalar>& weights) {
    Scalar total = 0.0;
    for (Scalar w : weights) {
        if (w < 0.0 || !std::isfinite(w))
            throw Error("bad_input", "categorical weights must be finite and >= 0");
        total += w;
    }
    if (weights.empty() || total <= 0.0)
        throw Error("bad_input", "categorical weights must have positive mass");
    Scalar x = uniform(gen) * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        x -= weights[i];
        if (x < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

void shuffle(std::mt19937_64& gen, std::vector<int>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform(gen) * static_cast<Scalar>(i));
        std::swap(values[i - 1], values[std::min(j, i - 1)]);
    }
}

}  // namespace rng

namespace {

// Gates must sit farther apart than the eligibility path floor plus the
// per-record discretization leftover, or straight routes could be filtered.
constexpr Scalar kMinGateSeparation = 23.0;
// Per-record stationary dwell bounds: wandering gaze pauses stay short,
// screen-based immersion can run much longer.
constexpr int kMaxWanderDwell = 60;
constexpr int kMaxScreenDwell = 114;

Scalar draw_fraction(std::mt19937_64& gen, const FractionTarget& t) {
    return std::clamp(t.mean + t.sd * rng::normal(gen), 0.0, 1.0);
}

// Screen and wandering shares live on the same simplex; an overflowing draw
// is scaled back proportionally instead of being rejected (rejection would
// skew the marginal means of high-sum archetypes much harder).
std::pair<Scalar, Scalar> draw_share_pair(std::mt19937_64& gen, const FractionTarget& screen,
                                          const FractionTarget& wander) {
    Scalar s = draw_fraction(gen, screen);
    Scalar w = draw_fraction(gen, wander);
    const Scalar sum = s + w;
    if (sum > 0.99) {
        s *= 0.99 / sum;
        w *= 0.99 / sum;
    }
    return {s, w};
}

Scalar draw_speed(std::mt19937_64& gen, const FractionTarget& target) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        const Scalar v = target.mean + target.sd * rng::normal(gen);
        if (v >= 0.3 && v <= 2.3) return v;
    }
    return std::clamp(target.mean, 0.3, 2.3);
}

GazeCode pick_code(std::mt19937_64& gen, bool walking, int cls, Scalar through_share) {
    auto pick = [&](std::initializer_list<GazeCode> codes,
                    std::initializer_list<Scalar> weights) {
        const int i = rng::categorical(gen, std::vector<Scalar>(weights));
        return *(codes.begin() + i);
    };
    if (walking) {
        if (cls == 0) {
            if (rng::uniform(gen) < through_share)
                return pick({GazeCode::C12, GazeCode::C13, GazeCode::C14}, {0.5, 0.3, 0.2});
            return pick({GazeCode::C19, GazeCode::C20, GazeCode::C21}, {0.5, 0.3, 0.2});
        }
        if (cls == 1) return pick({GazeCode::C2, GazeCode::C3, GazeCode::C4}, {0.5, 0.3, 0.2});
        return pick({GazeCode::C1, GazeCode::C5, GazeCode::C6}, {0.6, 0.25, 0.15});
    }
    if (cls == 0) {
        if (rng::uniform(gen) < through_share)
            return pick({GazeCode::C15, GazeCode::C16, GazeCode::C17, GazeCode::C18},
                        {0.35, 0.3, 0.2, 0.15});
        return pick({GazeCode::C22, GazeCode::C23, GazeCode::C24}, {0.5, 0.3, 0.2});
    }
    if (cls == 1) return pick({GazeCode::C8, GazeCode::C9, GazeCode::C10}, {0.5, 0.3, 0.2});
    return pick({GazeCode::C7, GazeCode::C11}, {0.7, 0.3});
}

// Lays out exactly n_screen + n_wander + rest codes as shuffled contiguous
// runs. Run lengths come from the persistence target, and each run keeps one
// code, so per-record realized shares equal their drawn targets up to
// rounding while the sequence still looks like sustained gaze episodes.
std::vector<GazeCode> gaze_code_sequence(std::mt19937_64& gen, int total, int n_screen,
                                         int n_wander, bool walking, Scalar through_share,
                                         Scalar persistence) {
    std::vector<GazeCode> out;
    if (total <= 0) return out;
    n_screen = std::clamp(n_screen, 0, total);
    n_wander = std::clamp(n_wander, 0, total - n_screen);
    const int counts[3] = {n_screen, n_wander, total - n_screen - n_wander};

    struct Run {
        int len;
        GazeCode code;
    };
    std::vector<Run> runs;
    for (int cls = 0; cls < 3; ++cls) {
        const int n = counts[cls];
        if (n == 0) continue;
        const int n_runs = std::max(
            1, static_cast<int>(std::lround(static_cast<Scalar>(n) / std::max(persistence, 1.0))));
        const int base = n / n_runs;
        const int rem = n % n_runs;
        for (int r = 0; r < n_runs; ++r)
            runs.push_back({base + (r < rem ? 1 : 0), pick_code(gen, walking, cls, through_share)});
    }
    std::vector<int> order(runs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    rng::shuffle(gen, order);
    out.reserve(static_cast<std::size_t>(total));
    for (int idx : order)
        for (int i = 0; i < runs[static_cast<std::size_t>(idx)].len; ++i)
            out.push_back(runs[static_cast<std::size_t>(idx)].code);
    return out;
}

struct BoundingBox {
    Scalar min_x, min_y, max_x, max_y;

    Vec2 clamp(const Vec2& p, Scalar margin) const {
        return {std::clamp(p.x(), min_x + margin, max_x - margin),
                std::clamp(p.y(), min_y + margin, max_y - margin)};
    }
};

BoundingBox bounds_of(const std::vector<Vec2>& ring) {
    BoundingBox b{std::numeric_limits<Scalar>::infinity(),
                  std::numeric_limits<Scalar>::infinity(),
                  -std::numeric_limits<Scalar>::infinity(),
                  -std::numeric_limits<Scalar>::infinity()};
    for (const Vec2& p : ring) {
        b.min_x = std::min(b.min_x, p.x());
        b.min_y = std::min(b.min_y, p.y());
        b.max_x = std::max(b.max_x, p.x());
        b.max_y = std::max(b.max_y, p.y());
    }
    return b;
}

// Straight leg with mild lateral jitter every ~5 m; appends everything after
// `from` including `to`.
void add_leg(std::mt19937_64& gen, const Vec2& from, const Vec2& to, const BoundingBox& box,
             std::vector<Vec2>& pts) {
    const Vec2 d = to - from;
    const Scalar len = d.norm();
    const int n_mid = static_cast<int>(len / 5.0);
    if (n_mid >= 1 && len > 0.0) {
        const Vec2 dir = d / len;
        const Vec2 normal(-dir.y(), dir.x());
        for (int i = 1; i <= n_mid; ++i) {
            const Scalar along = len * static_cast<Scalar>(i) / static_cast<Scalar>(n_mid + 1);
            const Scalar lateral = std::clamp(0.35 * rng::normal(gen), -1.0, 1.0);
            pts.push_back(box.clamp(from + along * dir + lateral * normal, 0.3));
        }
    }
    pts.push_back(to);
}

std::vector<Vec2> linear_waypoints(std::mt19937_64& gen, const Vec2& entry, const Vec2& exit,
                                   const BoundingBox& box) {
    std::vector<Vec2> pts{entry};
    add_leg(gen, entry, exit, box, pts);
    return pts;
}

// Approach the anchor, circle it one or two times with radius jitter, leave
// for the exit gate. Routes therefore concentrate around the landmark.
std::vector<Vec2> organic_waypoints(std::mt19937_64& gen, const Vec2& entry, const Vec2& exit,
                                    const Vec2& anchor, const BoundingBox& box) {
    const Scalar radius = 3.5 + 2.0 * rng::uniform(gen);
    const int loops = rng::uniform(gen) < 0.35 ? 2 : 1;
    const Scalar dir = rng::uniform(gen) < 0.5 ? 1.0 : -1.0;
    const Scalar theta_entry = std::atan2(entry.y() - anchor.y(), entry.x() - anchor.x());
    const Scalar theta_exit = std::atan2(exit.y() - anchor.y(), exit.x() - anchor.x());
    Scalar delta = dir > 0 ? theta_exit - theta_entry : theta_entry - theta_exit;
    delta = std::fmod(delta, 2.0 * M_PI);
    if (delta < 0.0) delta += 2.0 * M_PI;
    const Scalar sweep = 2.0 * M_PI * loops + delta;
    const int n_pts = std::max(8, static_cast<int>(sweep / (2.0 * M_PI / 24.0)));

    std::vector<Vec2> pts{entry};
    const Vec2 first_on_circle =
        anchor + radius * Vec2(std::cos(theta_entry), std::sin(theta_entry));
    add_leg(gen, entry, box.clamp(first_on_circle, 0.3), box, pts);
    for (int i = 1; i <= n_pts; ++i) {
        const Scalar theta = theta_entry + dir * sweep * static_cast<Scalar>(i) / n_pts;
        const Scalar r = std::clamp(radius * (1.0 + 0.10 * rng::normal(gen)), 2.8, 6.0);
        pts.push_back(box.clamp(anchor + r * Vec2(std::cos(theta), std::sin(theta)), 0.3));
    }
    const Vec2 leg_start = pts.back();  // copy: add_leg reallocates pts
    add_leg(gen, leg_start, exit, box, pts);
    return pts;
}

struct ArcPath {
    std::vector<Vec2> pts;
    std::vector<Scalar> cum;  // cumulative length up to each point

    Scalar length() const { return cum.back(); }

    Vec2 at(Scalar s) const {
        if (s <= 0.0) return pts.front();
        if (s >= cum.back()) return pts.back();
        const auto it = std::upper_bound(cum.begin(), cum.end(), s);
        const auto i = static_cast<std::size_t>(it - cum.begin());
        const Scalar seg = cum[i] - cum[i - 1];
        const Scalar f = seg > 0.0 ? (s - cum[i - 1]) / seg : 0.0;
        return pts[i - 1] + f * (pts[i] - pts[i - 1]);
    }
};

ArcPath make_arc_path(std::vector<Vec2> pts) {
    ArcPath path;
    path.cum.resize(pts.size());
    path.cum[0] = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        path.cum[i] = path.cum[i - 1] + (pts[i] - pts[i - 1]).norm();
    path.pts = std::move(pts);
    return path;
}

void validate_archetype(const Archetype& a) {
    const std::string name = to_string(a.name);
    if (a.count < 0) throw Error("bad_input", "archetype " + name + ": negative count");
    auto check_fraction = [&](const FractionTarget& t, const char* field) {
        if (t.mean < 0.0 || t.mean > 1.0 || t.sd < 0.0 || !std::isfinite(t.mean) ||
            !std::isfinite(t.sd))
            throw Error("bad_input", "archetype " + name + ": bad " + field + " target");
    };
    check_fraction(a.screen_walk, "screen_walk");
    check_fraction(a.wander_walk, "wander_walk");
    if (a.screen_stat.has_value() != a.wander_stat.has_value())
        throw Error("bad_input",
                    "archetype " + name + ": stationary targets must come as a pair");
    if (a.screen_stat) check_fraction(*a.screen_stat, "screen_stat");
    if (a.wander_stat) check_fraction(*a.wander_stat, "wander_stat");
    if (a.speed.mean < 0.4 || a.speed.mean > 2.3 || a.speed.sd < 0.0)
        throw Error("bad_input", "archetype " + name + ": speed mean outside [0.4, 2.3]");
    if (a.path_style != "linear_flow" && a.path_style != "organic_wander")
        throw Error("bad_input", "archetype " + name + ": unknown path style " + a.path_style);
    if (a.stop_count_weights.empty())
        throw Error("bad_input", "archetype " + name + ": empty stop-count weights");
    Scalar stop_mass = 0.0;
    for (std::size_t i = 1; i < a.stop_count_weights.size(); ++i)
        stop_mass += a.stop_count_weights[i];
    if (a.screen_stat) {
        if (stop_mass <= 0.0)
            throw Error("bad_input", "archetype " + name +
                                         ": stationary targets need stop-count mass at >= 1");
        if (a.stop_duration_range.first < 5 ||
            a.stop_duration_range.second < a.stop_duration_range.first)
            throw Error("bad_input",
                        "archetype " + name + ": stop duration range must be [lo>=5, hi>=lo]");
    } else if (stop_mass > 0.0) {
        throw Error("bad_input",
                    "archetype " + name + ": stop-count mass without stationary gaze targets");
    }
    if (a.age_weights[0] + a.age_weights[1] + a.age_weights[2] + a.age_weights[3] <= 0.0)
        throw Error("bad_input", "archetype " + name + ": age weights need positive mass");
    if (a.activity_weights.empty())
        throw Error("bad_input", "archetype " + name + ": no activity weights");
}

}  // namespace

SynthResult generate(const ObservationArea& area, const std::vector<Archetype>& archetypes,
                     std::uint64_t seed) {
    if (archetypes.empty()) throw Error("bad_input", "no archetypes to generate from");
    for (const Archetype& a : archetypes) validate_archetype(a);
    if (area.gates.size() < 2) throw Error("bad_area", "generation needs at least two gates");
    if (area.boundary.size() < 3) throw Error("bad_area", "boundary ring needs >= 3 vertices");
    for (std::size_t i = 0; i < area.gates.size(); ++i)
        for (std::size_t j = i + 1; j < area.gates.size(); ++j) {
            const Scalar dist =
                (area.gates[i].midpoint() - area.gates[j].midpoint()).norm();
            if (dist < kMinGateSeparation)
                throw Error("bad_area", "infeasible geometry: gates '" + area.gates[i].name +
                                            "' and '" + area.gates[j].name + "' are " +
                                            std::to_string(dist) +
                                            " m apart, below the eligible-path minimum");
        }

    const BoundingBox box = bounds_of(area.boundary);
    std::optional<Vec2> anchor;
    if (!area.landmarks.empty())
        anchor = area.landmarks.front().centroid();
    else {
        Vec2 c = Vec2::Zero();
        for (const Vec2& p : area.boundary) c += p;
        anchor = c / static_cast<Scalar>(area.boundary.size());
    }

    SynthResult result;
    std::uint64_t index = 0;
    for (const Archetype& arch : archetypes) {
        for (int rec_i = 0; rec_i < arch.count; ++rec_i, ++index) {
            std::mt19937_64 gen(rng::sub_seed(seed, index));
            TrajectoryRecord rec;
            char id[16];
            std::snprintf(id, sizeof id, "r%04llu",
                          static_cast<unsigned long long>(index + 1));
            rec.id = id;

            // Demographics first so the draw order is part of the contract.
            rec.gender = rng::uniform(gen) < 0.5 ? Gender::Female : Gender::Male;
            rec.age_group = static_cast<AgeGroup>(rng::categorical(
                gen, {arch.age_weights[0], arch.age_weights[1], arch.age_weights[2],
                      arch.age_weights[3]}));
            rec.companions = rng::uniform(gen) < arch.alone_p
                                 ? 0
                                 : 1 + rng::categorical(gen, {0.6, 0.3, 0.1});
            std::vector<Activity> acts;
            std::vector<Scalar> act_weights;
            for (const auto& [act, weight] : arch.activity_weights) {
                acts.push_back(act);
                act_weights.push_back(weight);
            }
            const Activity first_act =
                acts[static_cast<std::size_t>(rng::categorical(gen, act_weights))];
            rec.activities.insert(first_act);
            if (rng::uniform(gen) < arch.second_activity_p)
                for (int attempt = 0; attempt < 20; ++attempt) {
                    const Activity second =
                        acts[static_cast<std::size_t>(rng::categorical(gen, act_weights))];
                    if (second != first_act) {
                        rec.activities.insert(second);
                        break;
                    }
                }

            const int entry_i =
                rng::categorical(gen, std::vector<Scalar>(area.gates.size(), 1.0));
            int exit_i =
                rng::categorical(gen, std::vector<Scalar>(area.gates.size() - 1, 1.0));
            if (exit_i >= entry_i) ++exit_i;
            rec.entry_gate = area.gates[static_cast<std::size_t>(entry_i)].name;
            rec.exit_gate = area.gates[static_cast<std::size_t>(exit_i)].name;
            const Vec2 entry = area.gates[static_cast<std::size_t>(entry_i)].midpoint();
            const Vec2 exit = area.gates[static_cast<std::size_t>(exit_i)].midpoint();

            const bool organic = arch.path_style == "organic_wander";
            const ArcPath path = make_arc_path(
                organic ? organic_waypoints(gen, entry, exit, *anchor, box)
                        : linear_waypoints(gen, entry, exit, box));

            const Scalar speed = draw_speed(gen, arch.speed);
            const auto [q_screen_walk, q_wander_walk] =
                draw_share_pair(gen, arch.screen_walk, arch.wander_walk);

            const int walk_n = static_cast<int>(path.length() / speed);
            if (walk_n < 8)
                throw Error("bad_area", "path too short for a walking phase at " +
                                            std::to_string(speed) + " m/s");
            // The last sample has no successor, so its second contributes no
            // displacement; stretch the per-second step so the net walking
            // speed equals the drawn speed exactly.
            const Scalar step =
                speed * static_cast<Scalar>(walk_n) / static_cast<Scalar>(walk_n - 1);
            std::vector<Vec2> walk_pos(static_cast<std::size_t>(walk_n));
            for (int i = 0; i < walk_n; ++i)
                walk_pos[static_cast<std::size_t>(i)] = path.at(step * i);

            // Stop schedule: count, total dwell, then placement.
            int n_stops = rng::categorical(gen, arch.stop_count_weights);
            int stat_n = 0;
            Scalar q_screen_stat = 0.0, q_wander_stat = 0.0;
            if (arch.screen_stat) {
                n_stops = std::max(1, n_stops);
                while (n_stops > 1 && 2 + 3 * (n_stops - 1) > walk_n - 3) --n_stops;
                if (arch.short_stop_share > 0.0 && rng::uniform(gen) < arch.short_stop_share) {
                    n_stops = 1;
                    stat_n = 5 + static_cast<int>(rng::uniform(gen) * 5.0);
                } else {
                    const auto [lo, hi] = arch.stop_duration_range;
                    stat_n = lo + static_cast<int>(rng::uniform(gen) * (hi - lo + 1));
                    stat_n = std::clamp(stat_n, lo, hi);
                }
                std::tie(q_screen_stat, q_wander_stat) =
                    draw_share_pair(gen, *arch.screen_stat, *arch.wander_stat);
            } else {
                n_stops = 0;
            }

            std::vector<int> stop_after;   // walking index each stop follows
            std::vector<int> stop_length;  // seconds per stop
            if (n_stops > 0) {
                int anchor_idx = walk_n / 2;
                if (organic) {
                    Scalar best = std::numeric_limits<Scalar>::infinity();
                    for (int i = 0; i < walk_n; ++i) {
                        const Scalar d = (walk_pos[static_cast<std::size_t>(i)] - *anchor).norm();
                        if (d < best) {
                            best = d;
                            anchor_idx = i;
                        }
                    }
                }
                const int spread = std::max(3, walk_n / 6);
                for (int s = 0; s < n_stops; ++s) {
                    const int offset = n_stops == 1 ? 0 : (s - (n_stops - 1) / 2) * spread;
                    stop_after.push_back(std::clamp(anchor_idx + offset, 2, walk_n - 3));
                }
                std::sort(stop_after.begin(), stop_after.end());
                for (std::size_t s = 1; s < stop_after.size(); ++s)
                    stop_after[s] = std::max(stop_after[s], stop_after[s - 1] + 3);
                const int over = stop_after.back() - (walk_n - 3);
                if (over > 0)
                    for (int& idx : stop_after) idx = std::max(2, idx - over);

                std::vector<Scalar> weights;
                for (int s = 0; s < n_stops; ++s) weights.push_back(0.6 + 0.8 * rng::uniform(gen));
                const Scalar wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
                int assigned = 0;
                for (int s = 0; s < n_stops; ++s) {
                    const int len = std::max(
                        3, static_cast<int>(stat_n * weights[static_cast<std::size_t>(s)] / wsum));
                    stop_length.push_back(len);
                    assigned += len;
                }
                stop_length.back() = std::max(3, stop_length.back() + (stat_n - assigned));
                stat_n = std::accumulate(stop_length.begin(), stop_length.end(), 0);
            }

            // Gaze codes: walking and stationary pools hit their drawn share
            // targets exactly (up to 1-second rounding).
            const std::vector<GazeCode> walk_codes = gaze_code_sequence(
                gen, walk_n, static_cast<int>(std::lround(q_screen_walk * walk_n)),
                static_cast<int>(std::lround(q_wander_walk * walk_n)), true,
                arch.through_screen_share, arch.persistence);
            const int stat_screen = std::min(
                static_cast<int>(std::lround(q_screen_stat * stat_n)), kMaxScreenDwell);
            const int stat_wander =
                std::min({static_cast<int>(std::lround(q_wander_stat * stat_n)),
                          kMaxWanderDwell, stat_n - stat_screen});
            const std::vector<GazeCode> stat_codes =
                gaze_code_sequence(gen, stat_n, stat_screen, stat_wander, false,
                                   arch.through_screen_share, arch.persistence);

            rec.samples.reserve(static_cast<std::size_t>(walk_n + stat_n));
            int t = 0;
            std::size_t stat_i = 0;
            std::size_t next_stop = 0;
            for (int wi = 0; wi < walk_n; ++wi) {
                rec.samples.push_back(
                    {t++, walk_pos[static_cast<std::size_t>(wi)],
                     walk_codes[static_cast<std::size_t>(wi)]});
                if (next_stop < stop_after.size() &&
                    stop_after[next_stop] == wi) {
                    // The stop happens at the position reached by this
                    // second's step, so the step into it still counts as
                    // walking displacement.
                    const Vec2 at = walk_pos[static_cast<std::size_t>(wi + 1)];
                    for (int s = 0; s < stop_length[next_stop]; ++s)
                        rec.samples.push_back({t++, at, stat_codes[stat_i++]});
                    ++next_stop;
                }
            }

            result.truth[rec.id] = arch.name;
            result.records.push_back(std::move(rec));
        }
    }
    return result;
}

namespace {

nlohmann::json target_to_json(const FractionTarget& t) {
    return {{"mean", t.mean}, {"sd", t.sd}};
}

FractionTarget target_from_json(const nlohmann::json& j) {
    return {j.at("mean").get<Scalar>(), j.at("sd").get<Scalar>()};
}

}  // namespace

std::string archetypes_to_json(const std::vector<Archetype>& archetypes) {
    nlohmann::json out = nlohmann::json::array();
    for (const Archetype& a : archetypes) {
        nlohmann::json j;
        j["name"] = to_string(a.name);
        j["count"] = a.count;
        j["path_style"] = a.path_style;
        j["screen_walk"] = target_to_json(a.screen_walk);
        j["wander_walk"] = target_to_json(a.wander_walk);
        j["screen_stat"] = a.screen_stat ? target_to_json(*a.screen_stat) : nlohmann::json();
        j["wander_stat"] = a.wander_stat ? target_to_json(*a.wander_stat) : nlohmann::json();
        j["speed"] = target_to_json(a.speed);
        j["stop_count_weights"] = a.stop_count_weights;
        j["stop_duration_range"] = {a.stop_duration_range.first, a.stop_duration_range.second};
        j["short_stop_share"] = a.short_stop_share;
        j["through_screen_share"] = a.through_screen_share;
        j["persistence"] = a.persistence;
        j["age_weights"] = {{"teenager", a.age_weights[0]},
                            {"young_adult", a.age_weights[1]},
                            {"adult", a.age_weights[2]},
                            {"elderly", a.age_weights[3]}};
        nlohmann::json acts;
        for (const auto& [act, weight] : a.activity_weights) acts[to_string(act)] = weight;
        j["activity_weights"] = acts;
        j["second_activity_p"] = a.second_activity_p;
        j["alone_p"] = a.alone_p;
        out.push_back(std::move(j));
    }
    return out.dump(2) + "\n";
}

std::vector<Archetype> parse_archetypes(const std::string& json_text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", std::string("archetype JSON: ") + e.what());
    }
    if (!root.is_array()) throw Error("parse", "archetype JSON: expected an array");
    std::vector<Archetype> out;
    try {
        for (const auto& j : root) {
            Archetype a;
            const auto label = parse_figure_label(j.at("name").get<std::string>());
            if (!label)
                throw Error("parse",
                            "archetype JSON: unknown figure " + j.at("name").get<std::string>());
            a.name = *label;
            a.count = j.at("count").get<int>();
            a.path_style = j.at("path_style").get<std::string>();
            a.screen_walk = target_from_json(j.at("screen_walk"));
            a.wander_walk = target_from_json(j.at("wander_walk"));
            if (j.contains("screen_stat") && !j.at("screen_stat").is_null())
                a.screen_stat = target_from_json(j.at("screen_stat"));
            if (j.contains("wander_stat") && !j.at("wander_stat").is_null())
                a.wander_stat = target_from_json(j.at("wander_stat"));
            a.speed = target_from_json(j.at("speed"));
            a.stop_count_weights = j.at("stop_count_weights").get<std::vector<Scalar>>();
            a.stop_duration_range = {j.at("stop_duration_range")[0].get<int>(),
                                     j.at("stop_duration_range")[1].get<int>()};
            if (j.contains("short_stop_share"))
                a.short_stop_share = j.at("short_stop_share").get<Scalar>();
            if (j.contains("through_screen_share"))
                a.through_screen_share = j.at("through_screen_share").get<Scalar>();
            if (j.contains("persistence")) a.persistence = j.at("persistence").get<Scalar>();
            const auto& ages = j.at("age_weights");
            a.age_weights = {ages.at("teenager").get<Scalar>(),
                             ages.at("young_adult").get<Scalar>(),
                             ages.at("adult").get<Scalar>(), ages.at("elderly").get<Scalar>()};
            for (const auto& [key, weight] : j.at("activity_weights").items()) {
                const auto act = parse_activity(key);
                if (!act) throw Error("parse", "archetype JSON: unknown activity " + key);
                a.activity_weights[*act] = weight.get<Scalar>();
            }
            if (j.contains("second_activity_p"))
                a.second_activity_p = j.at("second_activity_p").get<Scalar>();
            if (j.contains("alone_p")) a.alone_p = j.at("alone_p").get<Scalar>();
            out.push_back(std::move(a));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", std::string("archetype JSON: ") + e.what());
    }
    return out;
}

std::vector<Archetype> default_archetypes() {
    std::vector<Archetype> out;

    auto walker = [](FigureLabel name, int count, const char* style, FractionTarget screen,
                     FractionTarget wander, FractionTarget speed) {
        Archetype a;
        a.name = name;
        a.count = count;
        a.path_style = style;
        a.screen_walk = screen;
        a.wander_walk = wander;
        a.speed = speed;
        return a;
    };

    // Five walker groups. Walking-gaze targets are solved so the pooled
    // post-flaneur and zombie aggregates land on the reference table.
    Archetype w1 = walker(FigureLabel::PostFlaneur, 40, "organic_wander", {0.085, 0.08},
                          {0.840, 0.08}, {0.98, 0.27});
    w1.through_screen_share = 0.5;
    w1.age_weights = {0.05, 0.15, 0.30, 0.50};
    w1.activity_weights = {{Activity::Holding, 0.30},    {Activity::Checking, 0.25},
                           {Activity::Navigating, 0.20}, {Activity::Listening, 0.10},
                           {Activity::PhotoTaking, 0.10}, {Activity::Speaking, 0.05}};

    Archetype w2 = walker(FigureLabel::SmartphoneZombie, 40, "linear_flow", {0.829, 0.08},
                          {0.044, 0.08}, {1.20, 0.25});
    w2.age_weights = {0.35, 0.35, 0.25, 0.05};
    w2.activity_weights = {
        {Activity::Typing, 0.50}, {Activity::Reading, 0.40}, {Activity::Checking, 0.10}};
    w2.second_activity_p = 0.15;
    w2.alone_p = 0.60;

    Archetype w3 = walker(FigureLabel::SecondDegreeZombie, 49, "linear_flow", {0.4496, 0.08},
                          {0.052, 0.08}, {1.107, 0.25});
    w3.age_weights = {0.30, 0.35, 0.25, 0.10};
    w3.activity_weights = {{Activity::Typing, 0.35},
                           {Activity::Reading, 0.35},
                           {Activity::Checking, 0.15},
                           {Activity::Navigating, 0.15}};

    Archetype w4 = walker(FigureLabel::DestinationOriented, 77, "linear_flow", {0.025, 0.08},
                          {0.012, 0.08}, {1.35, 0.25});
    w4.age_weights = {0.10, 0.30, 0.45, 0.15};
    w4.activity_weights = {{Activity::Holding, 0.30},
                           {Activity::Checking, 0.25},
                           {Activity::Listening, 0.25},
                           {Activity::Speaking, 0.15},
                           {Activity::Navigating, 0.05}};

    Archetype w5 = walker(FigureLabel::InBetween, 51, "organic_wander", {0.31, 0.08},
                          {0.46, 0.08}, {0.95, 0.27});
    w5.age_weights = {0.15, 0.30, 0.35, 0.20};
    w5.activity_weights = {{Activity::Listening, 0.20}, {Activity::Holding, 0.20},
                           {Activity::Checking, 0.15},  {Activity::Navigating, 0.15},
                           {Activity::Reading, 0.15},   {Activity::Speaking, 0.15}};

    // Four walk-stop groups: stationary gaze targets and stop schedules
    // separate them; dwell ranges keep wandering pauses short and screen
    // immersion long.
    Archetype s1 = walker(FigureLabel::StationaryPostFlaneur, 20, "organic_wander",
                          {0.10, 0.08}, {0.77, 0.08}, {0.90, 0.27});
    s1.screen_stat = FractionTarget{0.20, 0.08};
    s1.wander_stat = FractionTarget{0.70, 0.08};
    s1.stop_count_weights = {0.0, 0.4, 0.4, 0.2};
    s1.stop_duration_range = {40, 70};
    s1.through_screen_share = 0.7;
    s1.age_weights = {0.05, 0.15, 0.30, 0.50};
    s1.alone_p = 0.25;
    s1.activity_weights = {{Activity::PhotoTaking, 0.35},
                           {Activity::VideoRecording, 0.15},
                           {Activity::Navigating, 0.25},
                           {Activity::Holding, 0.15},
                           {Activity::Checking, 0.10}};

    Archetype s2 = walker(FigureLabel::Disinterested, 34, "linear_flow", {0.08, 0.08},
                          {0.10, 0.08}, {0.95, 0.25});
    s2.screen_stat = FractionTarget{0.55, 0.08};
    s2.wander_stat = FractionTarget{0.20, 0.08};
    s2.stop_count_weights = {0.0, 0.45, 0.35, 0.2};
    s2.stop_duration_range = {25, 60};
    s2.age_weights = {0.20, 0.30, 0.30, 0.20};
    s2.activity_weights = {{Activity::PhotoTaking, 0.25}, {Activity::Navigating, 0.16},
                           {Activity::Listening, 0.15},   {Activity::Checking, 0.15},
                           {Activity::Holding, 0.14},     {Activity::Speaking, 0.15}};

    Archetype s3 = walker(FigureLabel::ImmersedPostFlaneur, 18, "organic_wander",
                          {0.105, 0.08}, {0.72, 0.08}, {0.86, 0.27});
    s3.screen_stat = FractionTarget{0.75, 0.08};
    s3.wander_stat = FractionTarget{0.15, 0.08};
    s3.stop_count_weights = {0.0, 0.3, 0.45, 0.25};
    s3.stop_duration_range = {50, 90};
    s3.through_screen_share = 0.7;
    s3.age_weights = {0.05, 0.15, 0.30, 0.50};
    s3.alone_p = 0.30;
    s3.activity_weights = {{Activity::PhotoTaking, 0.40},
                           {Activity::VideoRecording, 0.20},
                           {Activity::Navigating, 0.20},
                           {Activity::Holding, 0.10},
                           {Activity::Checking, 0.10}};

    Archetype s4 = walker(FigureLabel::ImmersedZombie, 21, "linear_flow", {0.655, 0.08},
                          {0.012, 0.08}, {1.05, 0.25});
    s4.screen_stat = FractionTarget{0.931, 0.08};
    s4.wander_stat = FractionTarget{0.008, 0.08};
    s4.stop_count_weights = {0.0, 1.0};
    s4.stop_duration_range = {60, 114};
    s4.short_stop_share = 0.5;
    s4.age_weights = {0.35, 0.35, 0.25, 0.05};
    s4.alone_p = 0.55;
    s4.activity_weights = {{Activity::Typing, 0.30},
                           {Activity::Reading, 0.25},
                           {Activity::PhotoTaking, 0.20},
                           {Activity::Navigating, 0.15},
                           {Activity::Checking, 0.10}};

    out.push_back(std::move(w1));
    out.push_back(std::move(w2));
    out.push_back(std::move(w3));
    out.push_back(std::move(w4));
    out.push_back(std::move(w5));
    out.push_back(std::move(s1));
    out.push_back(std::move(s2));
    out.push_back(std::move(s3));
    out.push_back(std::move(s4));
    return out;
}

ObservationArea default_area() {
    ObservationArea area;
    area.boundary = {{0.0, 0.0}, {40.0, 0.0}, {40.0, 30.0}, {0.0, 30.0}};
    area.gates = {{"gate_w", {0.0, 12.0}, {0.0, 18.0}},
                  {"gate_e", {40.0, 12.0}, {40.0, 18.0}},
                  {"gate_s", {17.0, 0.0}, {23.0, 0.0}}};
    Landmark fountain;
    fountain.name = "fountain";
    const Vec2 center(26.0, 23.0);
    for (int i = 0; i < 8; ++i) {
        const Scalar theta = (22.5 + 45.0 * i) * M_PI / 180.0;
        fountain.polygon.push_back(center + 2.5 * Vec2(std::cos(theta), std::sin(theta)));
    }
    area.landmarks.push_back(std::move(fountain));
    area.grid_origin = {0.0, 0.0};
    area.grid_cell = 0.5;
    return area;
}

}  // namespace gazewalk

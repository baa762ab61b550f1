#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace gazewalk {

// Per-second gaze code C1..C24. The code encodes both the gaze target
// and the walking/stationary posture of that second.
enum class GazeCode : std::uint8_t {
    C1 = 1, C2, C3, C4, C5, C6,          // walking, gaze on environment
    C7, C8, C9, C10, C11,                // stationary, gaze on environment
    C12, C13, C14,                       // walking, environment through screen
    C15, C16, C17, C18,                  // stationary, environment through screen
    C19, C20, C21,                       // walking, gaze on screen
    C22, C23, C24                        // stationary, gaze on screen
};

inline constexpr int kNumGazeCodes = 24;

enum class GazeClass : std::uint8_t {
    Env,               // gaze on the environment
    EnvThroughScreen,  // environment viewed via the device (photo, video, selfie)
    Screen             // gaze on the device screen
};

enum class Posture : std::uint8_t { Walking, Stationary };

constexpr GazeClass gaze_class(GazeCode c) noexcept {
    const auto v = static_cast<int>(c);
    if (v <= 11) return GazeClass::Env;
    if (v <= 18) return GazeClass::EnvThroughScreen;
    return GazeClass::Screen;
}

constexpr Posture posture(GazeCode c) noexcept {
    const auto v = static_cast<int>(c);
    const bool walking = (v <= 6) || (v >= 12 && v <= 14) || (v >= 19 && v <= 21);
    return walking ? Posture::Walking : Posture::Stationary;
}

// Wandering gaze: active scanning of the environment (wandering, photo/video
// hunting, showing directions), as opposed to fixation on a destination or
// companion. Walking codes C2-C4, stationary codes C8-C10.
constexpr bool is_wandering(GazeCode c) noexcept {
    const auto v = static_cast<int>(c);
    return (v >= 2 && v <= 4) || (v >= 8 && v <= 10);
}

constexpr bool is_screen_based(GazeCode c) noexcept {
    return gaze_class(c) != GazeClass::Env;
}

std::string to_string(GazeCode c);
std::optional<GazeCode> parse_gaze_code(std::string_view s);

std::string to_string(GazeClass c);
std::string to_string(Posture p);

// ---------------------------------------------------------------------------
// Demographics and smartphone activities

enum class Gender : std::uint8_t { Female, Male, Unknown };

enum class AgeGroup : std::uint8_t { Teenager, YoungAdult, Adult, Elderly, Unknown };

enum class Activity : std::uint8_t {
    Holding,
    Checking,
    Listening,
    Speaking,
    Reading,
    Typing,
    Navigating,
    PhotoTaking,
    VideoRecording
};

inline constexpr std::array<Activity, 9> kAllActivities = {
    Activity::Holding,   Activity::Checking,   Activity::Listening,
    Activity::Speaking,  Activity::Reading,    Activity::Typing,
    Activity::Navigating, Activity::PhotoTaking, Activity::VideoRecording};

// The four activity categories used downstream of the descriptive analysis:
// G1 listening/speaking, G2 reading/typing, G3 photo/video/navigating,
// G4 only checking / only holding.
enum class ActivityGroup : std::uint8_t { G1 = 1, G2, G3, G4 };

constexpr ActivityGroup activity_group(Activity a) noexcept {
    switch (a) {
        case Activity::Listening:
        case Activity::Speaking: return ActivityGroup::G1;
        case Activity::Reading:
        case Activity::Typing: return ActivityGroup::G2;
        case Activity::Navigating:
        case Activity::PhotoTaking:
        case Activity::VideoRecording: return ActivityGroup::G3;
        case Activity::Holding:
        case Activity::Checking: return ActivityGroup::G4;
    }
    return ActivityGroup::G4;  // unreachable
}

// Image of an activity set under the 9 -> 4 grouping. A two-activity record
// may map to two groups; downstream tallies count it in both.
std::set<ActivityGroup> activity_groups(const std::set<Activity>& activities);

std::string to_string(Gender g);
std::string to_string(AgeGroup a);
std::string to_string(Activity a);
std::string to_string(ActivityGroup g);

std::optional<Gender> parse_gender(std::string_view s);
std::optional<AgeGroup> parse_age_group(std::string_view s);
std::optional<Activity> parse_activity(std::string_view s);
std::optional<ActivityGroup> parse_activity_group(std::string_view s);

}  // namespace gazewalk

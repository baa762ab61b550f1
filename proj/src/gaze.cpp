#include "gazewalk/gaze.hpp"

#include <charconv>

namespace gazewalk {

std::string to_string(GazeCode c) {
    return "C" + std::to_string(static_cast<int>(c));
}

std::optional<GazeCode> parse_gaze_code(std::string_view s) {
    if (s.size() < 2 || (s[0] != 'C' && s[0] != 'c')) return std::nullopt;
    int v = 0;
    const auto* first = s.data() + 1;
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    if (v < 1 || v > kNumGazeCodes) return std::nullopt;
    return static_cast<GazeCode>(v);
}

std::string to_string(GazeClass c) {
    switch (c) {
        case GazeClass::Env: return "ENV";
        case GazeClass::EnvThroughScreen: return "ENV_THROUGH_SCREEN";
        case GazeClass::Screen: return "SCREEN";
    }
    return "?";
}

std::string to_string(Posture p) {
    return p == Posture::Walking ? "walking" : "stationary";
}

std::set<ActivityGroup> activity_groups(const std::set<Activity>& activities) {
    std::set<ActivityGroup> groups;
    for (Activity a : activities) groups.insert(activity_group(a));
    return groups;
}

std::string to_string(Gender g) {
    switch (g) {
        case Gender::Female: return "female";
        case Gender::Male: return "male";
        case Gender::Unknown: return "unknown";
    }
    return "?";
}

std::string to_string(AgeGroup a) {
    switch (a) {
        case AgeGroup::Teenager: return "teenager";
        case AgeGroup::YoungAdult: return "young_adult";
        case AgeGroup::Adult: return "adult";
        case AgeGroup::Elderly: return "elderly";
        case AgeGroup::Unknown: return "unknown";
    }
    return "?";
}

std::string to_string(Activity a) {
    switch (a) {
        case Activity::Holding: return "holding";
        case Activity::Checking: return "checking";
        case Activity::Listening: return "listening";
        case Activity::Speaking: return "speaking";
        case Activity::Reading: return "reading";
        case Activity::Typing: return "typing";
        case Activity::Navigating: return "navigating";
        case Activity::PhotoTaking: return "photo_taking";
        case Activity::VideoRecording: return "video_recording";
    }
    return "?";
}

std::string to_string(ActivityGroup g) {
    return "G" + std::to_string(static_cast<int>(g));
}

std::optional<Gender> parse_gender(std::string_view s) {
    if (s == "female") return Gender::Female;
    if (s == "male") return Gender::Male;
    if (s == "unknown" || s.empty()) return Gender::Unknown;
    return std::nullopt;
}

std::optional<AgeGroup> parse_age_group(std::string_view s) {
    if (s == "teenager") return AgeGroup::Teenager;
    if (s == "young_adult") return AgeGroup::YoungAdult;
    if (s == "adult") return AgeGroup::Adult;
    if (s == "elderly") return AgeGroup::Elderly;
    if (s == "unknown" || s.empty()) return AgeGroup::Unknown;
    return std::nullopt;
}

std::optional<Activity> parse_activity(std::string_view s) {
    for (Activity a : kAllActivities)
        if (to_string(a) == s) return a;
    return std::nullopt;
}

std::optional<ActivityGroup> parse_activity_group(std::string_view s) {
    if (s.size() == 2 && (s[0] == 'G' || s[0] == 'g')) {
        if (s[1] >= '1' && s[1] <= '4')
            return static_cast<ActivityGroup>(s[1] - '0');
    }
    return std::nullopt;
}

}  // namespace gazewalk

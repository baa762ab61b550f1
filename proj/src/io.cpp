#include "gazewalk/io.hpp"

#include "gazewalk/csv.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace gazewalk {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& context, const std::string& message) {
    throw Error("parse", context + ": " + message);
}

std::set<Activity> parse_activity_list(const std::string& joined, const std::string& context) {
    std::set<Activity> activities;
    std::size_t start = 0;
    while (start <= joined.size()) {
        const std::size_t sep = joined.find(';', start);
        const std::string token = joined.substr(
            start, sep == std::string::npos ? std::string::npos : sep - start);
        if (!token.empty()) {
            const auto a = parse_activity(token);
            if (!a) parse_fail(context, "unknown activity '" + token + "'");
            activities.insert(*a);
        }
        if (sep == std::string::npos) break;
        start = sep + 1;
    }
    return activities;
}

std::string join_activities(const std::set<Activity>& activities) {
    std::string out;
    for (Activity a : activities) {
        if (!out.empty()) out += ';';
        out += to_string(a);
    }
    return out;
}

void finalize(ParseResult& result, std::vector<TrajectoryRecord> records) {
    for (const TrajectoryRecord& record : records) {
        const ValidationReport report = validate_record(record);
        if (!report.ok()) parse_fail("record " + record.id, report.errors.front());
        for (const std::string& w : report.warnings) result.warnings.push_back(w);
    }
    result.records = std::move(records);
}

}  // namespace

ParseResult parse_records_csv(std::istream& samples, std::istream& metadata) {
    struct Meta {
        Gender gender = Gender::Unknown;
        AgeGroup age_group = AgeGroup::Unknown;
        int companions = 0;
        std::set<Activity> activities;
        std::string entry_gate, exit_gate;
    };
    std::map<std::string, Meta> meta;

    std::string line;
    int lineno = 0;
    while (std::getline(metadata, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = csv::split_line(line);
        if (lineno == 1 && !fields.empty() && fields[0] == "record_id") continue;
        const std::string context = "metadata line " + std::to_string(lineno);
        if (fields.size() != 7) parse_fail(context, "expected 7 fields");
        Meta m;
        const auto gender = parse_gender(fields[1]);
        if (!gender) parse_fail(context, "unknown gender '" + fields[1] + "'");
        m.gender = *gender;
        const auto age = parse_age_group(fields[2]);
        if (!age) parse_fail(context, "unknown age group '" + fields[2] + "'");
        m.age_group = *age;
        const auto companions = csv::parse_int(fields[3]);
        if (!companions || *companions < 0) parse_fail(context, "bad companions count");
        m.companions = static_cast<int>(*companions);
        m.activities = parse_activity_list(fields[4], context);
        m.entry_gate = fields[5];
        m.exit_gate = fields[6];
        if (!meta.emplace(fields[0], std::move(m)).second)
            parse_fail(context, "duplicate metadata for record " + fields[0]);
    }

    std::vector<TrajectoryRecord> records;
    std::map<std::string, std::size_t> index;  // record id -> position
    lineno = 0;
    while (std::getline(samples, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = csv::split_line(line);
        if (lineno == 1 && !fields.empty() && fields[0] == "record_id") continue;
        const std::string context = "samples line " + std::to_string(lineno);
        if (fields.size() != 5) parse_fail(context, "expected 5 fields");

        const std::string& id = fields[0];
        auto [it, inserted] = index.emplace(id, records.size());
        if (inserted) {
            TrajectoryRecord record;
            record.id = id;
            const auto m = meta.find(id);
            if (m == meta.end())
                parse_fail(context, "record " + id + " has no metadata row");
            record.gender = m->second.gender;
            record.age_group = m->second.age_group;
            record.companions = m->second.companions;
            record.activities = m->second.activities;
            record.entry_gate = m->second.entry_gate;
            record.exit_gate = m->second.exit_gate;
            records.push_back(std::move(record));
        }
        TrajectoryRecord& record = records[it->second];

        GazeSample s;
        const auto t = csv::parse_int(fields[1]);
        const auto x = csv::parse_double(fields[2]);
        const auto y = csv::parse_double(fields[3]);
        if (!t || !x || !y) parse_fail(context, "bad numeric field");
        s.t = static_cast<int>(*t);
        s.position = Vec2(*x, *y);
        const auto code = parse_gaze_code(fields[4]);
        if (!code)
            parse_fail(context, "record " + id + ": unknown gaze code '" + fields[4] + "'");
        s.code = *code;
        if (s.t != record.duration_s())
            parse_fail(context, "record " + id + ": non-consecutive timestamp " +
                                    std::to_string(s.t));
        record.samples.push_back(s);
    }

    ParseResult result;
    finalize(result, std::move(records));
    return result;
}

ParseResult parse_records_jsonl(std::istream& in) {
    std::vector<TrajectoryRecord> records;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const std::string context = "line " + std::to_string(lineno);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            parse_fail(context, e.what());
        }

        TrajectoryRecord record;
        try {
            record.id = j.at("id").get<std::string>();
            const auto gender = parse_gender(j.value("gender", "unknown"));
            if (!gender) parse_fail(context, "unknown gender");
            record.gender = *gender;
            const auto age = parse_age_group(j.value("age_group", "unknown"));
            if (!age) parse_fail(context, "unknown age group");
            record.age_group = *age;
            record.companions = j.value("companions", 0);
            for (const auto& item : j.at("activities")) {
                const auto a = parse_activity(item.get<std::string>());
                if (!a)
                    parse_fail(context, "record " + record.id + ": unknown activity '" +
                                            item.get<std::string>() + "'");
                record.activities.insert(*a);
            }
            record.entry_gate = j.value("entry_gate", "");
            record.exit_gate = j.value("exit_gate", "");
            for (const auto& item : j.at("samples")) {
                GazeSample s;
                s.t = item.at("t").get<int>();
                s.position = Vec2(item.at("x").get<double>(), item.at("y").get<double>());
                const std::string code = item.at("code").get<std::string>();
                const auto parsed = parse_gaze_code(code);
                if (!parsed)
                    parse_fail(context,
                               "record " + record.id + ": unknown gaze code '" + code + "'");
                s.code = *parsed;
                record.samples.push_back(s);
            }
        } catch (const json::exception& e) {
            parse_fail(context, std::string("missing or malformed field: ") + e.what());
        }
        records.push_back(std::move(record));
    }

    ParseResult result;
    finalize(result, std::move(records));
    return result;
}

void write_records_csv(const std::vector<TrajectoryRecord>& records,
                       std::ostream& samples, std::ostream& metadata) {
    samples << "record_id,t,x_m,y_m,code\n";
    metadata << "record_id,gender,age_group,companions,activities,entry_gate,exit_gate\n";
    for (const TrajectoryRecord& r : records) {
        metadata << r.id << ',' << to_string(r.gender) << ',' << to_string(r.age_group)
                 << ',' << r.companions << ',' << join_activities(r.activities) << ','
                 << r.entry_gate << ',' << r.exit_gate << '\n';
        for (const GazeSample& s : r.samples) {
            samples << r.id << ',' << s.t << ',' << csv::format_double(s.position.x())
                    << ',' << csv::format_double(s.position.y()) << ','
                    << to_string(s.code) << '\n';
        }
    }
}

void write_records_jsonl(const std::vector<TrajectoryRecord>& records, std::ostream& out) {
    for (const TrajectoryRecord& r : records) {
        json j;
        j["id"] = r.id;
        j["gender"] = to_string(r.gender);
        j["age_group"] = to_string(r.age_group);
        j["companions"] = r.companions;
        json activities = json::array();
        for (Activity a : r.activities) activities.push_back(to_string(a));
        j["activities"] = std::move(activities);
        j["entry_gate"] = r.entry_gate;
        j["exit_gate"] = r.exit_gate;
        json samples = json::array();
        for (const GazeSample& s : r.samples) {
            samples.push_back({{"t", s.t},
                               {"x", s.position.x()},
                               {"y", s.position.y()},
                               {"code", to_string(s.code)}});
        }
        j["samples"] = std::move(samples);
        out << j.dump() << '\n';
    }
}

namespace {

std::vector<Vec2> parse_ring(const json& coords, const std::string& context) {
    if (!coords.is_array() || coords.empty())
        parse_fail(context, "polygon has no coordinate ring");
    std::vector<Vec2> ring;
    for (const auto& pt : coords[0]) {
        if (!pt.is_array() || pt.size() < 2) parse_fail(context, "bad coordinate");
        ring.emplace_back(pt[0].get<double>(), pt[1].get<double>());
    }
    // GeoJSON repeats the first vertex to close the ring; drop the repeat.
    if (ring.size() >= 2 && (ring.front() - ring.back()).norm() < 1e-12)
        ring.pop_back();
    return ring;
}

json ring_to_coords(const std::vector<Vec2>& ring) {
    json coords = json::array();
    json outer = json::array();
    for (const Vec2& v : ring) outer.push_back({v.x(), v.y()});
    if (!ring.empty()) outer.push_back({ring.front().x(), ring.front().y()});
    coords.push_back(std::move(outer));
    return coords;
}

}  // namespace

ObservationArea load_area(std::istream& in) {
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        parse_fail("area", e.what());
    }
    if (j.value("type", "") != "FeatureCollection")
        parse_fail("area", "expected a GeoJSON FeatureCollection");

    ObservationArea area;
    bool have_boundary = false;
    bool have_origin = false;
    for (const auto& feature : j.value("features", json::array())) {
        const json props = feature.value("properties", json::object());
        const std::string role = props.value("role", "");
        const json geom = feature.value("geometry", json::object());
        const std::string type = geom.value("type", "");
        if (role == "boundary") {
            if (type != "Polygon") parse_fail("area", "boundary must be a Polygon");
            area.boundary = parse_ring(geom.at("coordinates"), "boundary");
            if (props.contains("grid_cell")) area.grid_cell = props["grid_cell"].get<double>();
            if (props.contains("grid_origin")) {
                const auto& o = props["grid_origin"];
                area.grid_origin = Vec2(o[0].get<double>(), o[1].get<double>());
                have_origin = true;
            }
            have_boundary = true;
        } else if (role == "gate") {
            if (type != "LineString") parse_fail("area", "gate must be a LineString");
            const auto& coords = geom.at("coordinates");
            if (coords.size() != 2) parse_fail("area", "gate needs exactly 2 points");
            Gate g;
            g.name = props.value("name", "");
            if (g.name.empty()) parse_fail("area", "gate feature is missing a name");
            g.a = Vec2(coords[0][0].get<double>(), coords[0][1].get<double>());
            g.b = Vec2(coords[1][0].get<double>(), coords[1][1].get<double>());
            area.gates.push_back(std::move(g));
        } else if (role == "landmark" || role == "obstacle") {
            if (type != "Polygon") parse_fail("area", "landmark must be a Polygon");
            Landmark l;
            l.name = props.value("name", role);
            l.polygon = parse_ring(geom.at("coordinates"), "landmark");
            area.landmarks.push_back(std::move(l));
        }
    }
    if (!have_boundary) parse_fail("area", "no boundary feature found");
    if (!have_origin) {
        Vec2 lo = area.boundary.front();
        for (const Vec2& v : area.boundary) lo = lo.cwiseMin(v);
        area.grid_origin = lo;
    }
    validate_area(area);
    return area;
}

ObservationArea load_area_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io", "cannot open area file: " + path);
    return load_area(in);
}

void save_area(const ObservationArea& area, std::ostream& out) {
    json features = json::array();
    {
        json f;
        f["type"] = "Feature";
        f["properties"] = {{"role", "boundary"},
                           {"grid_cell", area.grid_cell},
                           {"grid_origin", {area.grid_origin.x(), area.grid_origin.y()}}};
        f["geometry"] = {{"type", "Polygon"}, {"coordinates", ring_to_coords(area.boundary)}};
        features.push_back(std::move(f));
    }
    for (const Gate& g : area.gates) {
        json f;
        f["type"] = "Feature";
        f["properties"] = {{"role", "gate"}, {"name", g.name}};
        f["geometry"] = {{"type", "LineString"},
                         {"coordinates", {{g.a.x(), g.a.y()}, {g.b.x(), g.b.y()}}}};
        features.push_back(std::move(f));
    }
    for (const Landmark& l : area.landmarks) {
        json f;
        f["type"] = "Feature";
        f["properties"] = {{"role", "landmark"}, {"name", l.name}};
        f["geometry"] = {{"type", "Polygon"}, {"coordinates", ring_to_coords(l.polygon)}};
        features.push_back(std::move(f));
    }
    json j;
    j["type"] = "FeatureCollection";
    j["features"] = std::move(features);
    out << j.dump(2) << '\n';
}

void write_features_csv(const std::vector<FeatureVector>& features, std::ostream& out) {
    out << "record_id,pct_screen_walk,pct_wander_walk,pct_screen_stat,pct_wander_stat,"
           "walking_speed,walk_seconds,stat_seconds,n_stops,total_stop_duration,"
           "activity_groups\n";
    for (const FeatureVector& f : features) {
        out << f.record_id << ',' << csv::format_double(f.pct_screen_walk) << ','
            << csv::format_double(f.pct_wander_walk) << ',';
        if (f.pct_screen_stat) out << csv::format_double(*f.pct_screen_stat);
        out << ',';
        if (f.pct_wander_stat) out << csv::format_double(*f.pct_wander_stat);
        out << ',' << csv::format_double(f.walking_speed) << ',' << f.walk_seconds << ','
            << f.stat_seconds << ',' << f.n_stops << ',' << f.total_stop_duration << ',';
        std::string groups;
        for (ActivityGroup g : f.activity_groups) {
            if (!groups.empty()) groups += ';';
            groups += to_string(g);
        }
        out << groups << '\n';
    }
}

std::vector<FeatureVector> read_features_csv(std::istream& in) {
    std::vector<FeatureVector> features;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = csv::split_line(line);
        if (lineno == 1 && !fields.empty() && fields[0] == "record_id") continue;
        const std::string context = "features line " + std::to_string(lineno);
        if (fields.size() != 11) parse_fail(context, "expected 11 fields");
        FeatureVector f;
        f.record_id = fields[0];
        const auto screen_walk = csv::parse_double(fields[1]);
        const auto wander_walk = csv::parse_double(fields[2]);
        const auto speed = csv::parse_double(fields[5]);
        const auto walk_s = csv::parse_int(fields[6]);
        const auto stat_s = csv::parse_int(fields[7]);
        const auto stops = csv::parse_int(fields[8]);
        const auto stop_dur = csv::parse_int(fields[9]);
        if (!screen_walk || !wander_walk || !speed || !walk_s || !stat_s || !stops ||
            !stop_dur)
            parse_fail(context, "bad numeric field");
        f.pct_screen_walk = *screen_walk;
        f.pct_wander_walk = *wander_walk;
        f.pct_screen_stat = csv::parse_double(fields[3]);
        f.pct_wander_stat = csv::parse_double(fields[4]);
        f.walking_speed = *speed;
        f.walk_seconds = static_cast<int>(*walk_s);
        f.stat_seconds = static_cast<int>(*stat_s);
        f.n_stops = static_cast<int>(*stops);
        f.total_stop_duration = static_cast<int>(*stop_dur);
        std::size_t start = 0;
        const std::string& joined = fields[10];
        while (start < joined.size()) {
            const std::size_t sep = joined.find(';', start);
            const std::string token = joined.substr(
                start, sep == std::string::npos ? std::string::npos : sep - start);
            const auto g = parse_activity_group(token);
            if (!g) parse_fail(context, "unknown activity group '" + token + "'");
            f.activity_groups.insert(*g);
            if (sep == std::string::npos) break;
            start = sep + 1;
        }
        features.push_back(std::move(f));
    }
    return features;
}

}  // namespace gazewalk

#include "gazewalk/stats.hpp"

#include "gazewalk/csv.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace gazewalk {

Scalar normal_cdf(Scalar z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

Scalar normal_quantile(Scalar p) {
    if (!(p > 0.0 && p < 1.0))
        throw Error("bad_input", "normal_quantile requires p in (0,1)");

    // Acklam's rational approximation, then one Halley step against erfc.
    static const Scalar a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const Scalar b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const Scalar c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const Scalar d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const Scalar p_low = 0.02425;

    Scalar x;
    if (p < p_low) {
        const Scalar q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const Scalar q = p - 0.5;
        const Scalar r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const Scalar q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    const Scalar e = normal_cdf(x) - p;
    const Scalar u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
Scalar beta_cf(Scalar a, Scalar b, Scalar x) {
    constexpr int kMaxIter = 300;
    constexpr Scalar kEps = 1e-15;
    constexpr Scalar kTiny = 1e-300;

    const Scalar qab = a + b;
    const Scalar qap = a + 1.0;
    const Scalar qam = a - 1.0;
    Scalar c = 1.0;
    Scalar d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    Scalar h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        Scalar aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const Scalar del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

Scalar incomplete_beta(Scalar a, Scalar b, Scalar x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const Scalar ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const Scalar front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

Scalar student_t_cdf(Scalar t, Scalar df) {
    if (df <= 0.0) throw Error("bad_input", "t distribution needs df > 0");
    const Scalar x = df / (df + t * t);
    const Scalar tail = 0.5 * incomplete_beta(df / 2.0, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
}

Scalar f_cdf(Scalar f, Scalar df1, Scalar df2) {
    if (df1 <= 0.0 || df2 <= 0.0) throw Error("bad_input", "F distribution needs df > 0");
    if (f <= 0.0) return 0.0;
    return incomplete_beta(df1 / 2.0, df2 / 2.0, df1 * f / (df1 * f + df2));
}

namespace {

struct Moments {
    Scalar mean = 0.0;
    Scalar var = 0.0;  // sample variance, n-1 denominator
    std::size_t n = 0;
};

Moments moments(std::span<const Scalar> xs) {
    Moments m;
    m.n = xs.size();
    if (m.n == 0) return m;
    m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / m.n;
    if (m.n >= 2) {
        Scalar ss = 0.0;
        for (Scalar x : xs) ss += (x - m.mean) * (x - m.mean);
        m.var = ss / (m.n - 1);
    }
    return m;
}

}  // namespace

TTestResult t_test(std::span<const Scalar> group_a, std::span<const Scalar> group_b,
                   TTestVariant variant) {
    if (group_a.size() < 2 || group_b.size() < 2)
        throw Error("bad_input", "t-test needs at least 2 values per group");
    const Moments a = moments(group_a);
    const Moments b = moments(group_b);
    if (a.var + b.var == 0.0)
        throw Error("degenerate_variance", "t-test is undefined for zero combined variance");

    TTestResult r;
    r.variant = variant;
    r.mean_a = a.mean;
    r.sd_a = std::sqrt(a.var);
    r.mean_b = b.mean;
    r.sd_b = std::sqrt(b.var);

    const Scalar n1 = static_cast<Scalar>(a.n);
    const Scalar n2 = static_cast<Scalar>(b.n);
    if (variant == TTestVariant::Pooled) {
        r.df = n1 + n2 - 2.0;
        const Scalar sp2 = ((n1 - 1.0) * a.var + (n2 - 1.0) * b.var) / r.df;
        r.t = (a.mean - b.mean) / std::sqrt(sp2 * (1.0 / n1 + 1.0 / n2));
    } else {
        const Scalar se2 = a.var / n1 + b.var / n2;
        r.t = (a.mean - b.mean) / std::sqrt(se2);
        r.df = se2 * se2 /
               (a.var * a.var / (n1 * n1 * (n1 - 1.0)) + b.var * b.var / (n2 * n2 * (n2 - 1.0)));
    }
    r.p = 2.0 * (1.0 - student_t_cdf(std::fabs(r.t), r.df));
    return r;
}

long cochran_n(const SampleSizeParams& params) {
    if (!(params.precision > 0.0 && params.precision < 1.0))
        throw Error("bad_input", "precision must be in (0,1)");
    if (!(params.confidence > 0.0 && params.confidence < 1.0))
        throw Error("bad_input", "confidence must be in (0,1)");
    if (params.population < 1) throw Error("bad_input", "population must be >= 1");

    const Scalar z = normal_quantile(1.0 - (1.0 - params.confidence) / 2.0);
    const Scalar p = params.proportion;
    const Scalar n0 = z * z * p * (1.0 - p) / (params.precision * params.precision);
    const Scalar n = n0 / (1.0 + (n0 - 1.0) / static_cast<Scalar>(params.population));
    return static_cast<long>(std::ceil(n));
}

std::map<std::string, Scalar> disagreement_rates(const Coding& coding_a,
                                                 const Coding& coding_b,
                                                 const std::vector<std::string>& attributes) {
    std::vector<std::string> only_a, only_b;
    for (const auto& [id, _] : coding_a)
        if (!coding_b.count(id)) only_a.push_back(id);
    for (const auto& [id, _] : coding_b)
        if (!coding_a.count(id)) only_b.push_back(id);
    if (!only_a.empty() || !only_b.empty()) {
        std::string msg = "codings cover different record ids;";
        for (const auto& id : only_a) msg += " only-in-A:" + id;
        for (const auto& id : only_b) msg += " only-in-B:" + id;
        throw Error("id_mismatch", msg);
    }
    if (coding_a.empty()) throw Error("bad_input", "empty codings");

    std::map<std::string, Scalar> rates;
    for (const std::string& attr : attributes) {
        long differing = 0;
        for (const auto& [id, values_a] : coding_a) {
            const auto& values_b = coding_b.at(id);
            const auto it_a = values_a.find(attr);
            const auto it_b = values_b.find(attr);
            const std::string va = it_a == values_a.end() ? "" : it_a->second;
            const std::string vb = it_b == values_b.end() ? "" : it_b->second;
            if (va != vb) ++differing;
        }
        rates[attr] = 100.0 * static_cast<Scalar>(differing) /
                      static_cast<Scalar>(coding_a.size());
    }
    return rates;
}

Scalar round2(Scalar v) {
    return std::round(v * 100.0) / 100.0;
}

std::vector<CountRow> read_counts_csv(std::istream& in) {
    std::vector<CountRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = csv::split_line(line);
        if (lineno == 1 && !fields.empty() && fields[0] == "age_group") continue;
        if (fields.size() != 4)
            throw Error("parse", "counts line " + std::to_string(lineno) + ": expected 4 fields");
        CountRow row;
        const auto age = parse_age_group(fields[0]);
        const auto gender = parse_gender(fields[1]);
        const auto passersby = csv::parse_int(fields[2]);
        const auto users = csv::parse_int(fields[3]);
        if (!age || !gender || !passersby || !users)
            throw Error("parse", "counts line " + std::to_string(lineno) + ": bad field");
        row.age_group = *age;
        row.gender = *gender;
        row.passersby = *passersby;
        row.smartphone_users = *users;
        rows.push_back(row);
    }
    return rows;
}

Scalar smartphone_share(const std::vector<CountRow>& counts, std::optional<AgeGroup> age,
                        std::optional<Gender> gender) {
    long passersby = 0;
    long users = 0;
    for (const CountRow& row : counts) {
        if (age && row.age_group != *age) continue;
        if (gender && row.gender != *gender) continue;
        passersby += row.passersby;
        users += row.smartphone_users;
    }
    if (passersby == 0) return 0.0;
    return 100.0 * static_cast<Scalar>(users) / static_cast<Scalar>(passersby);
}

void write_table_csv(const Table& table, std::ostream& out) {
    out << csv::join(table.header) << '\n';
    for (const auto& row : table.rows) out << csv::join(row) << '\n';
}

namespace {

std::string pct2(Scalar v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

DescriptiveReport descriptive_report(const std::vector<CountRow>& counts,
                                     const std::vector<TrajectoryRecord>& records) {
    DescriptiveReport report;

    {
        Table& t = report.smartphone_share;
        t.name = "smartphone_share";
        t.header = {"age_group", "passersby_female", "passersby_male", "passersby_total",
                    "users_female", "users_male", "users_total",
                    "share_female", "share_male", "share_total"};
        const AgeGroup ages[] = {AgeGroup::Teenager, AgeGroup::YoungAdult, AgeGroup::Adult,
                                 AgeGroup::Elderly};
        auto sum = [&](std::optional<AgeGroup> age, std::optional<Gender> g, bool users) {
            long total = 0;
            for (const CountRow& row : counts) {
                if (age && row.age_group != *age) continue;
                if (g && row.gender != *g) continue;
                total += users ? row.smartphone_users : row.passersby;
            }
            return total;
        };
        auto add_row = [&](const std::string& label, std::optional<AgeGroup> age) {
            t.rows.push_back(
                {label, std::to_string(sum(age, Gender::Female, false)),
                 std::to_string(sum(age, Gender::Male, false)),
                 std::to_string(sum(age, std::nullopt, false)),
                 std::to_string(sum(age, Gender::Female, true)),
                 std::to_string(sum(age, Gender::Male, true)),
                 std::to_string(sum(age, std::nullopt, true)),
                 pct2(smartphone_share(counts, age, Gender::Female)),
                 pct2(smartphone_share(counts, age, Gender::Male)),
                 pct2(smartphone_share(counts, age, std::nullopt))});
        };
        for (AgeGroup age : ages) add_row(to_string(age), age);
        add_row("overall", std::nullopt);
    }

    const Scalar n = static_cast<Scalar>(records.size());

    {
        Table& t = report.activity_shares;
        t.name = "activity_shares";
        t.header = {"activity", "records", "share_pct"};
        for (Activity a : kAllActivities) {
            long count = 0;
            for (const TrajectoryRecord& r : records)
                if (r.activities.count(a)) ++count;
            t.rows.push_back({to_string(a), std::to_string(count),
                              pct2(n > 0 ? 100.0 * count / n : 0.0)});
        }
    }

    {
        Table& t = report.companion_shares;
        t.name = "companion_shares";
        t.header = {"group", "records", "share_pct"};
        long alone = 0;
        for (const TrajectoryRecord& r : records)
            if (r.companions == 0) ++alone;
        const long accompanied = static_cast<long>(records.size()) - alone;
        t.rows.push_back({"alone", std::to_string(alone),
                          pct2(n > 0 ? 100.0 * alone / n : 0.0)});
        t.rows.push_back({"accompanied", std::to_string(accompanied),
                          pct2(n > 0 ? 100.0 * accompanied / n : 0.0)});
    }

    {
        Table& t = report.stop_behavior;
        t.name = "stop_behavior";
        t.header = {"group", "records", "share_pct"};
        long no_stop = 0, paused = 0, paused_screen = 0, only_when_stopped = 0;
        for (const TrajectoryRecord& r : records) {
            int stat_screen = 0, walk_screen = 0, stat_n = 0;
            for (const GazeSample& s : r.samples) {
                const bool screen = is_screen_based(s.code);
                if (posture(s.code) == Posture::Stationary) {
                    ++stat_n;
                    if (screen) ++stat_screen;
                } else if (screen) {
                    ++walk_screen;
                }
            }
            if (stat_n == 0) {
                ++no_stop;
            } else {
                ++paused;
                if (stat_screen > 0) ++paused_screen;
                if (stat_screen > 0 && walk_screen == 0) ++only_when_stopped;
            }
        }
        t.rows.push_back({"walked_without_stopping", std::to_string(no_stop),
                          pct2(n > 0 ? 100.0 * no_stop / n : 0.0)});
        t.rows.push_back({"paused", std::to_string(paused),
                          pct2(n > 0 ? 100.0 * paused / n : 0.0)});
        t.rows.push_back({"smartphone_while_paused", std::to_string(paused_screen),
                          pct2(paused > 0 ? 100.0 * paused_screen / paused : 0.0)});
        t.rows.push_back({"smartphone_only_when_stopped", std::to_string(only_when_stopped),
                          pct2(n > 0 ? 100.0 * only_when_stopped / n : 0.0)});
    }

    {
        Table& t = report.gaze_aggregates;
        t.name = "gaze_aggregates";
        t.header = {"slice", "env_pct", "env_through_screen_pct", "screen_pct",
                    "screen_based_pct"};
        long total[3] = {0, 0, 0}, walk[3] = {0, 0, 0}, stat[3] = {0, 0, 0};
        for (const TrajectoryRecord& r : records) {
            for (const GazeSample& s : r.samples) {
                const int cls = static_cast<int>(gaze_class(s.code));
                ++total[cls];
                if (posture(s.code) == Posture::Walking)
                    ++walk[cls];
                else
                    ++stat[cls];
            }
        }
        auto add = [&](const std::string& label, const long c[3]) {
            const Scalar sum = static_cast<Scalar>(c[0] + c[1] + c[2]);
            auto share = [&](long v) { return sum > 0 ? 100.0 * v / sum : 0.0; };
            t.rows.push_back({label, pct2(share(c[0])), pct2(share(c[1])), pct2(share(c[2])),
                              pct2(share(c[1]) + share(c[2]))});
        };
        add("all_seconds", total);
        add("walking", walk);
        add("stationary", stat);
    }

    {
        Table& t = report.speed_aggregates;
        t.name = "speed_aggregates";
        t.header = {"metric", "value"};
        std::vector<Scalar> speeds;
        for (const TrajectoryRecord& r : records) {
            try {
                speeds.push_back(walking_speed(r));
            } catch (const Error&) {
                // records without a walking phase carry no speed
            }
        }
        const Moments m = moments(speeds);
        t.rows.push_back({"n", std::to_string(m.n)});
        t.rows.push_back({"mean_mps", pct2(m.mean)});
        t.rows.push_back({"sd_mps", pct2(std::sqrt(m.var))});
    }

    return report;
}

}  // namespace gazewalk

#pragma once

#include "gazewalk/features.hpp"
#include "gazewalk/types.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace gazewalk {

// ---------------------------------------------------------------------------
// Distribution functions (accurate to ~1e-12, pinned by tests)

Scalar normal_cdf(Scalar z);
Scalar normal_quantile(Scalar p);  // inverse of normal_cdf, p in (0,1)

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
Scalar incomplete_beta(Scalar a, Scalar b, Scalar x);

Scalar student_t_cdf(Scalar t, Scalar df);
Scalar f_cdf(Scalar f, Scalar df1, Scalar df2);

// ---------------------------------------------------------------------------
// Two-sample t-test

enum class TTestVariant { Pooled, Welch };

struct TTestResult {
    Scalar t = 0.0;
    Scalar df = 0.0;
    Scalar p = 1.0;  // two-sided
    Scalar mean_a = 0.0, sd_a = 0.0;
    Scalar mean_b = 0.0, sd_b = 0.0;
    TTestVariant variant = TTestVariant::Pooled;
};

// Throws Error("degenerate_variance") when the combined variance is zero and
// Error("bad_input") when either group has fewer than two values.
TTestResult t_test(std::span<const Scalar> group_a, std::span<const Scalar> group_b,
                   TTestVariant variant = TTestVariant::Pooled);

// ---------------------------------------------------------------------------
// Cochran sample size

struct SampleSizeParams {
    long population = 0;       // N
    Scalar confidence = 0.90;  // two-sided confidence level
    Scalar precision = 0.05;   // e
    Scalar proportion = 0.5;   // p
};

// n0 = z^2 p (1-p) / e^2 with the finite-population correction
// n = n0 / (1 + (n0 - 1) / N); returns the ceiling.
long cochran_n(const SampleSizeParams& params);

// ---------------------------------------------------------------------------
// Inter-rater disagreement

// record id -> attribute -> coded value
using Coding = std::map<std::string, std::map<std::string, std::string>>;

// Per attribute, the percentage of record ids on which the codings differ
// (full precision; presentation rounds to 2 decimals). Throws Error("id_mismatch")
// listing the symmetric difference when the codings cover different ids.
std::map<std::string, Scalar> disagreement_rates(const Coding& coding_a,
                                                 const Coding& coding_b,
                                                 const std::vector<std::string>& attributes);

Scalar round2(Scalar v);

// ---------------------------------------------------------------------------
// Descriptive tables

struct CountRow {
    AgeGroup age_group = AgeGroup::Unknown;
    Gender gender = Gender::Unknown;
    long passersby = 0;
    long smartphone_users = 0;
};

std::vector<CountRow> read_counts_csv(std::istream& in);

// Percentage of passers-by with a visible smartphone in the selected slice
// (no filter = overall). Full precision; 0 when the denominator is empty.
Scalar smartphone_share(const std::vector<CountRow>& counts,
                        std::optional<AgeGroup> age = std::nullopt,
                        std::optional<Gender> gender = std::nullopt);

// Simple string table, exported as CSV with 2-decimal percentages.
struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_table_csv(const Table& table, std::ostream& out);

struct DescriptiveReport {
    Table smartphone_share;   // age group x gender shares
    Table activity_shares;    // per activity, % of records (two-activity counted twice)
    Table companion_shares;   // alone vs accompanied
    Table stop_behavior;      // no-stop / paused / smartphone-while-paused shares
    Table gaze_aggregates;    // corpus-level gaze class shares
    Table speed_aggregates;   // walking speed mean/SD
};

DescriptiveReport descriptive_report(const std::vector<CountRow>& counts,
                                     const std::vector<TrajectoryRecord>& records);

}  // namespace gazewalk

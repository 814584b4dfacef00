#pragma once

// File formats: dataset CSV, trace CSV, prior-curve CSV, divergence CSV,
// custom ν-prior JSON, and the JSON forms of every report.

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tjeffreys/priors.hpp"
#include "tjeffreys/propriety.hpp"
#include "tjeffreys/regression.hpp"
#include "tjeffreys/sampler.hpp"
#include "tjeffreys/summary.hpp"

namespace tjeffreys::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Header row required; column `y` first, covariates after.
Dataset parse_dataset_csv(std::istream& in, bool intercept);
Dataset load_dataset_csv(const std::filesystem::path& path, bool intercept);
void write_dataset_csv(std::ostream& out, const Dataset& data);

/// "independence", "jeffreys-rule" or "custom:<file>".
PriorSpec parse_prior(std::string_view arg, int p);

/// Custom ν prior:
///   {"schema_version": 1, "a": 2.0, "shape": "independence" | "jeffreys-rule" | "flat" | "table",
///    "support": [lower, upper|null], "table": [[nu, density], ...]}
/// "table" densities are interpolated linearly in (log ν, log density) and
/// vanish outside the tabulated range.
PriorSpec parse_custom_prior(const json& doc, int p, std::string label = "custom");
PriorSpec load_custom_prior(const std::filesystem::path& path, int p);

void write_trace_csv(std::ostream& out, const Trace& trace);
/// Reads draws and iteration indices back; metadata is not part of the CSV.
Trace read_trace_csv(std::istream& in);

struct PriorCurvePoint {
    double nu = 0.0;
    double log_unnormalized = 0.0;
    double density = 0.0;
    bool operator==(const PriorCurvePoint&) const = default;
};
void write_prior_curve_csv(std::ostream& out, const std::vector<PriorCurvePoint>& rows, std::string_view kind);
std::vector<PriorCurvePoint> read_prior_curve_csv(std::istream& in);

void write_divergence_csv(std::ostream& out, const std::vector<Evidence>& evidence);

json to_json(const AuditReport& report);
AuditReport audit_report_from_json(const json& doc);

json to_json(const Summary& summary);
Summary summary_from_json(const json& doc);

/// Writes with 17 significant digits so doubles round-trip.
std::string format_double(double v);

}  // namespace tjeffreys::io

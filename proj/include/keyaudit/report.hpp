#pragma once

#include <string>

namespace keyaudit {

/// All report builders take and return JSON text; schemas are versioned with
/// a top-level "schema_version" field.

/// Entropy, information, distance-to-uniform, guessing probability and
/// per-singleton subset gaps for a distribution file.
std::string criteria_report_json(const std::string& dist_json);

/// Audit of a claimed single-number bound. Claim schema:
///   { "criterion": "info" | "vd" | "trace", "value": x, "n_bits": n,
///     "ensemble": {...} (optional, trace only) }
std::string audit_report_json(const std::string& claim_json);

/// Runs a single simulation or a sweep. `grid_json` is a JSON array of
/// transmittance values or empty for a single run. Returns
///   { "schema_version": 1, "rows": [tallies...], "csv": "..." }.
std::string simulate_json(const std::string& config_json,
                          const std::string& attack_json,
                          const std::string& grid_json);

/// Seven-row perceived-vs-real table computed from an instance bundle:
///   { "claim": {...}, "distribution": {...}, "hash": {...},
///     "protocol_config": {...}, "attack": {...} }
std::string table_report_json(const std::string& instance_json);

/// Render a table report (JSON text from table_report_json) as Markdown or
/// CSV. Deterministic: fixed row order, LF line endings.
std::string table_report_to_markdown(const std::string& report_json);
std::string table_report_to_csv(const std::string& report_json);

}  // namespace keyaudit

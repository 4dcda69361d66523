#pragma once

#include <string>

#include "qhdkit/bench.hpp"

namespace qhdkit {

/// Load a problem from JSON text. Two schemas are accepted:
///   {"Q": [[...]], "b": [...], "bounds": [[L,U], ...]}
///   {"vars": ["x","y"], "expr": "<grammar string>", "bounds": [[L,U], ...]}
/// Bounds default to the unit box when omitted.
Problem problem_from_json(const std::string& text);
Problem problem_from_file(const std::string& path);

/// Report serialization. The "canonical" section is byte-stable for a
/// fixed config and seed; wall-clock readings live under "timing".
std::string report_to_json(const RunReport& report);
void write_report_json(const RunReport& report, const std::string& path);

/// One row per sample: outcome, decoded coords, refined coords, objective,
/// success flag.
std::string report_to_csv(const RunReport& report);
void write_report_csv(const RunReport& report, const std::string& path);

std::string warmstart_to_json(const WarmstartReport& report);

/// The note emitted into every benchmark output directory describing what
/// the desk-scale suite does and does not reproduce.
std::string bench_readme_text();
void write_bench_readme(const std::string& dir);

}  // namespace qhdkit

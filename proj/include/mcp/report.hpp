#pragma once

// Trial reports.
//
// CSV: '#' comment lines carrying the code version and the configuration
// as compact JSON, then a header row and one row per trial in the column
// order of kCsvColumns. Reals are printed with %.17g, failed trials print
// "nan" for the error columns, and text fields are quoted per RFC 4180
// when needed.
//
// JSON: {"code_version", "config", "resolution_rule", "records": [...],
// "summaries": [...], "stability_slopes": [...], "lemma_reports": [...]},
// where each record object mirrors TrialRecord and NaN is written as null.

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mcp/harness.hpp"

namespace mcp {

enum class ReportFormat { kCsv, kJson };

ReportFormat parse_report_format(std::string_view name);

inline constexpr std::array<const char*, 25> kCsvColumns = {
    "experiment_id", "trial",          "n",
    "m",             "d",              "sigma",
    "truth_seed",    "matrix_seed",    "noise_seed",
    "truth_entry",   "truth_bits",     "solver_budget",
    "status",        "recovered_entry", "recovered_bits",
    "residual",      "noise_norm",     "candidates_scored",
    "l2",            "l2_per_element", "quantized_l2",
    "bound",         "bound_probability", "theorem1_threshold",
    "within_bound"};

std::string code_version();

void write_csv(const ExperimentResult& result, std::ostream& out);
void write_json(const ExperimentResult& result, std::ostream& out);

/// Writes to `path`; throws IoError naming the path on failure.
void emit_report(const ExperimentResult& result, ReportFormat format, const std::string& path);

/// Records of a JSON report.
std::vector<TrialRecord> parse_report_records(std::string_view json_text);

/// One row per report: event_name,trials,hits,empirical_rate,analytic_bound,pass.
void write_lemma_csv(const std::vector<TailCheckReport>& reports, std::ostream& out);

/// Fixed-width table of grid summaries for terminals.
void write_summary_table(const ExperimentResult& result, std::ostream& out);

/// RFC 4180 field quoting.
std::string csv_field(std::string_view text);
std::string format_real(double x);

}  // namespace mcp

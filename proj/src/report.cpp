#include "mcp/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "mcp/errors.hpp"

namespace mcp {

namespace {

using ojson = nlohmann::ordered_json;

ojson real_json(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

double real_from(const nlohmann::json& v) {
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

ojson record_json(const TrialRecord& r) {
  ojson j;
  j["experiment_id"] = r.experiment_id;
  j["trial"] = r.trial;
  j["n"] = r.n;
  j["m"] = r.m;
  j["d"] = r.d;
  j["sigma"] = real_json(r.sigma);
  j["truth_seed"] = r.truth_seed;
  j["matrix_seed"] = r.matrix_seed;
  j["noise_seed"] = r.noise_seed;
  j["truth_entry"] = r.truth_entry;
  j["truth_bits"] = r.truth_bits;
  j["solver_budget"] = r.solver_budget;
  j["status"] = r.status;
  j["recovered_entry"] = r.recovered_entry;
  j["recovered_bits"] = r.recovered_bits;
  j["residual"] = real_json(r.residual);
  j["noise_norm"] = real_json(r.noise_norm);
  j["candidates_scored"] = r.candidates_scored;
  j["l2"] = real_json(r.l2);
  j["l2_per_element"] = real_json(r.l2_per_element);
  j["quantized_l2"] = real_json(r.quantized_l2);
  j["bound"] = real_json(r.bound);
  j["bound_probability"] = real_json(r.bound_probability);
  j["theorem1_threshold"] = real_json(r.theorem1_threshold);
  j["within_bound"] = r.within_bound;
  return j;
}

TrialRecord record_from(const nlohmann::json& j) {
  TrialRecord r;
  r.experiment_id = j.at("experiment_id").get<std::string>();
  r.trial = j.at("trial").get<std::uint64_t>();
  r.n = j.at("n").get<std::size_t>();
  r.m = j.at("m").get<int>();
  r.d = j.at("d").get<std::size_t>();
  r.sigma = real_from(j.at("sigma"));
  r.truth_seed = j.at("truth_seed").get<std::uint64_t>();
  r.matrix_seed = j.at("matrix_seed").get<std::uint64_t>();
  r.noise_seed = j.at("noise_seed").get<std::uint64_t>();
  r.truth_entry = j.at("truth_entry").get<std::string>();
  r.truth_bits = j.at("truth_bits").get<int>();
  r.solver_budget = j.at("solver_budget").get<int>();
  r.status = j.at("status").get<std::string>();
  r.recovered_entry = j.at("recovered_entry").get<std::string>();
  r.recovered_bits = j.at("recovered_bits").get<int>();
  r.residual = real_from(j.at("residual"));
  r.noise_norm = real_from(j.at("noise_norm"));
  r.candidates_scored = j.at("candidates_scored").get<std::uint64_t>();
  r.l2 = real_from(j.at("l2"));
  r.l2_per_element = real_from(j.at("l2_per_element"));
  r.quantized_l2 = real_from(j.at("quantized_l2"));
  r.bound = real_from(j.at("bound"));
  r.bound_probability = real_from(j.at("bound_probability"));
  r.theorem1_threshold = real_from(j.at("theorem1_threshold"));
  r.within_bound = j.at("within_bound").get<bool>();
  return r;
}

std::string resolution_rule(const ExperimentConfig& cfg) {
  return cfg.m ? "fixed m" : "m = ceil(ln n), natural log";
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv" || name == "CSV") return ReportFormat::kCsv;
  if (name == "json" || name == "JSON") return ReportFormat::kJson;
  throw ConfigError("unknown report format '" + std::string(name) + "'");
}

std::string code_version() { return MCP_VERSION; }

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const ExperimentResult& result, std::ostream& out) {
  out << "# code_version=" << code_version() << "\r\n";
  out << "# config=" << to_json(result.config).dump() << "\r\n";
  out << "# resolution_rule=" << resolution_rule(result.config) << "\r\n";
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    out << (i ? "," : "") << kCsvColumns[i];
  }
  out << "\r\n";
  for (const auto& r : result.records) {
    out << csv_field(r.experiment_id) << ',' << r.trial << ',' << r.n << ',' << r.m << ',' << r.d
        << ',' << format_real(r.sigma) << ',' << r.truth_seed << ',' << r.matrix_seed << ','
        << r.noise_seed << ',' << csv_field(r.truth_entry) << ',' << r.truth_bits << ','
        << r.solver_budget << ',' << csv_field(r.status) << ',' << csv_field(r.recovered_entry)
        << ',' << r.recovered_bits << ',' << format_real(r.residual) << ','
        << format_real(r.noise_norm) << ',' << r.candidates_scored << ',' << format_real(r.l2)
        << ',' << format_real(r.l2_per_element) << ',' << format_real(r.quantized_l2) << ','
        << format_real(r.bound) << ',' << format_real(r.bound_probability) << ','
        << format_real(r.theorem1_threshold) << ',' << (r.within_bound ? "true" : "false")
        << "\r\n";
  }
}

void write_json(const ExperimentResult& result, std::ostream& out) {
  ojson j;
  j["code_version"] = code_version();
  j["config"] = to_json(result.config);
  j["resolution_rule"] = resolution_rule(result.config);
  auto records = ojson::array();
  for (const auto& r : result.records) records.push_back(record_json(r));
  j["records"] = std::move(records);
  auto summaries = ojson::array();
  for (const auto& s : result.summaries) {
    ojson o;
    o["n"] = s.n;
    o["m"] = s.m;
    o["d"] = s.d;
    o["sigma"] = real_json(s.sigma);
    o["trials"] = s.trials;
    o["solved"] = s.solved;
    o["within"] = s.within;
    o["within_fraction"] = real_json(s.within_fraction);
    o["median_l2"] = real_json(s.median_l2);
    o["mean_l2"] = real_json(s.mean_l2);
    o["mean_bound_probability"] = real_json(s.mean_bound_probability);
    summaries.push_back(std::move(o));
  }
  j["summaries"] = std::move(summaries);
  auto slopes = ojson::array();
  for (double s : result.stability_slopes) slopes.push_back(real_json(s));
  j["stability_slopes"] = std::move(slopes);
  auto lemmas = ojson::array();
  for (const auto& t : result.lemma_reports) {
    ojson o;
    o["event_name"] = t.event_name;
    o["trials"] = t.trials;
    o["hits"] = t.hits;
    o["empirical_rate"] = real_json(t.empirical_rate);
    o["analytic_bound"] = real_json(t.analytic_bound);
    o["pass"] = t.pass;
    lemmas.push_back(std::move(o));
  }
  j["lemma_reports"] = std::move(lemmas);
  out << j.dump(2) << '\n';
}

void emit_report(const ExperimentResult& result, ReportFormat format, const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError(path, "cannot open report for writing");
  if (format == ReportFormat::kCsv) {
    write_csv(result, file);
  } else {
    write_json(result, file);
  }
  file.flush();
  if (!file) throw IoError(path, "write failed");
}

std::vector<TrialRecord> parse_report_records(std::string_view json_text) {
  try {
    const auto j = nlohmann::json::parse(json_text);
    std::vector<TrialRecord> out;
    for (const auto& r : j.at("records")) out.push_back(record_from(r));
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

void write_lemma_csv(const std::vector<TailCheckReport>& reports, std::ostream& out) {
  out << "event_name,trials,hits,empirical_rate,analytic_bound,pass\r\n";
  for (const auto& r : reports) {
    out << csv_field(r.event_name) << ',' << r.trials << ',' << r.hits << ','
        << format_real(r.empirical_rate) << ',' << format_real(r.analytic_bound) << ','
        << (r.pass ? "true" : "false") << "\r\n";
  }
}

namespace {

std::string short_real(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

}  // namespace

void write_summary_table(const ExperimentResult& result, std::ostream& out) {
  out << std::left << std::setw(7) << "n" << std::setw(4) << "m" << std::setw(18) << "d"
      << std::setw(10) << "sigma" << std::setw(8) << "trials" << std::setw(8) << "solved"
      << std::setw(10) << "within" << std::setw(14) << "median_l2" << "mean_bound_prob\n";
  for (const auto& s : result.summaries) {
    out << std::left << std::setw(7) << s.n << std::setw(4) << s.m << std::setw(18) << s.d
        << std::setw(10) << short_real(s.sigma) << std::setw(8) << s.trials << std::setw(8)
        << s.solved << std::setw(10) << short_real(s.within_fraction) << std::setw(14)
        << short_real(s.median_l2) << short_real(s.mean_bound_probability) << '\n';
  }
  for (std::size_t i = 0; i < result.stability_slopes.size(); ++i) {
    out << "median_l2 slope vs sigma (n=" << result.config.n[i]
        << "): " << short_real(result.stability_slopes[i]) << '\n';
  }
}

}  // namespace mcp

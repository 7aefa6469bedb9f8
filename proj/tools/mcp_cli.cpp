// Command-line front end. Exit codes: 0 success, 1 usage or domain error,
// 2 infeasible recovery or a failed check, 3 I/O error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcp/bounds.hpp"
#include "mcp/codebook.hpp"
#include "mcp/concentration.hpp"
#include "mcp/config.hpp"
#include "mcp/errors.hpp"
#include "mcp/harness.hpp"
#include "mcp/report.hpp"
#include "mcp/sensing.hpp"
#include "mcp/solver.hpp"

namespace {

using mcp::Generator;
using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kExitUsage = 1;
constexpr int kExitFailed = 2;
constexpr int kExitIo = 3;

struct CodebookOptions {
  std::size_t n = 32;
  int m = 4;
  std::string families = "CONSTANT";
  int budget = 16;
  int budget_cap = mcp::kDefaultBudgetCap;
  int max_sparsity = 1;
  int max_breakpoints = 1;
  int max_seed_bits = 16;

  void add_to(CLI::App& app) {
    app.add_option("--n", n, "signal length")->check(CLI::PositiveNumber);
    app.add_option("--m", m, "bits per coordinate")->check(CLI::Range(1, 53));
    app.add_option("--families", families, "comma-separated generator names");
    app.add_option("--budget", budget, "description length budget in bits");
    app.add_option("--budget-cap", budget_cap, "enumeration guard");
    app.add_option("--max-sparsity", max_sparsity);
    app.add_option("--max-breakpoints", max_breakpoints);
    app.add_option("--max-seed-bits", max_seed_bits);
  }

  mcp::CodebookSpec spec() const {
    mcp::CodebookSpec s;
    s.n = n;
    s.m = mcp::Resolution(m);
    s.families.clear();
    std::stringstream in(families);
    std::string name;
    while (std::getline(in, name, ',')) {
      if (!name.empty()) s.families.push_back(mcp::parse_generator(name));
    }
    s.max_sparsity = max_sparsity;
    s.max_breakpoints = max_breakpoints;
    s.max_seed_bits = max_seed_bits;
    s.validate();
    return s;
  }

  mcp::ComplexityBudget complexity_budget() const { return mcp::ComplexityBudget(budget, budget_cap); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mcp::IoError(path, "cannot open file");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw mcp::IoError(path, "cannot open file for writing");
  out << text;
  out.flush();
  if (!out) throw mcp::IoError(path, "write failed");
}

// "-" or empty means stdout.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

ordered_json values_json(const std::vector<double>& v) {
  auto a = ordered_json::array();
  for (double x : v) a.push_back(x);
  return a;
}

int cmd_generate(const CodebookOptions& cb, bool with_values, const std::string& out) {
  const auto spec = cb.spec();
  std::ostringstream text;
  text << "entry_id,generator,bits" << (with_values ? ",values" : "") << "\r\n";
  mcp::for_each_entry(spec, cb.complexity_budget(), [&](const mcp::ProgramEntry& e) {
    text << mcp::entry_id(e) << ',' << mcp::generator_name(e.generator) << ','
         << mcp::description_length(e);
    if (with_values) {
      std::string joined;
      for (double x : mcp::decode(e).values()) {
        joined += (joined.empty() ? "" : " ") + mcp::format_real(x);
      }
      text << ',' << mcp::csv_field(joined);
    }
    text << "\r\n";
    return true;
  });
  emit(out, text.str());
  return 0;
}

struct MeasureOptions {
  std::string entry;
  std::size_t d = 16;
  std::uint64_t matrix_seed = 0;
  double sigma = 0.0;
  std::uint64_t noise_seed = 0;
  std::string out;
  std::string export_matrix;
};

int cmd_measure(const CodebookOptions& cb, const MeasureOptions& o) {
  const auto spec = cb.spec();
  const auto entry = mcp::parse_entry_id(o.entry, spec.n, spec.m);
  const auto x = mcp::decode(entry).values();
  const auto a = mcp::SensingEnsemble::draw(o.d, spec.n, o.matrix_seed);
  const auto rec = mcp::measure_noisy(a, x, o.sigma, o.noise_seed);
  ordered_json j;
  j["code_version"] = mcp::code_version();
  j["d"] = o.d;
  j["n"] = spec.n;
  j["m"] = spec.m.bits();
  j["matrix_seed"] = o.matrix_seed;
  j["sigma"] = rec.sigma;
  j["noise_seed"] = rec.noise_seed;
  j["truth_entry"] = o.entry;
  j["y"] = values_json(rec.y);
  emit(o.out, j.dump(2) + "\n");
  if (!o.export_matrix.empty()) mcp::write_ensemble(o.export_matrix, a);
  return 0;
}

struct SolveOptions {
  std::string record;
  std::string matrix;
  std::string mode = "noiseless";
  double delta_factor = 1e-9;
  std::string out;
};

int cmd_solve(CodebookOptions cb, const SolveOptions& o) {
  json rec;
  try {
    rec = json::parse(read_file(o.record));
  } catch (const json::parse_error& e) {
    throw mcp::ConfigError(o.record + ": " + e.what());
  }
  const std::size_t d = rec.at("d").get<std::size_t>();
  cb.n = rec.at("n").get<std::size_t>();
  cb.m = rec.at("m").get<int>();
  const auto spec = cb.spec();
  mcp::MeasurementRecord y;
  y.y = rec.at("y").get<std::vector<double>>();
  y.sigma = rec.at("sigma").get<double>();
  y.noise_seed = rec.at("noise_seed").get<std::uint64_t>();
  const auto a = o.matrix.empty()
                     ? mcp::SensingEnsemble::draw(d, spec.n, rec.at("matrix_seed").get<std::uint64_t>())
                     : mcp::read_ensemble(o.matrix);
  const auto budget = cb.complexity_budget();
  mcp::RecoveryResult r = [&] {
    if (o.mode == "noisy") return mcp::solve_noisy(a, y, spec, budget);
    if (o.mode != "noiseless") throw mcp::ConfigError("--mode must be noiseless or noisy");
    return mcp::solve_noiseless(a, y.y, spec, budget,
                                mcp::FeasibilityTolerance::relative_to(y.y, o.delta_factor));
  }();
  ordered_json j;
  j["entry"] = mcp::entry_id(r.entry);
  j["complexity_bits"] = r.complexity_bits;
  j["residual"] = r.residual;
  j["candidates_scored"] = r.candidates_scored;
  j["x_hat"] = values_json(r.x_hat.values());
  if (rec.contains("truth_entry")) {
    const auto truth = mcp::decode(mcp::parse_entry_id(rec.at("truth_entry").get<std::string>(),
                                                       spec.n, spec.m));
    const auto err = mcp::reconstruction_error(r, truth.values());
    j["l2"] = err.l2;
    j["l2_per_element"] = err.l2_per_element;
    j["quantized_l2"] = err.quantized_l2;
  }
  emit(o.out, j.dump(2) + "\n");
  return 0;
}

int cmd_verify_lemmas(const mcp::LemmaSuiteOptions& o, const std::string& out) {
  const auto reports = mcp::run_lemma_suite(o);
  std::ostringstream text;
  mcp::write_lemma_csv(reports, text);
  emit(out, text.str());
  for (const auto& r : reports) {
    if (!r.pass) return kExitFailed;
  }
  return 0;
}

struct ExperimentOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<int> budget;
  std::optional<int> m;
  std::vector<std::size_t> n;
  std::vector<std::size_t> d;
  std::string d_rule;
  std::vector<double> sigma;
  std::optional<double> r;
  std::optional<double> epsilon;
  std::string out;
  std::string format = "csv";
};

int cmd_experiment(const ExperimentOptions& o) {
  json j;
  try {
    j = json::parse(read_file(o.config));
  } catch (const json::parse_error& e) {
    throw mcp::ConfigError(o.config + ": " + e.what());
  }
  if (!j.is_object()) throw mcp::ConfigError(o.config + ": config must be a JSON object");
  if (o.seed) j["base_seed"] = *o.seed;
  if (o.trials) j["trials"] = *o.trials;
  if (o.budget) j["budget"] = *o.budget;
  if (o.m) j["m"] = *o.m;
  if (!o.n.empty()) j["n"] = o.n;
  if (!o.d.empty()) {
    j["d"] = o.d;
    j.erase("d_rule");
  }
  if (!o.d_rule.empty()) {
    j["d_rule"] = o.d_rule;
    j.erase("d");
  }
  if (!o.sigma.empty()) j["sigma"] = o.sigma;
  if (o.r) j["r"] = *o.r;
  if (o.epsilon) j["epsilon"] = *o.epsilon;
  const auto cfg = mcp::parse_config(j);
  const auto format = mcp::parse_report_format(o.format);
  const auto result = mcp::run_experiment(cfg);

  std::ostringstream text;
  if (cfg.experiment_id == mcp::ExperimentId::kLemmas && format == mcp::ReportFormat::kCsv) {
    mcp::write_lemma_csv(result.lemma_reports, text);
  } else if (format == mcp::ReportFormat::kCsv) {
    mcp::write_csv(result, text);
  } else {
    mcp::write_json(result, text);
  }
  emit(o.out, text.str());
  if (!o.out.empty() && o.out != "-") mcp::write_summary_table(result, std::cout);
  for (const auto& r : result.lemma_reports) {
    if (!r.pass) return kExitFailed;
  }
  return 0;
}

struct BoundsOptions {
  mcp::BoundInputs in;
  double t3 = 0.5, t5 = 0.5, t7 = 0.5, t8 = 0.2;
};

int cmd_bounds(const BoundsOptions& o) {
  const auto& in = o.in;
  ordered_json j;
  const auto t1 = mcp::theorem1_rhs(in);
  j["theorem1"] = {{"threshold", t1.threshold}, {"probability_bound", t1.probability_bound}};
  j["rho"] = mcp::stability_rho(in.r);
  j["theorem2_bound"] = mcp::theorem2_bound(in.kappa_bits, in.sigma, in.d, in.r);
  if (in.sigma > 0.0) {
    const auto p = mcp::EventParams::paper_choice(in.r, in.d, in.kappa_bits, in.sigma, o.t3, o.t5,
                                                  o.t7, o.t8);
    const auto g = mcp::gamma_constants(p.t2, p.t3, p.t4, p.t5, p.t6);
    j["gamma"] = {g.g1, g.g2, g.g3, g.g4};
    const auto eb = mcp::event_bounds(p, static_cast<std::size_t>(in.d),
                                      static_cast<std::size_t>(in.n), in.kappa_bits, in.sigma);
    ordered_json events;
    for (std::size_t i = 0; i < 5; ++i) events[mcp::kEventNames[i]] = eb.bound[i];
    events["total"] = eb.total();
    j["event_bounds"] = events;
    j["event_params"] = {{"t1", p.t1}, {"t2", p.t2}, {"t3", p.t3}, {"t4", p.t4},
                         {"t5", p.t5}, {"t6", p.t6}, {"t7", p.t7}, {"t8", p.t8}};
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-complexity pursuit: codebooks, recovery and concentration checks"};
  app.set_version_flag("--version", mcp::code_version());
  app.require_subcommand(1);

  CodebookOptions gen_cb;
  bool with_values = false;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "list codebook entries within a budget");
  gen_cb.add_to(*gen);
  gen->add_flag("--values", with_values, "append decoded values");
  gen->add_option("--out", gen_out, "output path (default stdout)");

  CodebookOptions meas_cb;
  MeasureOptions meas;
  auto* measure = app.add_subcommand("measure", "measure a codebook signal");
  meas_cb.add_to(*measure);
  measure->add_option("--entry", meas.entry, "entry id, e.g. CONSTANT:0101")->required();
  measure->add_option("--d", meas.d, "number of measurements")->check(CLI::PositiveNumber);
  measure->add_option("--matrix-seed", meas.matrix_seed);
  measure->add_option("--sigma", meas.sigma)->check(CLI::NonNegativeNumber);
  measure->add_option("--noise-seed", meas.noise_seed);
  measure->add_option("--out", meas.out, "measurement record (JSON)");
  measure->add_option("--export-matrix", meas.export_matrix, "write A in binary form");

  CodebookOptions solve_cb;
  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "recover a signal from a measurement record");
  solve_cb.add_to(*solve_cmd);
  solve_cmd->add_option("--record", solve.record, "measurement record (JSON)")->required();
  solve_cmd->add_option("--matrix", solve.matrix, "binary matrix file; default: redraw from seed");
  solve_cmd->add_option("--mode", solve.mode, "noiseless | noisy");
  solve_cmd->add_option("--delta-factor", solve.delta_factor, "delta = factor max(1, ||y||)");
  solve_cmd->add_option("--out", solve.out);

  mcp::LemmaSuiteOptions lemmas;
  std::string lemma_out;
  auto* verify = app.add_subcommand("verify-lemmas", "Monte Carlo checks of the concentration bounds");
  verify->add_option("--seed", lemmas.seed);
  verify->add_option("--chi-trials", lemmas.chi_trials);
  verify->add_option("--dot-trials", lemmas.dot_trials);
  verify->add_option("--sigma-trials", lemmas.sigma_trials);
  verify->add_option("--event-trials", lemmas.event_trials);
  verify->add_option("--out", lemma_out);

  ExperimentOptions exp;
  auto* experiment = app.add_subcommand("experiment", "run a sweep from a config file");
  experiment->add_option("--config", exp.config, "JSON config")->required();
  experiment->add_option("--seed", exp.seed, "overrides base_seed");
  experiment->add_option("--trials", exp.trials);
  experiment->add_option("--budget", exp.budget);
  experiment->add_option("--m", exp.m);
  experiment->add_option("--n", exp.n);
  experiment->add_option("--d", exp.d);
  experiment->add_option("--d-rule", exp.d_rule);
  experiment->add_option("--sigma", exp.sigma);
  experiment->add_option("--r", exp.r);
  experiment->add_option("--epsilon", exp.epsilon);
  experiment->add_option("--out", exp.out, "report path (default stdout)");
  experiment->add_option("--format", exp.format, "csv | json");

  BoundsOptions bo;
  auto* bounds = app.add_subcommand("bounds", "evaluate the closed-form guarantees");
  bounds->add_option("--kappa-bits", bo.in.kappa_bits)->required();
  bounds->add_option("--m", bo.in.m);
  bounds->add_option("--n", bo.in.n);
  bounds->add_option("--d", bo.in.d);
  bounds->add_option("--sigma", bo.in.sigma);
  bounds->add_option("--r", bo.in.r);
  bounds->add_option("--tau", bo.in.tau);
  bounds->add_option("--t", bo.in.t);
  bounds->add_option("--t3", bo.t3);
  bounds->add_option("--t5", bo.t5);
  bounds->add_option("--t7", bo.t7);
  bounds->add_option("--t8", bo.t8);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(gen_cb, with_values, gen_out);
    if (*measure) return cmd_measure(meas_cb, meas);
    if (*solve_cmd) return cmd_solve(solve_cb, solve);
    if (*verify) return cmd_verify_lemmas(lemmas, lemma_out);
    if (*experiment) return cmd_experiment(exp);
    if (*bounds) return cmd_bounds(bo);
  } catch (const mcp::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const mcp::NoFeasibleCandidate& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitFailed;
  } catch (const mcp::EmptyCodebook& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitFailed;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

#pragma once

// Configuration-driven experiment runner: parses a JSON config, runs one
// campaign and writes <output>.report.json plus any CSV data files.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "betaop/campaigns.hpp"
#include "betaop/errors.hpp"

namespace betaop {

inline constexpr const char* kVersion = "0.1.0";

enum class ExitCode : int { ok = 0, test_failure = 2, config_error = 3, numerical_failure = 4 };

struct ExperimentConfig {
  std::string command;  // sample | verify-det | theorem1 | clt | moments | oracle
  EnsembleSpec spec;
  std::vector<double> thetas;
  std::size_t trials = 1000;
  std::vector<std::size_t> sizes;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = auto
  std::string output = "betaop_run";
  int sign = 0;  // theorem1 on Jacobi: +1, -1, or 0 for both
};

/// One judged test. `rule` is "at_least", "at_most" or "within"; `upper`
/// is only used by "within".
struct ReportRow {
  std::string name;
  double statistic = 0.0;
  std::string rule;
  double threshold = 0.0;
  double upper = 0.0;
  bool pass = false;

  static ReportRow at_least(std::string name, double statistic, double threshold) {
    return {std::move(name), statistic, "at_least", threshold, 0.0, statistic >= threshold};
  }
  static ReportRow at_most(std::string name, double statistic, double threshold) {
    return {std::move(name), statistic, "at_most", threshold, 0.0, statistic <= threshold};
  }
  static ReportRow within(std::string name, double statistic, double lower, double upper) {
    return {std::move(name), statistic, "within", lower, upper,
            statistic >= lower && statistic <= upper};
  }
};

struct ReportRecord {
  nlohmann::ordered_json config;
  std::vector<ReportRow> rows;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  [[nodiscard]] bool all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
  }
};

// ---------------------------------------------------------------------------
// Config parsing

namespace detail {

inline const std::set<std::string>& known_fields() {
  static const std::set<std::string> fields{"command", "ensemble", "n",      "beta",    "a",
                                            "b",       "thetas",   "trials", "sizes",   "seed",
                                            "threads", "output",   "sign",   "preset"};
  return fields;
}

inline const std::set<std::string>& known_commands() {
  static const std::set<std::string> commands{"sample", "verify-det", "theorem1",
                                              "clt",    "moments",    "oracle"};
  return commands;
}

template <class T>
T field(const nlohmann::json& doc, const char* name, T fallback) {
  if (!doc.contains(name)) return fallback;
  try {
    return doc.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + name + "': " + e.what());
  }
}

inline std::uint64_t unsigned_field(const nlohmann::json& doc, const char* name,
                                    std::uint64_t fallback) {
  if (!doc.contains(name)) return fallback;
  const auto& v = doc.at(name);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(std::string("config field '") + name + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

inline std::vector<double> default_thetas(const std::string& command, EnsembleKind kind) {
  if (command == "clt") {
    if (kind == EnsembleKind::circular) {
      return {std::numbers::pi / 2, std::numbers::pi / 2 + 1.0};
    }
    return {0.0, std::numbers::pi / 2};
  }
  return {std::numbers::pi / 2};
}

}  // namespace detail

/// Parses JSON text; syntax errors report line and column.
inline nlohmann::json parse_config_text(const std::string& text, const std::string& origin = "config") {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError(origin + ": parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(column) + ": " + e.what());
  }
}

inline nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

/// Builds a validated config. A preset fills ensemble, beta, a and b;
/// explicit fields override it.
inline ExperimentConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!detail::known_fields().contains(key)) throw ConfigError("unknown config field '" + key + "'");
  }
  ExperimentConfig cfg;
  cfg.command = detail::field<std::string>(doc, "command", "");
  if (!detail::known_commands().contains(cfg.command)) {
    throw ConfigError("config field 'command': expected one of sample, verify-det, theorem1, clt, "
                      "moments, oracle; got '" + cfg.command + "'");
  }

  std::string ensemble = "circular";
  double beta = 2.0, a = 0.0, b = 0.0;
  const std::string preset = detail::field<std::string>(doc, "preset", "");
  if (preset == "so2n") {
    ensemble = "jacobi";
    a = b = -0.5;
  } else if (preset == "cue") {
    ensemble = "circular";
  } else if (!preset.empty()) {
    throw ConfigError("config field 'preset': unknown preset '" + preset + "' (so2n, cue)");
  }
  ensemble = detail::field<std::string>(doc, "ensemble", ensemble);
  if (ensemble != "circular" && ensemble != "jacobi") {
    throw ConfigError("config field 'ensemble': expected circular or jacobi, got '" + ensemble + "'");
  }
  cfg.spec.kind = ensemble == "circular" ? EnsembleKind::circular : EnsembleKind::jacobi;
  cfg.spec.n = detail::unsigned_field(doc, "n", 4);
  cfg.spec.beta = detail::field<double>(doc, "beta", beta);
  cfg.spec.a = detail::field<double>(doc, "a", a);
  cfg.spec.b = detail::field<double>(doc, "b", b);
  try {
    cfg.spec.validate();
  } catch (const ParameterDomainError& e) {
    throw ConfigError(std::string("config fields n/beta/a/b: ") + e.what());
  }

  cfg.thetas = detail::field<std::vector<double>>(doc, "thetas",
                                                  detail::default_thetas(cfg.command, cfg.spec.kind));
  for (std::size_t i = 0; i < cfg.thetas.size(); ++i) {
    if (!std::isfinite(cfg.thetas[i])) throw ConfigError("config field 'thetas': non-finite entry");
    for (std::size_t j = 0; j < i; ++j) {
      if (cfg.thetas[i] == cfg.thetas[j]) throw ConfigError("config field 'thetas': entries must be distinct");
    }
  }
  if (cfg.thetas.empty()) throw ConfigError("config field 'thetas': must be non-empty");
  cfg.trials = detail::unsigned_field(doc, "trials", 1000);
  if (cfg.trials < 1) throw ConfigError("config field 'trials': must be >= 1");
  cfg.sizes = detail::field<std::vector<std::size_t>>(
      doc, "sizes", cfg.command == "clt" ? std::vector<std::size_t>{256, 1024, 4096}
                                         : std::vector<std::size_t>{});
  if (cfg.command == "clt" && cfg.sizes.empty()) throw ConfigError("config field 'sizes': must be non-empty for clt");
  cfg.seed = detail::unsigned_field(doc, "seed", 0);
  cfg.threads = static_cast<unsigned>(detail::unsigned_field(doc, "threads", 0));
  cfg.output = detail::field<std::string>(doc, "output", cfg.output);
  cfg.sign = detail::field<int>(doc, "sign", 0);
  if (cfg.sign != 0 && cfg.sign != 1 && cfg.sign != -1) throw ConfigError("config field 'sign': expected -1, 0 or 1");
  return cfg;
}

/// Config echo stored in the report. Thread count and output path are left
/// out so reports do not depend on them.
inline nlohmann::ordered_json config_echo(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["command"] = cfg.command;
  j["ensemble"] = to_string(cfg.spec.kind);
  j["n"] = cfg.spec.n;
  j["beta"] = cfg.spec.beta;
  if (cfg.spec.kind == EnsembleKind::jacobi) {
    j["a"] = cfg.spec.a;
    j["b"] = cfg.spec.b;
  }
  j["thetas"] = cfg.thetas;
  j["trials"] = cfg.trials;
  if (!cfg.sizes.empty()) j["sizes"] = cfg.sizes;
  j["seed"] = cfg.seed;
  j["sign"] = cfg.sign;
  return j;
}

// ---------------------------------------------------------------------------
// Output

inline std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file '" + path + "'");
  out << content;
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

inline nlohmann::ordered_json to_json(const ReportRecord& report) {
  nlohmann::ordered_json j;
  j["config"] = report.config;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const ReportRow& r : report.rows) {
    nlohmann::ordered_json row;
    row["name"] = r.name;
    row["statistic"] = r.statistic;
    row["rule"] = r.rule;
    if (r.rule == "within") {
      row["threshold"] = {r.threshold, r.upper};
    } else {
      row["threshold"] = r.threshold;
    }
    row["pass"] = r.pass;
    rows.push_back(row);
  }
  j["rows"] = rows;
  j["details"] = report.details;
  j["all_pass"] = report.all_pass();
  j["provenance"] = {{"seed", report.config.is_object() ? report.config.value("seed", std::uint64_t{0}) : 0}, {"version", kVersion}};
  return j;
}

// ---------------------------------------------------------------------------
// Commands

namespace detail {

inline constexpr double kPValueFloor = 1e-3;

inline void push_ks(ReportRecord& report, const NamedKs& ks) {
  report.rows.push_back(ReportRow::at_least("ks_p:" + ks.name, ks.ks.p_value, kPValueFloor));
  report.details["ks_statistics"][ks.name] = ks.ks.statistic;
}

inline void run_sample(const ExperimentConfig& cfg, ReportRecord& report) {
  const auto samples = parallel_trials<std::vector<double>>(cfg.trials, cfg.threads, [&](std::size_t i) {
    Rng rng = substream(cfg.seed, streams::kSamples, i);
    return (cfg.spec.kind == EnsembleKind::circular ? cbe_points(cfg.spec, rng) : jbe_points(cfg.spec, rng)).points;
  });
  std::string csv = "trial";
  for (std::size_t k = 1; k <= cfg.spec.n; ++k) csv += ",point_" + std::to_string(k);
  csv += "\n";
  double outside = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    csv += std::to_string(i);
    for (const double p : samples[i]) {
      csv += "," + format_g17(p);
      const bool inside = cfg.spec.kind == EnsembleKind::circular ? (p >= 0.0 && p < 2.0 * std::numbers::pi)
                                                                  : (p >= -2.0 && p <= 2.0);
      if (!inside) outside += 1.0;
    }
    csv += "\n";
  }
  write_text(cfg.output + ".samples.csv", csv);
  report.rows.push_back(ReportRow::at_most("points_outside_support", outside, 0.0));
}

inline void run_verify_det(const ExperimentConfig& cfg, ReportRecord& report) {
  const DeterminantReport det = determinant_identities(cfg.trials, cfg.spec.n, cfg.seed, cfg.threads, &cfg.spec);
  if (cfg.spec.kind == EnsembleKind::circular) {
    report.rows.push_back(ReportRow::at_most("charpoly_residual", det.charpoly_circular, 1e-8));
  } else {
    report.rows.push_back(ReportRow::at_most("charpoly_residual", det.charpoly_jacobi, 1e-8));
    report.rows.push_back(ReportRow::at_most("edge_determinant_residual", det.edge_determinant, 1e-8));
    report.rows.push_back(ReportRow::at_most("edge_product_residual", det.edge_product, 1e-10));
  }
}

inline void run_theorem1(const ExperimentConfig& cfg, ReportRecord& report) {
  const auto& s = cfg.spec;
  if (s.kind == EnsembleKind::circular) {
    for (const double theta : cfg.thetas) {
      for (const NamedKs& ks : theorem1_circular(s.n, s.beta, theta, cfg.trials, cfg.seed, cfg.threads)) {
        push_ks(report, {ks.name + "@theta=" + format_g17(theta), ks.ks});
      }
    }
    return;
  }
  std::vector<int> signs = cfg.sign == 0 ? std::vector<int>{1, -1} : std::vector<int>{cfg.sign};
  for (const int sign : signs) {
    push_ks(report, theorem1_jacobi(s.n, s.beta, s.a, s.b, sign, cfg.trials, cfg.seed, cfg.threads));
  }
}

inline bool is_edge(double theta) {
  return same_angle(theta, 0.0) || same_angle(theta, std::numbers::pi);
}

/// Bands scale with 1/beta: per-part variance within [0.9, 1.3]/beta; at
/// the Jacobi edges the real part within [0.7, 1.5]/beta and its mean
/// within 0.2; |correlations| below 0.05.
inline void run_clt(const ExperimentConfig& cfg, ReportRecord& report) {
  const auto& s = cfg.spec;
  const CltReport clt = s.kind == EnsembleKind::circular
                            ? clt_circular(s.beta, cfg.sizes, cfg.thetas, cfg.trials, cfg.seed, cfg.threads)
                            : clt_jacobi(s.beta, s.a, s.b, cfg.sizes, cfg.thetas, cfg.trials, cfg.seed, cfg.threads);
  std::string csv = "n,theta,re_mean,re_var,im_mean,im_var,cross_corr,trials\n";
  for (const CltRow& r : clt.rows) {
    csv += std::to_string(r.n) + "," + format_g17(r.theta) + "," + format_g17(r.re_mean) + "," +
           format_g17(r.re_var) + "," + format_g17(r.im_mean) + "," + format_g17(r.im_var) + "," +
           format_g17(r.cross_corr) + "," + std::to_string(r.trials) + "\n";
  }
  write_text(cfg.output + ".clt.csv", csv);

  const double limit = 1.0 / s.beta;
  const std::size_t last = clt.sizes.size() - 1;
  const std::string at_n = "@n=" + std::to_string(clt.sizes[last]);
  for (std::size_t t = 0; t < clt.thetas.size(); ++t) {
    const CltRow& r = clt.row(last, t);
    const std::string tag = "[theta=" + format_g17(r.theta) + "]" + at_n;
    const bool edge = s.kind == EnsembleKind::jacobi && is_edge(r.theta);
    if (edge) {
      report.rows.push_back(ReportRow::within("re_mean" + tag, r.re_mean, -0.2, 0.2));
      report.rows.push_back(ReportRow::within("re_var" + tag, r.re_var, 0.7 * limit, 1.5 * limit));
    } else {
      report.rows.push_back(ReportRow::within("re_var" + tag, r.re_var, 0.9 * limit, 1.3 * limit));
      report.rows.push_back(ReportRow::within("im_var" + tag, r.im_var, 0.9 * limit, 1.3 * limit));
      report.rows.push_back(ReportRow::at_most("abs_cross_corr" + tag, std::abs(r.cross_corr), 0.05));
      if (clt.sizes.size() >= 2) {
        for (const auto& [part, pick] : {std::pair{"re", true}, std::pair{"im", false}}) {
          double worst_step = -std::numeric_limits<double>::infinity();
          for (std::size_t k = 0; k + 1 < clt.sizes.size(); ++k) {
            const CltRow& lo = clt.row(k, t);
            const CltRow& hi = clt.row(k + 1, t);
            const double dev_lo = std::abs((pick ? lo.re_var : lo.im_var) - limit);
            const double dev_hi = std::abs((pick ? hi.re_var : hi.im_var) - limit);
            worst_step = std::max(worst_step, dev_hi - dev_lo);
          }
          report.rows.push_back(ReportRow::at_most(std::string(part) + "_var_deviation_increase[theta=" +
                                                       format_g17(r.theta) + "]",
                                                   worst_step, 0.0));
        }
      }
    }
    report.details["variance_conventions"].push_back(
        {{"theta", r.theta},
         {"n", r.n},
         {"per_part_re", r.re_var},
         {"per_part_im", r.im_var},
         {"total", r.re_var + r.im_var},
         {"limit_per_part", limit},
         {"limit_total", 2.0 * limit},
         {"tested", "per_part"}});
  }
  for (const ThetaPairCorrelation& p : clt.pair_corr[last]) {
    report.rows.push_back(ReportRow::at_most("abs_corr_across_theta[" + format_g17(clt.thetas[p.first]) + "," +
                                                 format_g17(clt.thetas[p.second]) + "]" + at_n,
                                             p.max_abs(), 0.05));
  }
}

inline void run_moments(const ExperimentConfig& cfg, ReportRecord& report) {
  const auto rows = moment_adjudication(cfg.trials, 6, cfg.seed, cfg.threads);
  for (const MomentRow& r : rows) {
    const std::string tag = r.law + "," + to_string(r.pair) + ",psi=" + format_g17(r.psi) +
                            ",phi=" + format_g17(r.phi);
    report.rows.push_back(ReportRow::at_most("quadrature_vs_closed_form[" + tag + "]",
                                             std::abs(r.oracle - r.closed_form), 1e-6));
    const double diff = std::abs(r.mc - r.oracle);
    const double z = diff == 0.0 ? 0.0 : (r.mc_se > 0.0 ? diff / r.mc_se : std::numeric_limits<double>::max());
    report.rows.push_back(ReportRow::at_most("monte_carlo_z[" + tag + "]", z, 4.0));
    nlohmann::ordered_json d{{"case", tag},
                             {"quadrature", r.oracle},
                             {"closed_form", r.closed_form},
                             {"printed", r.printed},
                             {"monte_carlo", r.mc},
                             {"monte_carlo_se", r.mc_se}};
    if (std::abs(r.oracle) > 1e-12) {
      d["printed_over_quadrature"] = r.printed / r.oracle;
    } else {
      d["printed_over_quadrature"] = nullptr;
    }
    report.details["moments"].push_back(d);
  }
  report.details["constants_used"] = "quadrature";
}

inline void run_oracle(const ExperimentConfig& cfg, ReportRecord& report) {
  for (const NamedKs& ks : oracle_equivalence(cfg.spec, cfg.trials, cfg.seed, cfg.threads)) push_ks(report, ks);
  if (cfg.spec.kind == EnsembleKind::circular && cfg.spec.n <= 2) {
    const double exact = partition_circular(cfg.spec.n, cfg.spec.beta);
    const double quad = quadrature_partition_circular(cfg.spec.n, cfg.spec.beta, 512);
    report.rows.push_back(ReportRow::at_most("partition_relative_error", std::abs(quad - exact) / exact, 1e-4));
  }
}

}  // namespace detail

/// Runs the campaign and returns the report without writing it. CSV files
/// are written here since they are part of the campaign.
inline ReportRecord execute(const ExperimentConfig& cfg) {
  ReportRecord report;
  report.config = config_echo(cfg);
  if (cfg.command == "sample") detail::run_sample(cfg, report);
  else if (cfg.command == "verify-det") detail::run_verify_det(cfg, report);
  else if (cfg.command == "theorem1") detail::run_theorem1(cfg, report);
  else if (cfg.command == "clt") detail::run_clt(cfg, report);
  else if (cfg.command == "moments") detail::run_moments(cfg, report);
  else if (cfg.command == "oracle") detail::run_oracle(cfg, report);
  else throw ConfigError("unknown command '" + cfg.command + "'");
  return report;
}

/// Runs a config end to end and maps failures onto exit codes. Wall time
/// goes to `log`, never into output files.
inline ExitCode run_experiment(const ExperimentConfig& cfg, std::ostream& log = std::cerr) {
  const auto start = std::chrono::steady_clock::now();
  try {
    const ReportRecord report = execute(cfg);
    write_text(cfg.output + ".report.json", to_json(report).dump(2) + "\n");
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::size_t failed = 0;
    for (const ReportRow& r : report.rows) {
      if (!r.pass) {
        ++failed;
        log << "FAIL " << r.name << ": statistic " << format_g17(r.statistic) << " (" << r.rule << " "
            << format_g17(r.threshold) << (r.rule == "within" ? ".." + format_g17(r.upper) : "") << ")\n";
      }
    }
    log << cfg.command << ": " << report.rows.size() - failed << "/" << report.rows.size()
        << " rows pass, wall time " << seconds << " s\n";
    return report.all_pass() ? ExitCode::ok : ExitCode::test_failure;
  } catch (const ConfigError& e) {
    log << "configuration error: " << e.what() << "\n";
    return ExitCode::config_error;
  } catch (const ParameterDomainError& e) {
    log << "configuration error: " << e.what() << "\n";
    return ExitCode::config_error;
  } catch (const InfiniteDensity& e) {
    log << "numerical failure: " << e.what() << "\n";
    return ExitCode::numerical_failure;
  } catch (const NumericalFailure& e) {
    log << "numerical failure: " << e.what() << "\n";
    return ExitCode::numerical_failure;
  } catch (const SingularError& e) {
    log << "numerical failure: " << e.what() << "\n";
    return ExitCode::numerical_failure;
  }
}

}  // namespace betaop

#pragma once

// Machine-readable result of a `track` or `newton` run. See
// docs/formats.md for the field list. Real numbers are kept as decimal
// strings that parse back bitwise at the run's precision.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace pstrack::cli {

inline constexpr int run_record_schema = 1;

using decimal_complex = std::pair<std::string, std::string>;

struct run_config {
  std::string command;
  std::string precision;
  std::size_t degree = 0;
  std::size_t threads = 1;
  std::string beta;
  std::string min_step;
  std::size_t pade_numerator = 0;
  std::size_t pade_denominator = 0;
  std::string target;
  std::uint64_t seed = 0;
  std::string system_file;
  std::string start_file;

  friend bool operator==(const run_config&, const run_config&) = default;
};

struct step_entry {
  std::size_t index = 0;
  std::string t_start;
  std::string delta_t;
  std::string proposed;
  std::string curvature;
  std::string radius;
  std::string binding;
  std::size_t retries = 0;
  std::size_t newton_iterations = 0;
  std::optional<std::string> condition;
  std::size_t corrector_iterations = 0;
  std::string corrector_residual;
  std::size_t pade_reductions = 0;

  friend bool operator==(const step_entry&, const step_entry&) = default;
};

struct run_record {
  int schema = run_record_schema;
  run_config config;
  std::map<std::string, double> seconds;  ///< per stage, plus "total"
  std::vector<step_entry> steps;
  std::string t_final;
  std::vector<decimal_complex> point;
  std::vector<std::vector<decimal_complex>> series;  ///< newton only
  std::string residual;
  int exit_code = 0;
  std::string status;
  std::string message;

  friend bool operator==(const run_record&, const run_record&) = default;
};

inline void to_json(nlohmann::ordered_json& j, const run_config& c) {
  j = {{"command", c.command},
       {"precision", c.precision},
       {"degree", c.degree},
       {"threads", c.threads},
       {"beta", c.beta},
       {"min_step", c.min_step},
       {"pade", {c.pade_numerator, c.pade_denominator}},
       {"target", c.target},
       {"seed", c.seed},
       {"system", c.system_file},
       {"start", c.start_file}};
}

inline void from_json(const nlohmann::ordered_json& j, run_config& c) {
  j.at("command").get_to(c.command);
  j.at("precision").get_to(c.precision);
  j.at("degree").get_to(c.degree);
  j.at("threads").get_to(c.threads);
  j.at("beta").get_to(c.beta);
  j.at("min_step").get_to(c.min_step);
  j.at("pade").at(0).get_to(c.pade_numerator);
  j.at("pade").at(1).get_to(c.pade_denominator);
  j.at("target").get_to(c.target);
  j.at("seed").get_to(c.seed);
  j.at("system").get_to(c.system_file);
  j.at("start").get_to(c.start_file);
}

inline void to_json(nlohmann::ordered_json& j, const step_entry& s) {
  j = {{"index", s.index},
       {"t_start", s.t_start},
       {"delta_t", s.delta_t},
       {"proposed", s.proposed},
       {"C", s.curvature},
       {"R", s.radius},
       {"binding", s.binding},
       {"retries", s.retries},
       {"newton_iterations", s.newton_iterations},
       {"condition", s.condition ? nlohmann::ordered_json(*s.condition) : nlohmann::ordered_json(nullptr)},
       {"corrector_iterations", s.corrector_iterations},
       {"corrector_residual", s.corrector_residual},
       {"pade_reductions", s.pade_reductions}};
}

inline void from_json(const nlohmann::ordered_json& j, step_entry& s) {
  j.at("index").get_to(s.index);
  j.at("t_start").get_to(s.t_start);
  j.at("delta_t").get_to(s.delta_t);
  j.at("proposed").get_to(s.proposed);
  j.at("C").get_to(s.curvature);
  j.at("R").get_to(s.radius);
  j.at("binding").get_to(s.binding);
  j.at("retries").get_to(s.retries);
  j.at("newton_iterations").get_to(s.newton_iterations);
  const auto& cond = j.at("condition");
  s.condition = cond.is_null() ? std::nullopt : std::optional<std::string>(cond.get<std::string>());
  j.at("corrector_iterations").get_to(s.corrector_iterations);
  j.at("corrector_residual").get_to(s.corrector_residual);
  j.at("pade_reductions").get_to(s.pade_reductions);
}

inline nlohmann::ordered_json to_json(const run_record& r) {
  nlohmann::ordered_json j;
  j["schema"] = r.schema;
  j["config"] = r.config;
  j["seconds"] = r.seconds;
  j["steps"] = r.steps;
  j["t_final"] = r.t_final;
  j["point"] = r.point;
  j["series"] = r.series;
  j["residual"] = r.residual;
  j["exit"] = {{"code", r.exit_code}, {"status", r.status}, {"message", r.message}};
  return j;
}

/// Throws nlohmann::json::exception on a malformed record and
/// std::runtime_error on an unknown schema version.
inline run_record run_record_from_json(const nlohmann::ordered_json& j) {
  run_record r;
  j.at("schema").get_to(r.schema);
  if (r.schema != run_record_schema)
    throw std::runtime_error("unsupported run record schema " + std::to_string(r.schema));
  j.at("config").get_to(r.config);
  j.at("seconds").get_to(r.seconds);
  j.at("steps").get_to(r.steps);
  j.at("t_final").get_to(r.t_final);
  j.at("point").get_to(r.point);
  j.at("series").get_to(r.series);
  j.at("residual").get_to(r.residual);
  j.at("exit").at("code").get_to(r.exit_code);
  j.at("exit").at("status").get_to(r.status);
  j.at("exit").at("message").get_to(r.message);
  return r;
}

}  // namespace pstrack::cli

#pragma once

// Flat `key = value` run configuration.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "zflow/analysis.hpp"
#include "zflow/error.hpp"
#include "zflow/sim.hpp"

namespace zflow {

/// Parse failure naming the offending field.
class ConfigError : public Error {
 public:
  ConfigError(ErrorCode code, std::string field, const std::string& what)
      : Error(code, field + ": " + what), field_(std::move(field)) {}

  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  Scenario scenario;
  double band = kDefaultSettlingBand;
  std::filesystem::path out_dir = "out";
  bool emit_chart = true;
  /// One line per key that was filled from its default, e.g. "horizon = 60".
  std::vector<std::string> defaults_applied;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(ws) - first + 1);
}

inline double parse_real(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw ConfigError(ErrorCode::TypeMismatch, std::string(key), "expected a real number, got '" + std::string(text) + "'");
  return v;
}

inline std::size_t parse_count(std::string_view key, std::string_view text) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError(ErrorCode::TypeMismatch, std::string(key), "expected a non-negative integer, got '" + std::string(text) + "'");
  return v;
}

inline bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(ErrorCode::TypeMismatch, std::string(key), "expected true or false, got '" + std::string(text) + "'");
}

inline Mode parse_mode(std::string_view text) {
  if (text == "analytic") return Mode::analytic;
  if (text == "physical") return Mode::physical;
  throw ConfigError(ErrorCode::TypeMismatch, "mode", "expected analytic or physical, got '" + std::string(text) + "'");
}

/// `k:rate` pairs separated by commas, e.g. "0:14.5, 30:27".
inline std::vector<RateChange> parse_schedule(std::string_view text) {
  std::vector<RateChange> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    const auto colon = item.find(':');
    if (colon == std::string_view::npos)
      throw ConfigError(ErrorCode::TypeMismatch, "ub_schedule", "expected k:rate, got '" + std::string(item) + "'");
    out.push_back({parse_count("ub_schedule", trim(item.substr(0, colon))),
                   parse_real("ub_schedule", trim(item.substr(colon + 1)))});
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  if (out.empty()) throw ConfigError(ErrorCode::TypeMismatch, "ub_schedule", "empty schedule");
  return out;
}

inline const std::vector<std::string_view>& known_keys() {
  static const std::vector<std::string_view> keys{"a",       "b",    "Q",         "M",       "ub",
                                                  "ub_schedule", "alpha", "rho",   "horizon", "n_sources",
                                                  "mode",    "q0",   "rtt0",      "band",    "out_dir",
                                                  "emit_chart"};
  return keys;
}

}  // namespace detail

/**
 * Parses a configuration document into a validated RunConfig.
 *
 * Lines are `key = value`; `#` starts a comment. Required keys are a, b, Q, M
 * and exactly one of ub / ub_schedule. Every default that gets applied is
 * listed in RunConfig::defaults_applied.
 */
inline RunConfig parse_config(std::string_view text) {
  std::map<std::string, std::string, std::less<>> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(ErrorCode::TypeMismatch, "line " + std::to_string(line_no), "expected key = value");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(ErrorCode::TypeMismatch, "line " + std::to_string(line_no), "missing key");
    const auto& keys = detail::known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError(ErrorCode::UnknownKey, key, "unknown configuration key");
    if (!entries.emplace(key, value).second) throw ConfigError(ErrorCode::InvariantViolation, key, "key given twice");
  }

  std::vector<std::string> missing;
  for (const char* k : {"a", "b", "Q", "M"})
    if (!entries.contains(k)) missing.emplace_back(k);
  if (!entries.contains("ub") && !entries.contains("ub_schedule")) missing.emplace_back("ub");
  if (!missing.empty()) {
    std::string names;
    for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
    throw ConfigError(ErrorCode::InvariantViolation, names, "required key(s) missing");
  }
  if (entries.contains("ub") && entries.contains("ub_schedule"))
    throw ConfigError(ErrorCode::InvariantViolation, "ub", "give either ub or ub_schedule, not both");

  RunConfig cfg;
  Scenario& s = cfg.scenario;
  const auto real = [&](const char* key) { return detail::parse_real(key, entries.at(key)); };
  const auto opt = [&](const char* key, auto parse, auto fallback, const std::string& shown) {
    if (auto it = entries.find(key); it != entries.end()) return parse(it->second);
    cfg.defaults_applied.push_back(std::string(key) + " = " + shown);
    return fallback;
  };

  s.params.a = real("a");
  s.params.b = real("b");
  s.params.Q = real("Q");
  s.params.M = real("M");
  if (entries.contains("ub"))
    s.ub_schedule = {{0, real("ub")}};
  else
    s.ub_schedule = detail::parse_schedule(entries.at("ub_schedule"));

  const auto as_real = [](const char* key) { return [key](const std::string& v) { return detail::parse_real(key, v); }; };
  const auto as_count = [](const char* key) { return [key](const std::string& v) { return detail::parse_count(key, v); }; };
  s.params.alpha = opt("alpha", as_real("alpha"), kRttSmoothing, "0.875");
  s.params.rho = opt("rho", as_real("rho"), kDefaultMargin, "0.8");
  s.horizon = opt("horizon", as_count("horizon"), kDefaultHorizon, "60");
  s.n_sources = opt("n_sources", as_count("n_sources"), std::size_t{1}, "1");
  s.mode = opt("mode", [](const std::string& v) { return detail::parse_mode(v); }, Mode::analytic, "analytic");
  s.q0 = opt("q0", as_real("q0"), 0.0, "0");
  s.rtt0 = opt("rtt0", as_real("rtt0"), s.params.M, "M");
  cfg.band = opt("band", as_real("band"), kDefaultSettlingBand, "0.01");
  cfg.out_dir = opt("out_dir", [](const std::string& v) { return std::filesystem::path(v); },
                    std::filesystem::path("out"), "out");
  cfg.emit_chart = opt("emit_chart", [](const std::string& v) { return detail::parse_bool("emit_chart", v); }, true, "true");

  if (auto verdict = check_stability(s.params.a, s.params.b); !verdict)
    throw ConfigError(ErrorCode::InvariantViolation, "a, b",
                      std::string(to_string(verdict.reason)) + ": stability needs |a| < 1, |b| < 1 and a != b");
  if (!(cfg.band > 0.0)) throw ConfigError(ErrorCode::InvariantViolation, "band", "band must be > 0");
  try {
    validate(s);
  } catch (const Error& e) {
    throw ConfigError(ErrorCode::InvariantViolation, "scenario", e.what());
  }
  return cfg;
}

}  // namespace zflow

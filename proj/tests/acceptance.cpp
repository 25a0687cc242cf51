// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "zflow/zflow.hpp"

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] AC%d %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

zflow::ControllerParams params(double a, double b, double Q = 1000.0, double M = 10.0) {
  zflow::ControllerParams p;
  p.a = a;
  p.b = b;
  p.Q = Q;
  p.M = M;
  return p;
}

void steady_state_queue() {
  const auto start = std::chrono::steady_clock::now();
  const auto runs = zflow::run_reference_suite();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  double worst = 0.0;
  for (const auto& run : runs) {
    const auto& last = run.trace.records.back();
    worst = std::max({worst, std::abs(last.q_zpred() - 800.0), std::abs(last.q_time() - 800.0)});
  }
  const bool pass = runs.size() == 6 && worst <= 0.1 && seconds < 1.0;
  report(1, "steady-state queue", pass,
         "6 traces, max |q(60) - 800| = " + fmt("%.3g", worst) + ", runtime " + fmt("%.4f", seconds) + " s");
}

void gain_design() {
  bool pass = true;
  std::string detail;
  for (const auto& [a, c_expected] : {std::pair{-0.2, 57.6}, std::pair{-0.5, 36.0}}) {
    const auto p = params(a, -0.1);
    const auto d = zflow::design_gain(p);
    const double fv = zflow::final_value(zflow::transfer_function(p) * zflow::unit_step());
    pass = pass && std::abs(d.c - c_expected) <= 1e-9 * c_expected && std::abs(fv - 800.0) <= 1e-9 * 800.0;
    detail += "a=" + fmt("%g", a) + ": c=" + zflow::format_double(d.c) + ", final value " + zflow::format_double(fv) + "; ";
  }
  report(2, "gain design", pass, detail);
}

void closed_form_matches_long_division() {
  const std::vector<double> as{-0.5, -0.2, 0.1, 0.4, 0.7};
  const std::vector<double> bs{-0.6, -0.1, 0.2, 0.5, -0.35};
  double worst = 0.0;
  int pairs = 0;
  for (double a : as) {
    for (double b : bs) {
      const auto d = zflow::design_gain(params(a, b));
      const auto series = zflow::impulse_sequence(zflow::lambda_transform(d), 50);
      for (std::size_t k = 0; k <= 50; ++k) worst = std::max(worst, std::abs(zflow::lambda_rate(d, k) - series[k]));
      ++pairs;
    }
  }
  report(3, "closed form vs long division", pairs == 25 && worst <= 1e-9,
         std::to_string(pairs) + " (a, b) pairs, k <= 50, max abs diff = " + fmt("%.3g", worst));
}

void cumulative_injection() {
  bool pass = true;
  std::string detail;
  for (double a : {-0.2, -0.5}) {
    const auto p = params(a, -0.1);
    const auto d = zflow::design_gain(p);
    double total = 0.0;
    for (std::size_t k = 0; k <= 60; ++k) total += zflow::lambda_rate(d, k) * p.M;
    pass = pass && std::abs(total - 800.0) <= 0.1;
    detail += "a=" + fmt("%g", a) + ": sum = " + fmt("%.9g", total) + "; ";
  }
  report(4, "cumulative injection", pass, detail);
}

void settling_ordering() {
  // Values the long-division step response gives for the two figure pole pairs.
  constexpr std::size_t kFastPairSettling = 4;
  constexpr std::size_t kSlowPairSettling = 7;

  std::vector<std::size_t> epochs;
  bool oracle_agrees = true;
  for (double a : {-0.2, -0.3, -0.4, -0.5}) {
    const auto p = params(a, -0.1);
    const auto r = zflow::predicted_queue(p, 60, 0.01);
    const auto ref = oracle::inverse_of_factored(p.M * zflow::design_gain(p).c, 2, {-p.a, -p.b, 1.0L}, 60);
    std::vector<double> ref_values(ref.begin(), ref.end());
    oracle_agrees = oracle_agrees && r.settling_epoch == oracle::settling_brute(ref_values, 800.0, 0.01);
    epochs.push_back(r.settling_epoch.value_or(9999));
  }
  bool monotone = true;
  for (std::size_t i = 1; i < epochs.size(); ++i) monotone = monotone && epochs[i] >= epochs[i - 1];
  const bool pass = oracle_agrees && monotone && epochs.front() == kFastPairSettling && epochs.back() == kSlowPairSettling;
  std::string list;
  for (auto e : epochs) list += std::to_string(e) + " ";
  report(5, "settling ordering", pass,
         "1% settling for |a| = 0.2, 0.3, 0.4, 0.5 with b = -0.1: " + list + (oracle_agrees ? "(oracle agrees)" : "(oracle DISAGREES)"));
}

void stability_gate() {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> wide(-2.5, 2.5);
  int rejected = 0, accepted = 0;
  bool pass = true;
  const auto probe = [&](double a, double b) {
    const bool must_reject = std::max(std::abs(a), std::abs(b)) >= 1.0 || a == b;
    const bool gate_ok = zflow::check_stability(a, b).ok();
    const auto code = error_code_of([&] { zflow::run_scenario(zflow::Scenario::constant(params(a, b), 14.5)); });
    if (must_reject) {
      pass = pass && !gate_ok && code == zflow::ErrorCode::UnstableParams;
      ++rejected;
    } else {
      pass = pass && gate_ok && !code.has_value();
      ++accepted;
    }
  };
  for (int i = 0; i < 3000; ++i) probe(wide(rng), wide(rng));
  for (int i = 0; i < 300; ++i) {
    const double v = wide(rng) * 0.4;
    probe(v, v);
  }
  for (double edge : {1.0, -1.0}) {
    probe(edge, 0.3);
    probe(-0.3, edge);
  }
  report(6, "stability gate", pass,
         std::to_string(rejected) + " rejected, " + std::to_string(accepted) + " accepted, no unstable run started");
}

void parameter_robustness() {
  double lo = 1e300, hi = -1e300;
  for (const auto& run : zflow::run_reference_suite()) {
    const double q = run.trace.records.back().q_time();
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  const bool pass = std::abs(lo - 800.0) <= 0.1 && std::abs(hi - 800.0) <= 0.1;
  report(7, "parameter robustness", pass,
         "final q_time over Table I lines in [" + fmt("%.9g", lo) + ", " + fmt("%.9g", hi) + "]");
}

void physical_conservation() {
  double worst = 0.0;
  const auto runs = zflow::run_reference_suite(std::nullopt, zflow::Mode::physical);
  for (const auto& run : runs) {
    const auto& recs = run.trace.records;
    double net = 0.0;
    for (std::size_t k = 0; k + 1 < recs.size(); ++k)
      net += (recs[k].sources[0].u0 - recs[k].sources[0].ub) * recs[k].rtt;
    const double dropped = recs.back().drops() - recs.front().drops();
    worst = std::max(worst, std::abs(net - dropped - (recs.back().q_time() - recs.front().q_time())));
  }
  report(8, "physical-mode conservation", runs.size() == 6 && worst <= 1e-9,
         "6 physical traces, max residual = " + fmt("%.3g", worst));
}

void determinism_and_round_trip() {
  bool deterministic = true, round_trip = true;
  const auto dir = std::filesystem::temp_directory_path() / "zflow_acceptance";
  std::filesystem::remove_all(dir);
  for (auto mode : {zflow::Mode::analytic, zflow::Mode::physical}) {
    const auto first = zflow::run_reference_suite(std::nullopt, mode);
    const auto second = zflow::run_reference_suite(std::nullopt, mode);
    for (std::size_t i = 0; i < first.size(); ++i) {
      deterministic = deterministic && zflow::trace_csv(first[i].trace) == zflow::trace_csv(second[i].trace);
      std::istringstream in(zflow::trace_csv(first[i].trace));
      round_trip = round_trip && zflow::read_trace_csv(in) == first[i].trace.records;
      const std::string stem = std::string(zflow::to_string(mode)) + std::to_string(i);
      zflow::emit_trace(first[i].trace, dir, stem, false);
      round_trip = round_trip && zflow::load_trace(dir, stem) == first[i].trace;
    }
  }
  std::filesystem::remove_all(dir);
  report(9, "determinism and round-trip", deterministic && round_trip,
         std::string("repeat runs ") + (deterministic ? "byte-identical" : "DIFFER") + ", CSV parse-back " +
             (round_trip ? "exact" : "MISMATCH"));
}

}  // namespace

int main() {
  const auto guard = [](const char* name, auto fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      std::printf("[FAIL] %s threw: %s\n", name, e.what());
      ++failures;
    }
  };
  guard("AC1", steady_state_queue);
  guard("AC2", gain_design);
  guard("AC3", closed_form_matches_long_division);
  guard("AC4", cumulative_injection);
  guard("AC5", settling_ordering);
  guard("AC6", stability_gate);
  guard("AC7", parameter_robustness);
  guard("AC8", physical_conservation);
  guard("AC9", determinism_and_round_trip);
  std::printf("%s: %d failing criteria\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}

#pragma once

/**
 * @file sim.hpp
 * @brief Closed-loop scenario runner.
 *
 * Each epoch looks up the bottleneck rate, splits it evenly across the
 * sources, asks the controller for every source's sending rate, advances
 * the per-source queues and RTT estimates, and records the result next to
 * the Z-domain prediction for the same design.
 */

#include <cmath>
#include <cstddef>
#include <future>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zflow/analysis.hpp"
#include "zflow/controller.hpp"
#include "zflow/error.hpp"
#include "zflow/plant.hpp"

namespace zflow {

inline constexpr std::size_t kDefaultHorizon = 60;

struct RateChange {
  std::size_t epoch = 0;
  double rate = 0.0;  ///< packets/ms

  friend bool operator==(const RateChange&, const RateChange&) = default;
};

struct Scenario {
  ControllerParams params;
  std::size_t horizon = kDefaultHorizon;
  std::size_t n_sources = 1;
  std::vector<RateChange> ub_schedule;
  Mode mode = Mode::analytic;
  double q0 = 0.0;   ///< total initial queue, split evenly across sources
  double rtt0 = 0.0; ///< initial RTT estimate, ms

  /// Constant bottleneck rate, q0 = 0 and rtt0 = M.
  static Scenario constant(const ControllerParams& p, double ub, Mode mode = Mode::analytic,
                           std::size_t horizon = kDefaultHorizon) {
    Scenario s;
    s.params = p;
    s.horizon = horizon;
    s.ub_schedule = {{0, ub}};
    s.mode = mode;
    s.rtt0 = p.M;
    return s;
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct SourceSample {
  double u0 = 0.0;
  double ub = 0.0;  ///< service actually applied this epoch
  double lambda = 0.0;
  double q_time = 0.0;
  double q_zpred = 0.0;
  double drops = 0.0;

  friend bool operator==(const SourceSample&, const SourceSample&) = default;
};

struct EpochRecord {
  std::size_t k = 0;
  double rtt = 0.0;
  std::vector<SourceSample> sources;

  [[nodiscard]] double q_time() const noexcept {
    double s = 0.0;
    for (const auto& src : sources) s += src.q_time;
    return s;
  }
  [[nodiscard]] double q_zpred() const noexcept {
    double s = 0.0;
    for (const auto& src : sources) s += src.q_zpred;
    return s;
  }
  [[nodiscard]] double drops() const noexcept {
    double s = 0.0;
    for (const auto& src : sources) s += src.drops;
    return s;
  }

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

/// `design` is the per-source design (capacity Q / n_sources).
struct Trace {
  Scenario scenario;
  GainDesign design;
  std::vector<EpochRecord> records;

  friend bool operator==(const Trace&, const Trace&) = default;
};

inline void validate(const Scenario& s) {
  if (s.n_sources == 0) throw Error(ErrorCode::ZeroSources, "n_sources must be >= 1");
  if (s.horizon == 0) throw Error(ErrorCode::InvalidParams, "horizon must be >= 1");
  validate(s.params);
  if (s.ub_schedule.empty()) throw Error(ErrorCode::ScheduleViolation, "ub schedule is empty");
  if (s.ub_schedule.front().epoch != 0) throw Error(ErrorCode::ScheduleViolation, "ub schedule must start at epoch 0");
  for (std::size_t i = 0; i < s.ub_schedule.size(); ++i) {
    const auto& e = s.ub_schedule[i];
    if (!(e.rate >= 0.0) || !std::isfinite(e.rate))
      throw Error(ErrorCode::ScheduleViolation, "ub rates must be finite and >= 0");
    if (i > 0 && e.epoch <= s.ub_schedule[i - 1].epoch)
      throw Error(ErrorCode::ScheduleViolation, "ub schedule epochs must be strictly increasing");
  }
  if (!(s.rtt0 > 0.0) || !std::isfinite(s.rtt0)) throw Error(ErrorCode::InvalidParams, "rtt0 must be > 0");
  if (!std::isfinite(s.q0)) throw Error(ErrorCode::InvalidParams, "q0 must be finite");
  if (s.mode == Mode::physical && (s.q0 < 0.0 || s.q0 > s.params.Q))
    throw Error(ErrorCode::InvalidParams, "physical mode needs 0 <= q0 <= Q");
}

/// Rate in force at epoch k: the last schedule entry at or before k.
inline double scheduled_rate(std::span<const RateChange> schedule, std::size_t k) {
  double rate = schedule.front().rate;
  for (const auto& e : schedule) {
    if (e.epoch > k) break;
    rate = e.rate;
  }
  return rate;
}

inline std::vector<double> split_bottleneck(double ub, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::ZeroSources, "cannot split bandwidth across zero sources");
  const double share = ub / static_cast<double>(n);
  std::vector<double> shares(n, share);
  double assigned = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) assigned += share;
  shares.back() = ub - assigned;
  return shares;
}

inline ControllerParams per_source_params(const Scenario& s) {
  ControllerParams p = s.params;
  p.Q /= static_cast<double>(s.n_sources);
  return p;
}

inline Trace run_scenario(const Scenario& s) {
  validate(s);
  const ControllerParams src_params = per_source_params(s);
  const double n = static_cast<double>(s.n_sources);

  Trace trace;
  trace.scenario = s;
  trace.design = design_gain(src_params);
  const std::vector<double> zpred = predicted_queue(src_params, s.horizon).values;

  std::vector<PlantState> plants(s.n_sources, PlantState{s.q0 / n, s.rtt0, 0.0, 0.0, 0.0, s.mode});
  trace.records.reserve(s.horizon + 1);
  for (std::size_t k = 0; k <= s.horizon; ++k) {
    const auto shares = split_bottleneck(scheduled_rate(s.ub_schedule, k), s.n_sources);
    const double lambda = lambda_rate(trace.design, k);

    EpochRecord rec;
    rec.k = k;
    rec.rtt = plants.front().rtt;
    rec.sources.reserve(s.n_sources);
    for (std::size_t i = 0; i < s.n_sources; ++i) {
      PlantState& st = plants[i];
      const double u0 = send_rate(trace.design, shares[i], k, s.mode);
      PlantState next;
      double applied_ub = shares[i];
      if (s.mode == Mode::analytic) {
        next = queue_step_excess(st, lambda, st.rtt);
      } else {
        next = queue_step(st, u0, shares[i], st.rtt, src_params.Q);
        applied_ub = (next.served - st.served) / st.rtt;
      }
      rec.sources.push_back({u0, applied_ub, lambda, st.q, zpred[k], st.drops});
      next.rtt = rtt_update(st.rtt, s.params.M, s.params.alpha);
      st = next;
    }
    trace.records.push_back(std::move(rec));
  }
  return trace;
}

struct TableLine {
  double ub;  ///< packets/ms
  double M;   ///< ms
  double Q;   ///< packets
};

/// The three plotted parameter lines of the reference experiment.
inline constexpr TableLine kReferenceLines[] = {{14.5, 10.0, 1000.0}, {20.0, 7.5, 1000.0}, {27.0, 5.0, 1000.0}};

struct FigurePoles {
  int figure;
  double a;
  double b;
};

inline constexpr FigurePoles kReferenceFigures[] = {{3, -0.2, -0.1}, {4, -0.5, -0.1}};

struct ReferenceRun {
  int figure = 0;
  int line = 0;  ///< 1-based
  Trace trace;
};

inline Scenario reference_scenario(const FigurePoles& fig, const TableLine& line, Mode mode = Mode::analytic) {
  ControllerParams p;
  p.a = fig.a;
  p.b = fig.b;
  p.Q = line.Q;
  p.M = line.M;
  return Scenario::constant(p, line.ub, mode, kDefaultHorizon);
}

/// Three traces per figure parameterization, figure-major. `figure` limits the run to one figure.
inline std::vector<ReferenceRun> run_reference_suite(std::optional<int> figure = std::nullopt,
                                                     Mode mode = Mode::analytic) {
  std::vector<ReferenceRun> runs;
  for (const auto& fig : kReferenceFigures) {
    if (figure && *figure != fig.figure) continue;
    int line_no = 1;
    for (const auto& line : kReferenceLines)
      runs.push_back({fig.figure, line_no++, run_scenario(reference_scenario(fig, line, mode))});
  }
  if (figure && runs.empty()) throw Error(ErrorCode::InvalidParams, "unknown figure " + std::to_string(*figure));
  return runs;
}

struct SweepEntry {
  double a = 0.0;
  double b = 0.0;
  StabilityVerdict verdict;
  std::optional<double> c;
  std::optional<std::size_t> settling_epoch;
};

/// Grid over (a, b) in a-major input order. Rows are evaluated concurrently.
inline std::vector<SweepEntry> sweep(std::span<const double> a_values, std::span<const double> b_values,
                                     const Scenario& base, double band = kDefaultSettlingBand) {
  if (a_values.empty() || b_values.empty()) throw Error(ErrorCode::InvalidParams, "sweep grids must be non-empty");
  const auto row = [&](double a) {
    std::vector<SweepEntry> out;
    out.reserve(b_values.size());
    for (double b : b_values) {
      SweepEntry e{a, b, check_stability(a, b), std::nullopt, std::nullopt};
      if (e.verdict) {
        ControllerParams p = base.params;
        p.a = a;
        p.b = b;
        e.c = design_gain(p).c;
        e.settling_epoch = predicted_queue(p, base.horizon, band).settling_epoch;
      }
      out.push_back(std::move(e));
    }
    return out;
  };

  std::vector<std::future<std::vector<SweepEntry>>> rows;
  rows.reserve(a_values.size());
  for (double a : a_values) rows.push_back(std::async(std::launch::async, row, a));
  std::vector<SweepEntry> grid;
  grid.reserve(a_values.size() * b_values.size());
  for (auto& f : rows)
    for (auto& e : f.get()) grid.push_back(std::move(e));
  return grid;
}

}  // namespace zflow

#pragma once

/**
 * @file trace_io.hpp
 * @brief Trace files: CSV records, JSON metadata sidecar and an SVG chart.
 *
 * Numbers are written as the shortest decimal that parses back to the same
 * double, so reading a CSV reproduces the records bit for bit.
 */

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "zflow/error.hpp"
#include "zflow/sim.hpp"

namespace zflow {

inline constexpr std::string_view kTraceCsvHeader = "k,source,u0,ub,rtt,lambda,q_time,q_zpred,drops";
inline constexpr std::string_view kSweepCsvHeader = "a,b,stable,c,settling_epoch";

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error(ErrorCode::Io, "number formatting failed");
  return std::string(buf, ptr);
}

inline void write_trace_csv(std::ostream& os, const Trace& t) {
  os << kTraceCsvHeader << '\n';
  for (const auto& rec : t.records) {
    for (std::size_t i = 0; i < rec.sources.size(); ++i) {
      const auto& s = rec.sources[i];
      os << rec.k << ',' << i << ',' << format_double(s.u0) << ',' << format_double(s.ub) << ','
         << format_double(rec.rtt) << ',' << format_double(s.lambda) << ',' << format_double(s.q_time) << ','
         << format_double(s.q_zpred) << ',' << format_double(s.drops) << '\n';
    }
  }
}

inline std::string trace_csv(const Trace& t) {
  std::ostringstream os;
  write_trace_csv(os, t);
  return os.str();
}

namespace detail {

template <typename T>
T parse_field(std::string_view field, std::size_t line_no) {
  T v{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw Error(ErrorCode::MalformedTrace, "line " + std::to_string(line_no) + ": bad field '" + std::string(field) + "'");
  return v;
}

}  // namespace detail

/// Reads the records written by write_trace_csv. Rows must be grouped by epoch, sources in order.
inline std::vector<EpochRecord> read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kTraceCsvHeader) throw Error(ErrorCode::MalformedTrace, "missing CSV header");
  std::vector<EpochRecord> records;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest = line;
    for (auto comma = rest.find(','); comma != std::string_view::npos; comma = rest.find(',')) {
      f.push_back(rest.substr(0, comma));
      rest = rest.substr(comma + 1);
    }
    f.push_back(rest);
    if (f.size() != 9) throw Error(ErrorCode::MalformedTrace, "line " + std::to_string(line_no) + ": expected 9 fields");

    const auto k = detail::parse_field<std::size_t>(f[0], line_no);
    const auto src = detail::parse_field<std::size_t>(f[1], line_no);
    const double rtt = detail::parse_field<double>(f[4], line_no);
    if (src == 0) records.push_back({k, rtt, {}});
    if (records.empty() || records.back().k != k || records.back().sources.size() != src)
      throw Error(ErrorCode::MalformedTrace, "line " + std::to_string(line_no) + ": rows out of order");
    records.back().sources.push_back({detail::parse_field<double>(f[2], line_no),
                                      detail::parse_field<double>(f[3], line_no),
                                      detail::parse_field<double>(f[5], line_no),
                                      detail::parse_field<double>(f[6], line_no),
                                      detail::parse_field<double>(f[7], line_no),
                                      detail::parse_field<double>(f[8], line_no)});
  }
  return records;
}

inline nlohmann::json trace_metadata(const Trace& t) {
  const auto& s = t.scenario;
  const auto params = [](const ControllerParams& p) {
    return nlohmann::json{{"a", p.a}, {"b", p.b}, {"Q", p.Q}, {"M", p.M}, {"alpha", p.alpha}, {"rho", p.rho}};
  };
  nlohmann::json schedule = nlohmann::json::array();
  for (const auto& e : s.ub_schedule) schedule.push_back({{"epoch", e.epoch}, {"rate", e.rate}});
  const auto& d = t.design;
  return {
      {"scenario",
       {{"params", params(s.params)},
        {"horizon", s.horizon},
        {"n_sources", s.n_sources},
        {"ub_schedule", schedule},
        {"mode", to_string(s.mode)},
        {"q0", s.q0},
        {"rtt0", s.rtt0}}},
      {"design",
       {{"params", params(d.params)},
        {"c", d.c},
        {"a1", d.residues.a1},
        {"a2", d.residues.a2},
        {"pole1", d.residues.pole1},
        {"pole2", d.residues.pole2},
        {"steady_state_queue", d.steady_state_queue}}},
  };
}

inline Trace trace_from_metadata(const nlohmann::json& meta, std::vector<EpochRecord> records) {
  try {
    const auto params = [](const nlohmann::json& j) {
      ControllerParams p;
      p.a = j.at("a").get<double>();
      p.b = j.at("b").get<double>();
      p.Q = j.at("Q").get<double>();
      p.M = j.at("M").get<double>();
      p.alpha = j.at("alpha").get<double>();
      p.rho = j.at("rho").get<double>();
      return p;
    };
    Trace t;
    const auto& js = meta.at("scenario");
    t.scenario.params = params(js.at("params"));
    t.scenario.horizon = js.at("horizon").get<std::size_t>();
    t.scenario.n_sources = js.at("n_sources").get<std::size_t>();
    for (const auto& e : js.at("ub_schedule"))
      t.scenario.ub_schedule.push_back({e.at("epoch").get<std::size_t>(), e.at("rate").get<double>()});
    t.scenario.mode = js.at("mode").get<std::string>() == "physical" ? Mode::physical : Mode::analytic;
    t.scenario.q0 = js.at("q0").get<double>();
    t.scenario.rtt0 = js.at("rtt0").get<double>();

    const auto& jd = meta.at("design");
    t.design.params = params(jd.at("params"));
    t.design.c = jd.at("c").get<double>();
    t.design.residues = {jd.at("a1").get<double>(), jd.at("a2").get<double>(), jd.at("pole1").get<double>(),
                         jd.at("pole2").get<double>()};
    t.design.poles = {t.design.residues.pole1, t.design.residues.pole2};
    t.design.steady_state_queue = jd.at("steady_state_queue").get<double>();
    t.records = std::move(records);
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedTrace, std::string("metadata: ") + e.what());
  }
}

/// Line chart of total q_time and q_zpred against k, with the steady-state target dashed.
inline std::string render_chart_svg(const Trace& t, std::string_view title) {
  constexpr double width = 720, height = 420, left = 70, right = 20, top = 40, bottom = 50;
  const double target = t.scenario.params.rho * t.scenario.params.Q;
  double lo = std::min(0.0, target), hi = target;
  for (const auto& r : t.records) {
    lo = std::min({lo, r.q_time(), r.q_zpred()});
    hi = std::max({hi, r.q_time(), r.q_zpred()});
  }
  if (hi <= lo) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  const double kmax = std::max<double>(1.0, static_cast<double>(t.records.empty() ? 1 : t.records.back().k));
  const auto x = [&](double k) { return left + k / kmax * (width - left - right); };
  const auto y = [&](double q) { return top + (hi - q) / (hi - lo) * (height - top - bottom); };

  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
     << title << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
     << height - bottom << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double q = lo + (hi - lo) * i / 4.0;
    os << "<text x=\"" << left - 6 << "\" y=\"" << y(q) + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
       << "font-size=\"11\">" << std::setprecision(0) << q << std::setprecision(2) << "</text>\n";
    const double k = kmax * i / 4.0;
    os << "<text x=\"" << x(k) << "\" y=\"" << height - bottom + 16
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << std::setprecision(0) << k
       << std::setprecision(2) << "</text>\n";
  }
  os << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">epoch k</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << y(target) << "\" x2=\"" << width - right << "\" y2=\"" << y(target)
     << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";

  const auto polyline = [&](auto value, const char* colour) {
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& r : t.records) os << x(static_cast<double>(r.k)) << ',' << y(value(r)) << ' ';
    os << "\"/>\n";
  };
  polyline([](const EpochRecord& r) { return r.q_time(); }, "steelblue");
  polyline([](const EpochRecord& r) { return r.q_zpred(); }, "darkorange");

  os << "<text x=\"" << width - right - 150 << "\" y=\"" << top + 14
     << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"steelblue\">q_time (recursion)</text>\n";
  os << "<text x=\"" << width - right - 150 << "\" y=\"" << top + 28
     << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"darkorange\">q_zpred (Z-domain)</text>\n";
  os << "</svg>\n";
  return os.str();
}

namespace detail {

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace detail

/// Writes `<stem>.csv`, `<stem>.json` and optionally `<stem>.svg` into `dir`; returns the paths written.
inline std::vector<std::filesystem::path> emit_trace(const Trace& t, const std::filesystem::path& dir,
                                                     const std::string& stem, bool emit_chart) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written{dir / (stem + ".csv"), dir / (stem + ".json")};
  detail::write_file(written[0], trace_csv(t));
  detail::write_file(written[1], trace_metadata(t).dump(2) + "\n");
  if (emit_chart) {
    written.push_back(dir / (stem + ".svg"));
    detail::write_file(written.back(), render_chart_svg(t, stem));
  }
  return written;
}

/// Reads a trace written by emit_trace back from `<stem>.csv` and `<stem>.json`.
inline Trace load_trace(const std::filesystem::path& dir, const std::string& stem) {
  std::ifstream csv(dir / (stem + ".csv"));
  std::ifstream meta(dir / (stem + ".json"));
  if (!csv || !meta) throw Error(ErrorCode::Io, "cannot read trace " + (dir / stem).string());
  auto records = read_trace_csv(csv);
  nlohmann::json j;
  try {
    meta >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedTrace, std::string("metadata: ") + e.what());
  }
  return trace_from_metadata(j, std::move(records));
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepEntry>& grid) {
  os << kSweepCsvHeader << '\n';
  for (const auto& e : grid) {
    os << format_double(e.a) << ',' << format_double(e.b) << ',' << (e.verdict ? "true" : "false") << ','
       << (e.c ? format_double(*e.c) : "") << ',' << (e.settling_epoch ? std::to_string(*e.settling_epoch) : "")
       << '\n';
  }
}

}  // namespace zflow

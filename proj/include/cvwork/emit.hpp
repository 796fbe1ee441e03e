#pragma once

// CSV and JSON serialisation of sweep rows and single results.

#include <array>
#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cvwork/classification.hpp"
#include "cvwork/error.hpp"
#include "cvwork/montecarlo.hpp"
#include "cvwork/protocols.hpp"
#include "cvwork/sweep.hpp"

namespace cvwork {

using json = nlohmann::ordered_json;

enum class Format { Csv, Json };

inline constexpr std::string_view kCsvHeader = "a,b,c1,c2,physical,separable,steer_b_to_a,steer_a_to_b,w_hom,w_het";

/// Shortest decimal that round-trips to the same double.
inline std::string format_real(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline constexpr std::string_view to_string(BoundaryKind k) noexcept {
  switch (k) {
    case BoundaryKind::Physicality: return "phys";
    case BoundaryKind::Separability: return "sep";
    case BoundaryKind::NonsteerabilityBtoA: return "steer";
  }
  return "?";
}

inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kCsvHeader << '\n';
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  for (const auto& r : rows) {
    os << format_real(r.a) << ',' << format_real(r.b) << ',' << format_real(r.c1) << ',' << format_real(r.c2) << ','
       << int(r.physical) << ',' << int(r.separable) << ',' << int(r.steer_b_to_a) << ',' << int(r.steer_a_to_b)
       << ',' << opt(r.w_hom) << ',' << opt(r.w_het) << '\n';
  }
}

inline json to_json(const SweepRow& r) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"a", r.a},
          {"b", r.b},
          {"c1", r.c1},
          {"c2", r.c2},
          {"physical", r.physical},
          {"separable", r.separable},
          {"steer_b_to_a", r.steer_b_to_a},
          {"steer_a_to_b", r.steer_a_to_b},
          {"w_hom", opt(r.w_hom)},
          {"w_het", opt(r.w_het)}};
}

inline json to_json(const ClassRecord& c) {
  return {{"physical", c.physical},
          {"separable", c.separable},
          {"steerable_b_to_a", c.steerable_b_to_a},
          {"steerable_a_to_b", c.steerable_a_to_b}};
}

inline json to_json(const RedDot& d) {
  return {{"boundary", std::string(to_string(d.boundary))},
          {"c1_star", d.c1_star},
          {"c2_star", d.c2_star},
          {"w_star", d.w_star},
          {"at_edge", d.at_edge}};
}

inline json to_json(const SingleModeState& s) {
  return {{"mean", {s.mean(0), s.mean(1)}},
          {"cov", {{s.cov(0, 0), s.cov(0, 1)}, {s.cov(1, 0), s.cov(1, 1)}}}};
}

inline json to_json(const Trajectory& t) {
  return {{"outcome", {t.outcome(0), t.outcome(1)}},
          {"post_measurement", to_json(t.post_measurement)},
          {"post_displacement", to_json(t.post_displacement)},
          {"squeeze_s", t.squeeze_s},
          {"final_state", to_json(t.final_state)},
          {"initial_energy", t.initial_energy},
          {"final_energy", t.final_energy},
          {"work", t.work}};
}

inline json to_json(const WorkReport& w) {
  return {{"w_hom", w.w_hom}, {"w_het", w.w_het}, {"w_x", w.w_x}, {"w_p", w.w_p}};
}

inline json to_json(const mc::WorkEstimate& w) {
  return {{"mean_work", w.mean_work}, {"stderr", w.standard_error}, {"per_shot_variance", w.per_shot_variance}};
}

inline void write_json(std::ostream& os, const std::vector<SweepRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  os << arr.dump(2) << '\n';
}

inline void write_rows(std::ostream& os, const std::vector<SweepRow>& rows, Format format) {
  if (format == Format::Csv)
    write_csv(os, rows);
  else
    write_json(os, rows);
}

/// Writes rows to `destination`; "-" means standard output.
inline void emit(const std::vector<SweepRow>& rows, Format format, const std::string& destination) {
  if (destination == "-") {
    write_rows(std::cout, rows, format);
    std::cout.flush();
    if (!std::cout) throw Error(ErrorCode::IoError, "failed writing to standard output");
    return;
  }
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + destination);
  write_rows(out, rows, format);
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + destination);
}

}  // namespace cvwork

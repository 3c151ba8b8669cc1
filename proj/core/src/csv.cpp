#include "mvam/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "mvam/error.hpp"

namespace mvam {

namespace {

std::string field(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string{}; }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_double(const std::string& s, const std::string& where) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    // from_chars rejects "inf"; accept it explicitly.
    if (s == "inf") return std::numeric_limits<double>::infinity();
    throw ConfigError(fmt::format("{}: '{}' is not a number", where, s));
  }
  return v;
}

}  // namespace

void write_records_csv(std::ostream& out, std::span<const EvaluationRecord> records) {
  out << kRecordHeader << '\n';
  for (const auto& r : records) {
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", r.id, r.body.com_offset.x, r.body.com_offset.y,
                       r.body.inertia_sagittal, r.body.mass, field(r.tcot), field(r.payload_margin),
                       field(r.min_stability_margin), r.feasible ? 1 : 0);
  }
}

std::vector<RecordRow> read_records_csv(std::istream& in, const std::string& source) {
  std::vector<RecordRow> rows;
  std::string line;
  if (!std::getline(in, line)) return rows;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordHeader) throw ConfigError(fmt::format("{}:1: unexpected header '{}'", source, line));
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = fmt::format("{}:{}", source, lineno);
    const auto cells = split(line);
    if (cells.size() != 9) {
      throw ConfigError(fmt::format("{}: expected 9 columns, found {}", where, cells.size()));
    }
    auto required = [&](int i) {
      const auto v = parse_double(cells[i], where);
      if (!v) throw ConfigError(fmt::format("{}: column {} must not be empty", where, i + 1));
      return *v;
    };
    RecordRow r;
    r.id = static_cast<std::size_t>(required(0));
    r.cx = required(1);
    r.cy = required(2);
    r.ib = required(3);
    r.mass = required(4);
    r.tcot = parse_double(cells[5], where);
    r.payload_margin = parse_double(cells[6], where);
    r.min_stability_margin = parse_double(cells[7], where);
    if (cells[8] != "0" && cells[8] != "1") {
      throw ConfigError(fmt::format("{}: feasible must be 0 or 1", where));
    }
    r.feasible = cells[8] == "1";
    rows.push_back(r);
  }
  return rows;
}

std::string trace_header() {
  std::string h = "t_s,x_m,z_m,theta_rad";
  for (Leg leg : kAllLegs) {
    const auto n = leg_name(leg);
    h += fmt::format(",{0}_phi_rad,{0}_ell_m,{0}_tau_hip_Nm,{0}_tau_knee_Nm,{0}_Fx_N,{0}_Fz_N", n);
  }
  h += ",margin_m";
  return h;
}

void write_trace_csv(std::ostream& out, const DynamicsTrace& trace) {
  out << trace_header() << '\n';
  const auto& st = trace.states;
  for (std::size_t k = 0; k < st.time.size(); ++k) {
    const PlanarState& s = st.states[k];
    std::string row = fmt::format("{},{},{},{}", st.time[k], s.position.x, s.position.y, s.pitch);
    for (Leg leg : kAllLegs) {
      const std::size_t i = index(leg);
      const Vec2 f = trace.contact_forces[k][i];
      row += fmt::format(",{},{},{},{},{},{}", s.legs[i].phi, s.legs[i].ell,
                         trace.torques.torque[k][hip_joint(leg)],
                         trace.torques.torque[k][knee_joint(leg)], f.x, f.y);
    }
    row += fmt::format(",{}\n", trace.margin[k]);
    out << row;
  }
}

void write_history_csv(std::ostream& out, std::span<const GenerationStats> history) {
  out << kHistoryHeader << '\n';
  for (const auto& h : history) out << fmt::format("{},{},{}\n", h.generation, h.best, h.mean);
}

Slice slice_at_cy(std::span<const RecordRow> rows, double cy) {
  Slice s;
  s.requested_cy = cy;
  for (const auto& r : rows) {
    if (!s.snapped_cy || std::abs(r.cy - cy) < std::abs(*s.snapped_cy - cy)) s.snapped_cy = r.cy;
  }
  if (!s.snapped_cy) return s;
  for (const auto& r : rows) {
    if (r.cy == *s.snapped_cy) s.rows.push_back(r);
  }
  return s;
}

void write_slice_csv(std::ostream& out, const Slice& slice) {
  out << kSliceHeader << '\n';
  for (const auto& r : slice.rows) out << fmt::format("{},{},{}\n", r.cx, r.ib, field(r.tcot));
}

}  // namespace mvam

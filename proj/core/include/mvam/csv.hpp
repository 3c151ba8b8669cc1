#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvam/dynamics.hpp"
#include "mvam/energetics.hpp"
#include "mvam/search.hpp"

namespace mvam {

// Doubles are written in shortest round-trip form so files re-read exactly and
// reruns compare byte for byte. Missing values are written as empty fields.

inline constexpr const char* kRecordHeader =
    "id,cx_m,cy_m,ib_kgm2,mass_kg,tcot,payload_margin_kg,min_stability_margin_m,feasible";

void write_records_csv(std::ostream& out, std::span<const EvaluationRecord> records);

// Row of a records file as read back (only the exported columns).
struct RecordRow {
  std::size_t id = 0;
  double cx = 0.0;
  double cy = 0.0;
  double ib = 0.0;
  double mass = 0.0;
  std::optional<double> tcot;
  std::optional<double> payload_margin;
  std::optional<double> min_stability_margin;
  bool feasible = false;
};

// Throws ConfigError naming the line on malformed input.
std::vector<RecordRow> read_records_csv(std::istream& in, const std::string& source = "<records>");

std::string trace_header();
void write_trace_csv(std::ostream& out, const DynamicsTrace& trace);

inline constexpr const char* kHistoryHeader = "generation,best_tcot,mean_tcot";
void write_history_csv(std::ostream& out, std::span<const GenerationStats> history);

inline constexpr const char* kSliceHeader = "cx_m,ib_kgm2,tcot";

struct Slice {
  double requested_cy = 0.0;
  std::optional<double> snapped_cy;  // nearest cy present in the records
  std::vector<RecordRow> rows;       // ordered as in the input
};

// Rows whose cy equals the on-grid value nearest to `cy`.
Slice slice_at_cy(std::span<const RecordRow> rows, double cy);
void write_slice_csv(std::ostream& out, const Slice& slice);

}  // namespace mvam

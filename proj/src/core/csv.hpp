#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "analysis.hpp"
#include "sim.hpp"

namespace layercache {

inline constexpr std::string_view kSimCsvHeader =
    "scenario_id,policy,B,d,v_or_l,kind,requests,hits,hit_prob,hit_rate,N,seed";

enum class RowKind { kVersion, kLayer, kAggregate };

std::string_view to_string(RowKind kind);
RowKind row_kind_from_string(std::string_view name);

// One line of the result CSV. Indices are one-based; absent fields are
// written as empty cells.
struct CsvRow {
  std::string scenario_id;
  std::string policy;
  double capacity = 0.0;
  std::optional<std::size_t> object;
  std::optional<std::size_t> index;
  RowKind kind = RowKind::kAggregate;
  std::optional<std::uint64_t> requests;
  std::optional<std::uint64_t> hits;
  std::optional<double> hit_prob;
  std::optional<double> hit_rate;
  std::optional<std::uint64_t> trace_length;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const CsvRow&, const CsvRow&) = default;
};

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const CsvRow& row);
void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);

// Parses a file written by write_csv; throws IoError on a malformed line.
std::vector<CsvRow> read_csv(std::istream& in);

// %.10g-style formatting used for every float cell.
std::string format_number(double value);

// Per-cell rows: version and layer rows with counts summed over seeds, one
// aggregate row per seed, then an aggregate row for the mean over seeds.
std::vector<CsvRow> sweep_rows(const SweepCell& cell);

// Layer (LR) or version (MR) rows of predicted hit probabilities plus an
// aggregate row with the predicted hit rate.
std::vector<CsvRow> approx_rows(std::string_view scenario_id, std::string_view policy,
                                const ApproxSolution& solution);

CsvRow aggregate_row(std::string_view scenario_id, std::string_view policy, double capacity,
                     double hit_rate);

}  // namespace layercache

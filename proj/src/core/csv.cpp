#include "csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace layercache {

namespace {

template <class T>
std::string cell(const std::optional<T>& value) {
  if (!value) return {};
  if constexpr (std::is_floating_point_v<T>) {
    return format_number(*value);
  } else {
    return fmt::format("{}", *value);
  }
}

std::string quote(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

template <class T>
std::optional<T> parse(const std::string& text, std::size_t line) {
  if (text.empty()) return std::nullopt;
  T value{};
  const auto* end = text.data() + text.size();
  if constexpr (std::is_floating_point_v<T>) {
    if (text == "inf") return std::numeric_limits<T>::infinity();
    // GCC 11 lacks floating-point from_chars in some configurations.
    std::size_t used = 0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size()) throw IoError(fmt::format("csv line {}: bad number \"{}\"", line, text));
  } else {
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
      throw IoError(fmt::format("csv line {}: bad integer \"{}\"", line, text));
    }
  }
  return value;
}

}  // namespace

std::string_view to_string(RowKind kind) {
  switch (kind) {
    case RowKind::kVersion: return "version";
    case RowKind::kLayer: return "layer";
    case RowKind::kAggregate: break;
  }
  return "aggregate";
}

RowKind row_kind_from_string(std::string_view name) {
  if (name == "version") return RowKind::kVersion;
  if (name == "layer") return RowKind::kLayer;
  if (name == "aggregate") return RowKind::kAggregate;
  throw IoError(fmt::format("unknown row kind \"{}\"", name));
}

std::string format_number(double value) { return fmt::format("{:.10g}", value); }

void write_csv_header(std::ostream& out) { out << kSimCsvHeader << '\n'; }

void write_csv_row(std::ostream& out, const CsvRow& row) {
  fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{}\n", quote(row.scenario_id),
             quote(row.policy), format_number(row.capacity), cell(row.object), cell(row.index),
             to_string(row.kind), cell(row.requests), cell(row.hits), cell(row.hit_prob),
             cell(row.hit_rate), cell(row.trace_length), cell(row.seed));
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
  write_csv_header(out);
  for (const auto& row : rows) write_csv_row(out, row);
}

std::vector<CsvRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSimCsvHeader) throw IoError("csv: missing or wrong header");
  std::vector<CsvRow> rows;
  for (std::size_t n = 2; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 12) throw IoError(fmt::format("csv line {}: expected 12 fields, got {}", n, f.size()));
    CsvRow row;
    row.scenario_id = f[0];
    row.policy = f[1];
    const auto capacity = parse<double>(f[2], n);
    if (!capacity) throw IoError(fmt::format("csv line {}: B is empty", n));
    row.capacity = *capacity;
    row.object = parse<std::size_t>(f[3], n);
    row.index = parse<std::size_t>(f[4], n);
    row.kind = row_kind_from_string(f[5]);
    row.requests = parse<std::uint64_t>(f[6], n);
    row.hits = parse<std::uint64_t>(f[7], n);
    row.hit_prob = parse<double>(f[8], n);
    row.hit_rate = parse<double>(f[9], n);
    row.trace_length = parse<std::uint64_t>(f[10], n);
    row.seed = parse<std::uint64_t>(f[11], n);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CsvRow> sweep_rows(const SweepCell& cell) {
  const auto& s = cell.summary;
  const auto& c = s.combined;
  const std::uint64_t n = s.runs.empty() ? 0 : s.runs.front().trace_length;
  std::vector<CsvRow> rows;
  const auto base = [&](RowKind kind) {
    CsvRow row;
    row.scenario_id = cell.scenario_id;
    row.policy = cell.policy;
    row.capacity = cell.capacity;
    row.kind = kind;
    row.trace_length = n;
    return row;
  };
  for (std::size_t d = 0; d < c.requests.rows(); ++d) {
    for (std::size_t v = 0; v < c.requests.cols(); ++v) {
      auto row = base(RowKind::kVersion);
      row.object = d + 1;
      row.index = v + 1;
      row.requests = c.requests(d, v);
      row.hits = c.hits(d, v);
      row.hit_prob = c.hit_prob(d, v);
      rows.push_back(std::move(row));
    }
  }
  for (std::size_t d = 0; d < c.layer_requests.rows(); ++d) {
    for (std::size_t l = 0; l < c.layer_requests.cols(); ++l) {
      auto row = base(RowKind::kLayer);
      row.object = d + 1;
      row.index = l + 1;
      row.requests = c.layer_requests(d, l);
      row.hits = c.layer_hits(d, l);
      row.hit_prob = c.layer_hit_prob(d, l);
      rows.push_back(std::move(row));
    }
  }
  for (const auto& run : s.runs) {
    auto row = base(RowKind::kAggregate);
    row.requests = run.total_requests();
    row.hits = run.total_hits();
    row.hit_rate = run.hit_rate();
    row.seed = run.seed;
    rows.push_back(std::move(row));
  }
  auto total = base(RowKind::kAggregate);
  total.requests = c.total_requests();
  total.hits = c.total_hits();
  total.hit_rate = s.mean_hit_rate;
  rows.push_back(std::move(total));
  return rows;
}

std::vector<CsvRow> approx_rows(std::string_view scenario_id, std::string_view policy,
                                const ApproxSolution& solution) {
  std::vector<CsvRow> rows;
  for (std::size_t d = 0; d < solution.hit_prob.rows(); ++d) {
    for (std::size_t l = 0; l < solution.hit_prob.cols(); ++l) {
      CsvRow row;
      row.scenario_id = scenario_id;
      row.policy = policy;
      row.capacity = solution.capacity;
      row.object = d + 1;
      row.index = l + 1;
      row.kind = solution.layered ? RowKind::kLayer : RowKind::kVersion;
      row.hit_prob = solution.hit_prob(d, l);
      rows.push_back(std::move(row));
    }
  }
  rows.push_back(aggregate_row(scenario_id, policy, solution.capacity, solution.hit_rate));
  return rows;
}

CsvRow aggregate_row(std::string_view scenario_id, std::string_view policy, double capacity,
                     double hit_rate) {
  CsvRow row;
  row.scenario_id = scenario_id;
  row.policy = policy;
  row.capacity = capacity;
  row.kind = RowKind::kAggregate;
  row.hit_rate = hit_rate;
  return row;
}

}  // namespace layercache

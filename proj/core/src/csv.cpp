#include "retrainer/stream/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "retrainer/errors.hpp"

namespace retrainer::stream {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s, std::size_t row, const std::string& col) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw IngestError("row " + std::to_string(row) + ": cannot parse '" + s + "' in column '" +
                      col + "'");
  }
  return v;
}

}  // namespace

LoadedSeries load_dataset(const std::string& path, const DatasetSchema& schema,
                          const std::string& slice_filter, double tick_period_ms) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw IngestError("'" + path + "': empty file");
  const auto header = split_row(line);

  auto col_index = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw IngestError("'" + path + "': missing required column '" + name + "'");
  };
  const std::size_t ts_col = col_index(schema.timestamp_col);
  const std::size_t slice_col = col_index(schema.slice_col);
  const std::size_t metric_col = col_index(schema.metric_col);

  LoadedSeries series;
  double last_ts = -std::numeric_limits<double>::infinity();
  std::size_t row = 1;  // header was row 1
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto fields = split_row(line);
    const std::size_t needed = std::max({ts_col, slice_col, metric_col});
    if (fields.size() <= needed) {
      throw IngestError("row " + std::to_string(row) + ": expected at least " +
                        std::to_string(needed + 1) + " columns, found " +
                        std::to_string(fields.size()));
    }
    if (!slice_filter.empty() && fields[slice_col] != slice_filter) continue;

    const double ts = parse_double(fields[ts_col], row, schema.timestamp_col);
    const double value = parse_double(fields[metric_col], row, schema.metric_col);
    if (ts <= last_ts) {
      throw IngestError("row " + std::to_string(row) + ": timestamp " + fields[ts_col] +
                        " is not strictly increasing for slice '" + slice_filter + "'");
    }

    if (!series.samples.empty()) {
      // Forward-fill holes in the tick grid.
      double expected = last_ts + tick_period_ms;
      while (expected < ts - 1e-9) {
        series.samples.push_back(series.samples.back());
        series.timestamps_ms.push_back(expected);
        ++series.filled_gaps;
        expected += tick_period_ms;
      }
    }
    series.samples.push_back(value);
    series.timestamps_ms.push_back(ts);
    last_ts = ts;
  }
  return series;
}

}  // namespace retrainer::stream

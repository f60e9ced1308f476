#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace retrainer::stream {

// Column mapping for replaying slicing datasets. Timestamps must be strictly
// increasing per slice; the metric column carries the KPI of interest
// (downlink tx_brate in the slicing captures this was written for).
struct DatasetSchema {
  std::string timestamp_col = "timestamp_ms";
  std::string slice_col = "slice_id";
  std::string metric_col = "tx_brate";
};

struct LoadedSeries {
  std::vector<double> samples;
  std::vector<double> timestamps_ms;
  std::size_t filled_gaps = 0;  // samples forward-filled over missing ticks
};

// Reads a UTF-8, comma-separated file with a header row and returns the
// metric series for the selected slice. Gaps in the tick grid are forward
// filled and counted. Throws IngestError naming the first offending row for
// missing columns, unparsable fields, or non-monotone timestamps.
LoadedSeries load_dataset(const std::string& path, const DatasetSchema& schema,
                          const std::string& slice_filter, double tick_period_ms = 1.0);

}  // namespace retrainer::stream

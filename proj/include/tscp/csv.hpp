#pragma once

#include <string>
#include <vector>

#include "tscp/types.hpp"

namespace tscp {

struct CsvSchema {
    std::string time_col = "t";
    std::string value_col = "y";
    std::vector<std::string> feature_cols;
    int period = 0;
};

/// Reads a comma-separated file with a header row into a validated series;
/// rows keep file order and non-numeric cells are rejected with their
/// location.
TimeSeries load_csv(const std::string& path, const CsvSchema& schema);

/// Writes t,y (and feature columns) with fixed 6-decimal formatting.
void save_series_csv(const std::string& path, const TimeSeries& series,
                     const CsvSchema& schema = {});

/// Fixed 6-decimal float formatting; infinities serialize as "inf"/"-inf".
std::string format_number(double x);

} // namespace tscp

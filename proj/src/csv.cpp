#include "tscp/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tscp {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, Index row, const std::string& col) {
    try {
        size_t pos = 0;
        const double v = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::NonNumericCell, "non-numeric cell in column '" + col +
                                                   "' at data row " + std::to_string(row + 1));
    }
}

} // namespace

TimeSeries load_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open " + path);

    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::EmptyFile, path + " is empty");
    const std::vector<std::string> header = split_line(line);

    auto column_index = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw Error(ErrorCode::MissingColumn, "missing column '" + name + "' in " + path);
        return static_cast<Index>(it - header.begin());
    };
    const Index value_idx = column_index(schema.value_col);
    std::vector<Index> feature_idx;
    for (const auto& name : schema.feature_cols) feature_idx.push_back(column_index(name));

    std::vector<double> values;
    std::vector<std::vector<double>> feature_rows;
    Index row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_line(line);
        if (static_cast<Index>(cells.size()) < static_cast<Index>(header.size()))
            throw Error(ErrorCode::NonNumericCell,
                        "short row " + std::to_string(row + 1) + " in " + path);
        values.push_back(parse_cell(cells[value_idx], row, schema.value_col));
        if (!feature_idx.empty()) {
            std::vector<double> f;
            for (size_t j = 0; j < feature_idx.size(); ++j)
                f.push_back(parse_cell(cells[feature_idx[j]], row, schema.feature_cols[j]));
            feature_rows.push_back(std::move(f));
        }
        ++row;
    }
    if (values.empty())
        throw Error(ErrorCode::EmptyFile, path + " has no data rows");

    Vec v = Eigen::Map<Vec>(values.data(), static_cast<Index>(values.size()));
    std::optional<Mat> features;
    if (!feature_rows.empty()) {
        Mat f(static_cast<Index>(feature_rows.size()), static_cast<Index>(feature_idx.size()));
        for (Index i = 0; i < f.rows(); ++i)
            for (Index j = 0; j < f.cols(); ++j) f(i, j) = feature_rows[i][j];
        features = std::move(f);
    }
    TimeSeries series = make_series(std::move(v), schema.period, std::move(features));
    return validate_series(series, false), series;
}

std::string format_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

void save_series_csv(const std::string& path, const TimeSeries& series, const CsvSchema& schema) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::IoFailure, "cannot write " + path);
    out << schema.time_col << ',' << schema.value_col;
    for (const auto& name : schema.feature_cols) out << ',' << name;
    out << '\n';
    for (Index i = 0; i < series.size(); ++i) {
        out << series.time_index[i] << ',' << format_number(series.values[i]);
        if (series.features)
            for (Index j = 0; j < series.features->cols(); ++j)
                out << ',' << format_number((*series.features)(i, j));
        out << '\n';
    }
    if (!out)
        throw Error(ErrorCode::IoFailure, "failed writing " + path);
}

} // namespace tscp

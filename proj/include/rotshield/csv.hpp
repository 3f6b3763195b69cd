#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "rotshield/dataset.hpp"

namespace rotshield {

/// Shortest decimal string that round-trips the double exactly.
inline std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

[[noreturn]] inline void csv_error(const std::string& path, std::size_t row,
                                   std::size_t col, const std::string& what) {
    std::ostringstream msg;
    msg << path << ": row " << row << ", column " << col << ": " << what;
    throw std::runtime_error(msg.str());
}

} // namespace detail

/// Reads a dataset from CSV: header row with attribute names, then one
/// record per row, one attribute per column, no missing values. Parse
/// failures carry 1-based row/column positions (the header is row 1).
inline Dataset read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open())
        throw std::runtime_error("read_csv: cannot open '" + path + "'");

    std::string line;
    std::size_t row = 0;
    if (!std::getline(in, line))
        throw std::runtime_error("read_csv: '" + path + "' is empty");
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::vector<std::string> names = detail::split_csv_line(line);
    const std::size_t d = names.size();
    for (std::size_t k = 0; k < d; ++k)
        if (names[k].empty())
            detail::csv_error(path, row, k + 1, "empty attribute name in header");

    std::vector<std::vector<double>> records;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::vector<std::string> cells = detail::split_csv_line(line);
        if (cells.size() != d)
            detail::csv_error(path, row, cells.size(),
                              "expected " + std::to_string(d) + " columns, got " +
                                  std::to_string(cells.size()));
        std::vector<double> rec(d);
        for (std::size_t k = 0; k < d; ++k) {
            const std::string& cell = cells[k];
            if (cell.empty())
                detail::csv_error(path, row, k + 1, "empty cell");
            double v = 0.0;
            const auto res =
                std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
                detail::csv_error(path, row, k + 1,
                                  "not a number: '" + cell + "'");
            if (!std::isfinite(v))
                detail::csv_error(path, row, k + 1,
                                  "non-finite value: '" + cell + "'");
            rec[k] = v;
        }
        records.push_back(std::move(rec));
    }
    if (records.empty())
        throw std::runtime_error("read_csv: '" + path + "' has a header but no records");

    Dataset data(d, records.size());
    data.attribute_names = names;
    for (std::size_t j = 0; j < records.size(); ++j)
        for (std::size_t k = 0; k < d; ++k) data.values(k, j) = records[j][k];
    return data;
}

/// Writes a dataset as CSV in read_csv's format, with shortest-round-trip
/// numbers so a write/read cycle is lossless.
inline void write_csv(const std::string& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out.is_open())
        throw std::runtime_error("write_csv: cannot open '" + path + "' for writing");
    for (std::size_t k = 0; k < data.d; ++k) {
        if (k > 0) out << ',';
        out << data.attribute_name(k);
    }
    out << '\n';
    for (std::size_t j = 0; j < data.N; ++j) {
        for (std::size_t k = 0; k < data.d; ++k) {
            if (k > 0) out << ',';
            out << format_double(data.values(k, j));
        }
        out << '\n';
    }
    if (!out)
        throw std::runtime_error("write_csv: failed writing '" + path + "'");
}

} // namespace rotshield

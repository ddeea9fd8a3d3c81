#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "krigmean/csv.hpp"
#include "krigmean/errors.hpp"

namespace krigmean {

enum class SeriesFormat {
    plain,  ///< one numeric value per line
    dated   ///< two-column CSV "date,close"; the second column is used
};

/// The observed realization v_1..v_n of the field at integer positions
/// 1..n. Immutable after construction; n >= 3 and all values finite.
/// Labels (dates) are opaque annotations, never parsed into arithmetic.
class TimeSeries {
public:
    static constexpr std::size_t min_length = 3;

    explicit TimeSeries(std::vector<double> values,
                        std::vector<std::string> labels = {})
        : values_(std::move(values)), labels_(std::move(labels)) {
        if (values_.size() < min_length)
            throw TooShort(values_.size(), min_length);
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i]))
                throw MalformedRow(i + 1, "non-finite value");
        }
    }

    std::size_t n() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    bool has_labels() const noexcept { return labels_.size() == n(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Returns the contiguous window of length `len` starting at 1-based
    /// position `start`.
    TimeSeries window(std::size_t start, std::size_t len) const {
        if (start < 1 || len < 1 || start - 1 + len > n())
            throw DataError("window [" + std::to_string(start) + ", +" +
                            std::to_string(len) + ") exceeds series length " +
                            std::to_string(n()));
        std::vector<double> vals(values_.begin() + (start - 1),
                                 values_.begin() + (start - 1 + len));
        std::vector<std::string> labs;
        if (has_labels())
            labs.assign(labels_.begin() + (start - 1),
                        labels_.begin() + (start - 1 + len));
        return TimeSeries(std::move(vals), std::move(labs));
    }

private:
    std::vector<double> values_;
    std::vector<std::string> labels_;
};

namespace detail {

inline TimeSeries load_plain(std::istream& in, const std::string& path) {
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = csv::chomp(line);
        double v;
        // blank lines are an error, not skipped: a silent gap would shift
        // every lag in the variogram
        if (!csv::parse_double(line, v) || !std::isfinite(v))
            throw MalformedRow(lineno, line);
        values.push_back(v);
    }
    if (lineno == 0) throw EmptyInput(path);
    if (values.size() < TimeSeries::min_length)
        throw TooShort(values.size(), TimeSeries::min_length);
    return TimeSeries(std::move(values));
}

inline TimeSeries load_dated(std::istream& in, const std::string& path) {
    std::vector<double> values;
    std::vector<std::string> labels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = csv::chomp(line);
        auto cells = csv::split_row(line);
        if (cells.size() != 2) throw MalformedRow(lineno, line);
        double v;
        if (!csv::parse_double(cells[1], v) || !std::isfinite(v)) {
            if (lineno == 1) continue;  // header row
            throw MalformedRow(lineno, line);
        }
        labels.push_back(cells[0]);
        values.push_back(v);
    }
    if (lineno == 0) throw EmptyInput(path);
    if (values.size() < TimeSeries::min_length)
        throw TooShort(values.size(), TimeSeries::min_length);
    return TimeSeries(std::move(values), std::move(labels));
}

}  // namespace detail

/// Loads a series from disk. Rows must be in chronological order; in the
/// `dated` format a leading header row is skipped when its second field
/// is non-numeric.
inline TimeSeries load_series(const std::string& path, SeriesFormat format) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return format == SeriesFormat::plain ? detail::load_plain(in, path)
                                         : detail::load_dated(in, path);
}

/// Writes one value per line at full precision, so a reload reproduces
/// the series bit for bit.
inline void save_plain(const TimeSeries& ts, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    char buf[64];
    for (double v : ts.values()) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace krigmean

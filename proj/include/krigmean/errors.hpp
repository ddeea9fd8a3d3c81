#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace krigmean {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

/// Input data violates a structural requirement.
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(what) {}
};

class EmptyInput : public DataError {
public:
    explicit EmptyInput(const std::string& path)
        : DataError("empty input: " + path) {}
};

class TooShort : public DataError {
public:
    TooShort(std::size_t n, std::size_t min_n)
        : DataError("series too short: n=" + std::to_string(n) +
                    ", need at least " + std::to_string(min_n)) {}
};

class MalformedRow : public DataError {
public:
    MalformedRow(std::size_t line, const std::string& content)
        : DataError("malformed row at line " + std::to_string(line) + ": '" +
                    content + "'"),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A numerical step could not be carried out on the given input.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(what) {}
};

/// Constant series: the variogram carries no correlation information.
class DegenerateVariogram : public NumericError {
public:
    explicit DegenerateVariogram(const std::string& what)
        : NumericError(what) {}
};

class LagOutOfRange : public NumericError {
public:
    LagOutOfRange(std::size_t h, std::size_t max_h)
        : NumericError("lag " + std::to_string(h) + " out of range [0, " +
                       std::to_string(max_h) + "]") {}
};

class NoInformativePoints : public NumericError {
public:
    explicit NoInformativePoints(const std::string& what)
        : NumericError(what) {}
};

class NonFiniteResidual : public NumericError {
public:
    explicit NonFiniteResidual(const std::string& what)
        : NumericError(what) {}
};

class SingularSystem : public NumericError {
public:
    SingularSystem(std::size_t pivot_index, double pivot_magnitude,
                   const std::string& context = "")
        : NumericError("singular system: pivot " +
                       std::to_string(pivot_index) + " has magnitude " +
                       std::to_string(pivot_magnitude) + context),
          pivot_index_(pivot_index),
          pivot_magnitude_(pivot_magnitude) {}

    std::size_t pivot_index() const noexcept { return pivot_index_; }
    double pivot_magnitude() const noexcept { return pivot_magnitude_; }

private:
    std::size_t pivot_index_;
    double pivot_magnitude_;
};

class NotPositiveDefinite : public NumericError {
public:
    explicit NotPositiveDefinite(const std::string& what)
        : NumericError(what) {}
};

}  // namespace krigmean

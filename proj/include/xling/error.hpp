#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace xling {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad or inconsistent configuration (flags, config files, regression specs).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Input data that fails validation. `row` is 1-based, 0 when not row-specific.
class DataError : public Error {
public:
    explicit DataError(const std::string& what, std::size_t row = 0)
        : Error(row == 0 ? what : "row " + std::to_string(row) + ": " + what), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class TransportError : public Error {
public:
    using Error::Error;
};

// A completion came back but carried no recognizable answer.
class UnparseableResponse : public Error {
public:
    using Error::Error;
};

class RankDeficiency : public Error {
public:
    RankDeficiency(const std::string& what, std::vector<std::string> dependent)
        : Error(what), dependent_(std::move(dependent)) {}

    const std::vector<std::string>& dependent_columns() const noexcept { return dependent_; }

private:
    std::vector<std::string> dependent_;
};

class NotConverged : public Error {
public:
    using Error::Error;
};

} // namespace xling

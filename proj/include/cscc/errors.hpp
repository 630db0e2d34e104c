#ifndef CSCC_ERRORS_HPP
#define CSCC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cscc {

// Base of every error thrown by the library. `kind()` is the stable error
// name (e.g. "DegenerateCostStructure") that callers and the CLI report.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Problems with the cost-benefit economics or other configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Problems with the data being processed (files, labels, shapes).
class DataError : public Error {
public:
    using Error::Error;
};

struct DegenerateCostStructure : ConfigError {
    explicit DegenerateCostStructure(const std::string& what)
        : ConfigError("DegenerateCostStructure", what) {}
};

struct EmptyInput : DataError {
    explicit EmptyInput(const std::string& what) : DataError("EmptyInput", what) {}
};

struct IdMismatch : DataError {
    explicit IdMismatch(const std::string& what) : DataError("IdMismatch", what) {}
};

struct MissingLabels : DataError {
    explicit MissingLabels(const std::string& what) : DataError("MissingLabels", what) {}
};

struct EmptyGroup : DataError {
    explicit EmptyGroup(const std::string& what) : DataError("EmptyGroup", what) {}
};

struct DimensionMismatch : DataError {
    explicit DimensionMismatch(const std::string& what)
        : DataError("DimensionMismatch", what) {}
};

struct EmptyFile : DataError {
    explicit EmptyFile(const std::string& path) : DataError("EmptyFile", path) {}
};

struct MissingColumn : DataError {
    MissingColumn(const std::string& path, const std::string& column)
        : DataError("MissingColumn", path + ": no column '" + column + "'") {}
};

struct NonBinaryLabel : DataError {
    NonBinaryLabel(const std::string& path, std::size_t row, const std::string& column,
                   const std::string& value)
        : DataError("NonBinaryLabel", path + ": line " + std::to_string(row) + ", column '" +
                                          column + "': expected 0 or 1, got '" + value + "'"),
          row(row) {}
    std::size_t row;
};

struct UnparsableNumber : DataError {
    UnparsableNumber(const std::string& path, std::size_t row, const std::string& column,
                     const std::string& value)
        : DataError("UnparsableNumber", path + ": line " + std::to_string(row) + ", column '" +
                                            column + "': cannot parse '" + value + "'"),
          row(row),
          column(column) {}
    std::size_t row;
    std::string column;
};

struct StratumTooSmall : DataError {
    explicit StratumTooSmall(const std::string& what) : DataError("StratumTooSmall", what) {}
};

struct MissingCounterpart : DataError {
    explicit MissingCounterpart(const std::string& what)
        : DataError("MissingCounterpart", what) {}
};

struct EmptyCurve : DataError {
    explicit EmptyCurve(const std::string& what) : DataError("EmptyCurve", what) {}
};

}  // namespace cscc

#endif  // CSCC_ERRORS_HPP

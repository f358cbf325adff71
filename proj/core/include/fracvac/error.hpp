#pragma once

#include <stdexcept>
#include <string>

namespace fracvac {

/// Precondition violated by a caller-supplied value.
class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

/// Iterative method did not converge, or a solution blew up.
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Input table does not have the expected columns.
class SchemaError : public IoError {
public:
    SchemaError(const std::string& column, const std::string& what)
        : IoError(what), column_(column) {}
    const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

}  // namespace fracvac

#pragma once

#include <stdexcept>
#include <string>

namespace ridesim {

// Input data or configuration that violates a documented format or invariant.
// The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GraphError : public DataError {
public:
    using DataError::DataError;
};

class LogbookError : public DataError {
public:
    using DataError::DataError;
};

class ConfigError : public DataError {
public:
    using DataError::DataError;
};

} // namespace ridesim

#pragma once

#include <stdexcept>
#include <string>

namespace rmcpd {

// Bad input files or malformed data. CLI maps these to exit code 2.
struct data_error : std::runtime_error {
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration (parameters out of range, impossible requests).
struct config_error : std::invalid_argument {
    explicit config_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical failure (non-finite integrand, no root bracket, ...).
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rmcpd

#pragma once

#include <stdexcept>
#include <string>

namespace boxgas {

// Argument outside the mathematical domain of an operation (q <= 0, negative
// probabilities, bad indices).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The retained basis misses more probability than allowed.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, int suggested_n_max)
        : std::runtime_error(what), suggested_n_max_(suggested_n_max) {}

    int suggested_n_max() const noexcept { return suggested_n_max_; }

private:
    int suggested_n_max_;
};

class PositivityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace boxgas

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace causalbet {

// Exact computation would need more table entries than the caller allowed.
class EnumerationBudgetError : public std::runtime_error {
public:
    EnumerationBudgetError(std::size_t required, std::size_t budget)
        : std::runtime_error("enumeration needs " + std::to_string(required) +
                             " table entries, budget is " + std::to_string(budget)),
          required_(required),
          budget_(budget) {}

    std::size_t required() const noexcept { return required_; }
    std::size_t budget() const noexcept { return budget_; }

private:
    std::size_t required_;
    std::size_t budget_;
};

// Two independent internal routes to the same quantity disagreed beyond tolerance.
class InternalInconsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A strategy table was queried at a history it has no row for.
class StrategyUndefinedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Every feasible choice has expected log-growth of minus infinity.
class InfeasibleDistributionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Malformed configuration; carries the offending key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, const std::string& what)
        : std::runtime_error("config key '" + key + "': " + what), key_(key) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace causalbet

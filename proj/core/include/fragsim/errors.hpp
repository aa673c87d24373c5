#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fragsim {

/// Raised when a simulation would need more frame memory (or events) than
/// the configured budget allows. Thrown before any allocation happens.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t required, std::uint64_t budget, const std::string& what_for);

  std::uint64_t required_bytes() const noexcept { return required_; }
  std::uint64_t budget_bytes() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

/// Invalid experiment configuration. `field()` names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message);

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace fragsim

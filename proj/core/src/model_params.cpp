#include "fragsim/model_params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fragsim/errors.hpp"

namespace fragsim {

BudgetExceeded::BudgetExceeded(std::uint64_t required, std::uint64_t budget,
                               const std::string& what_for)
    : std::runtime_error(what_for + " requires " + std::to_string(required) +
                         " bytes but the budget is " + std::to_string(budget) +
                         " bytes (set FRAGSIM_BUDGET_BYTES to raise it)"),
      required_(required),
      budget_(budget) {}

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

ModelParams::ModelParams(int k, double alpha) : k_(k), alpha_(alpha) {
  if (k < 2) {
    throw std::domain_error("branching factor k must be >= 2, got " + std::to_string(k));
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::domain_error("self-similarity index alpha must be positive and finite");
  }
  gamma_ = std::log(static_cast<double>(k));
  log_inv_q_ = alpha * gamma_;
  kappa_ = 1.0 / log_inv_q_;
  q_ = std::exp(-log_inv_q_);
}

void require_unit_interval_q(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::domain_error("q must lie in (0,1)");
  }
}

}  // namespace fragsim

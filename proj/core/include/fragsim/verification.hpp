#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

/// Acceptance checks shared by `fragsim verify` and the acceptance test
/// binary. Monte Carlo checks are deterministic given the master seed; their
/// golden values assume the default seed.
namespace fragsim::verify {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr int kCriteria = 12;

struct CheckResult {
  /// 1..12, or 0 for supporting checks outside the numbered criteria.
  int criterion = 0;
  std::string name;
  double observed = 0.0;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool pass = false;
};

struct Options {
  std::uint64_t seed = kDefaultSeed;
  unsigned jobs = 1;
};

const std::vector<std::string_view>& suite_names();
bool is_suite(std::string_view name);
/// Criteria covered by a suite; throws std::invalid_argument if unknown.
std::vector<int> suite_criteria(std::string_view name);

using Sink = std::function<void(const CheckResult&)>;

/// Runs criteria one at a time, keeping Monte Carlo sweeps that several
/// criteria share.
class Session {
 public:
  explicit Session(const Options& options);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  /// Runs the checks of one criterion; every result is also passed to `sink`.
  std::vector<CheckResult> run(int criterion, const Sink& sink = {});

 private:
  class Context;
  std::unique_ptr<Context> context_;
};

/// Runs a named suite. Shared Monte Carlo sweeps are computed once.
std::vector<CheckResult> run_suite(std::string_view suite, const Options& options,
                                   const Sink& sink = {});

std::string format(const CheckResult& result);

}  // namespace fragsim::verify

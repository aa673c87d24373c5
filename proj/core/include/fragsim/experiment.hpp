#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "fragsim/csv.hpp"
#include "fragsim/model_params.hpp"
#include "fragsim/simulator.hpp"

namespace fragsim {

enum class Engine { brw, gillespie, spine };

std::string_view engine_name(Engine engine);
/// Throws ConfigError("engine", ...) for an unknown name.
Engine parse_engine(std::string_view name);

struct ExperimentSpec {
  int k = 2;
  double alpha = 1.0;
  Engine engine = Engine::brw;
  /// brw and spine use n_max; gillespie uses t_end.
  std::optional<int> n_max;
  std::optional<double> t_end;
  std::uint64_t replicas = 1;
  std::uint64_t master_seed = 0;
  double floor = kDefaultPointFloor;
  std::string output_path;
  unsigned jobs = 1;

  ModelParams params() const { return ModelParams(k, alpha); }
};

/// Throws ConfigError naming the first offending field.
void validate(const ExperimentSpec& spec);

std::string to_json(const ExperimentSpec& spec);
/// Inverse of to_json; missing optional fields keep their defaults.
ExperimentSpec spec_from_json(const std::string& text);

/// Spec echoed in a simulate sidecar; throws ConfigError if `text` is not one.
ExperimentSpec spec_from_sidecar(const std::string& text);

struct ResultRecord {
  ExperimentSpec spec;
  /// brw: replica,n,k_min,k_max,tau; gillespie: replica,event_time,m_t,M_t;
  /// spine: replica,i,split_time.
  Table rows;
  /// brw only: replica,n,j for every J(v) >= floor.
  std::optional<Table> points;
  double wall_clock_seconds = 0.0;
  std::string version;
};

/// Runs the engine selected by `spec`. Replicas are spread over spec.jobs
/// threads; rows are always in replica order.
ResultRecord run(const ExperimentSpec& spec);

inline std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  return csv.string() + ".json";
}
inline std::filesystem::path points_path(const std::filesystem::path& csv) {
  return csv.string() + ".points.csv";
}

/// Writes the CSV (plus points file for brw) and the JSON sidecar.
void persist(const ResultRecord& record);

/// One-line human summary of a finished run.
std::string summary_line(const ResultRecord& record);

/// Tail table rows q,n,t,survival,abs_error for t = lo, lo+step, ... <= hi.
Table tails_table(double q, int n, double lo, double hi, double step);

/// Parses "LO:HI:STEP"; throws ConfigError("t-grid", ...).
struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
};
Grid parse_grid(std::string_view text);

std::string version_string();
std::string git_describe();

/// Writes the tails CSV and its sidecar.
void persist_tails(const std::filesystem::path& path, double q, int n, const Grid& grid,
                   const Table& table, double wall_clock_seconds);

}  // namespace fragsim

#include "fragsim/plotdata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "fragsim/analytic.hpp"
#include "fragsim/errors.hpp"
#include "fragsim/predictors.hpp"

namespace fragsim {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_engine(const ExperimentSpec& spec, Engine wanted, std::string_view kind) {
  if (spec.engine != wanted) {
    throw ConfigError("kind", std::string(kind) + " needs a " +
                                  std::string(engine_name(wanted)) + " record, got " +
                                  std::string(engine_name(spec.engine)));
  }
}

Table staircase(const ExperimentSpec& spec, const Table& rows, bool smallest) {
  const ModelParams params = spec.params();
  Table out;
  out.columns = {"replica", "t", "value", "lo_int", "hi_int"};
  if (rows.rows.empty()) {
    return out;
  }
  const auto replica = rows.column("replica");
  const auto time = rows.column("event_time");
  const auto value = rows.column(smallest ? "M_t" : "m_t");
  for (const auto& row : rows.rows) {
    const double t = row[time];
    double lo = kNaN;
    double hi = kNaN;
    if (t > std::numbers::e) {
      const auto window =
          smallest ? predictors::M_window(params, t) : predictors::m_window(params, t);
      lo = window.lo_int;
      hi = window.hi_int;
    }
    out.rows.push_back({row[replica], t, row[value], lo, hi});
  }
  return out;
}

Table intensity(const ExperimentSpec& spec, const Table* points) {
  Table out;
  out.columns = {"n", "s", "empirical_intensity", "limit_intensity"};
  if (points == nullptr || points->rows.empty()) {
    return out;
  }
  const int n = *spec.n_max;
  const auto n_col = points->column("n");
  const auto j_col = points->column("j");
  double top = spec.floor;
  std::map<long, std::uint64_t> bins;
  for (const auto& row : points->rows) {
    if (static_cast<int>(row[n_col]) != n) {
      continue;
    }
    const double j = row[j_col];
    bins[static_cast<long>(std::floor(j - spec.floor))]++;
    top = std::max(top, j);
  }
  const double euler = analytic::phi_inf(spec.params().q());
  const double replicas = static_cast<double>(spec.replicas);
  const long last = static_cast<long>(std::floor(top - spec.floor));
  for (long b = 0; b <= last; ++b) {
    const double s = spec.floor + static_cast<double>(b) + 0.5;
    const auto it = bins.find(b);
    const double count = it == bins.end() ? 0.0 : static_cast<double>(it->second);
    out.rows.push_back({static_cast<double>(n), s, count / replicas, std::exp(-s) / euler});
  }
  return out;
}

Table tau_cdf(const ExperimentSpec& spec, const Table& rows) {
  Table out;
  out.columns = {"n", "tau", "empirical_cdf", "limit_cdf"};
  if (rows.rows.empty()) {
    return out;
  }
  const double q = spec.params().q();
  const auto n_col = rows.column("n");
  const auto tau_col = rows.column("tau");
  std::map<int, std::vector<double>> by_n;
  for (const auto& row : rows.rows) {
    by_n[static_cast<int>(row[n_col])].push_back(row[tau_col]);
  }
  for (auto& [n, taus] : by_n) {
    std::sort(taus.begin(), taus.end());
    const double size = static_cast<double>(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
      out.rows.push_back({static_cast<double>(n), taus[i], static_cast<double>(i + 1) / size,
                          analytic::gumbel_limit_cdf(q, taus[i])});
    }
  }
  return out;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace

const std::vector<std::string_view>& plot_kind_names() {
  static const std::vector<std::string_view> names = {"m-staircase", "M-staircase", "intensity",
                                                      "tau-cdf"};
  return names;
}

PlotKind parse_plot_kind(std::string_view name) {
  const auto& names = plot_kind_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) {
      return static_cast<PlotKind>(i);
    }
  }
  throw ConfigError("kind", "unknown plot kind '" + std::string(name) + "'");
}

Table plot_table(const ExperimentSpec& spec, const Table& rows, const Table* points,
                 PlotKind kind) {
  const auto name = plot_kind_names()[static_cast<std::size_t>(kind)];
  switch (kind) {
    case PlotKind::m_staircase:
      require_engine(spec, Engine::gillespie, name);
      return staircase(spec, rows, false);
    case PlotKind::M_staircase:
      require_engine(spec, Engine::gillespie, name);
      return staircase(spec, rows, true);
    case PlotKind::intensity:
      require_engine(spec, Engine::brw, name);
      return intensity(spec, points);
    case PlotKind::tau_cdf:
      require_engine(spec, Engine::brw, name);
      return tau_cdf(spec, rows);
  }
  throw ConfigError("kind", "unhandled plot kind");
}

void emit_plotdata(const std::filesystem::path& in, PlotKind kind,
                   const std::filesystem::path& out) {
  const std::string meta = slurp(sidecar_path(in));
  const ExperimentSpec spec = spec_from_sidecar(meta);
  const Table rows = read_csv(in);
  std::optional<Table> points;
  if (kind == PlotKind::intensity && std::filesystem::exists(points_path(in))) {
    points = read_csv(points_path(in));
  }
  write_csv(out, plot_table(spec, rows, points ? &*points : nullptr, kind));
}

}  // namespace fragsim

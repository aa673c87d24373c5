#include "fragsim/experiment.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

#include "fragsim/analytic.hpp"
#include "fragsim/errors.hpp"
#include "fragsim/parallel.hpp"

namespace fragsim {

using nlohmann::json;

std::string_view engine_name(Engine engine) {
  switch (engine) {
    case Engine::brw:
      return "brw";
    case Engine::gillespie:
      return "gillespie";
    case Engine::spine:
      return "spine";
  }
  return "unknown";
}

Engine parse_engine(std::string_view name) {
  if (name == "brw") return Engine::brw;
  if (name == "gillespie") return Engine::gillespie;
  if (name == "spine") return Engine::spine;
  throw ConfigError("engine", "expected brw, gillespie or spine, got '" + std::string(name) + "'");
}

void validate(const ExperimentSpec& spec) {
  if (spec.k < 2) {
    throw ConfigError("k", "must be an integer >= 2");
  }
  if (!(spec.alpha > 0.0) || !std::isfinite(spec.alpha)) {
    throw ConfigError("alpha", "must be a finite positive number");
  }
  if (spec.engine == Engine::gillespie) {
    if (spec.n_max) {
      throw ConfigError("n_max", "the gillespie engine takes t_end, not n_max");
    }
    if (!spec.t_end || !(*spec.t_end > 0.0) || !std::isfinite(*spec.t_end)) {
      throw ConfigError("t_end", "gillespie needs a finite positive t_end");
    }
  } else {
    if (spec.t_end) {
      throw ConfigError("t_end", std::string(engine_name(spec.engine)) +
                                     " takes n_max, not t_end");
    }
    if (!spec.n_max || *spec.n_max < 0) {
      throw ConfigError("n_max", std::string(engine_name(spec.engine)) +
                                     " needs n_max >= 0");
    }
  }
  if (spec.replicas < 1) {
    throw ConfigError("replicas", "must be >= 1");
  }
  if (spec.jobs < 1) {
    throw ConfigError("jobs", "must be >= 1");
  }
  if (!std::isfinite(spec.floor)) {
    throw ConfigError("floor", "must be finite");
  }
}

namespace {

json spec_json(const ExperimentSpec& spec) {
  json j;
  j["k"] = spec.k;
  j["alpha"] = spec.alpha;
  j["engine"] = std::string(engine_name(spec.engine));
  j["n_max"] = spec.n_max ? json(*spec.n_max) : json(nullptr);
  j["t_end"] = spec.t_end ? json(*spec.t_end) : json(nullptr);
  j["replicas"] = spec.replicas;
  j["master_seed"] = spec.master_seed;
  j["floor"] = spec.floor;
  j["output_path"] = spec.output_path;
  j["jobs"] = spec.jobs;
  return j;
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key) || j[key].is_null()) {
    return;
  }
  try {
    out = j[key].get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, e.what());
  }
}

json sidecar(json payload, std::uint64_t rows, double seconds) {
  payload["schema_version"] = kSchemaVersion;
  payload["rows"] = rows;
  payload["version"] = version_string();
  payload["git_describe"] = git_describe();
  payload["wall_clock_seconds"] = seconds;
  return payload;
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

unsigned concurrent_workers(const ExperimentSpec& spec) {
  return static_cast<unsigned>(std::min<std::uint64_t>(spec.jobs, spec.replicas));
}

void run_brw(const ExperimentSpec& spec, ResultRecord& record) {
  const ModelParams params = spec.params();
  const int n_max = *spec.n_max;
  require_frame_budget(params, n_max, memory_budget_bytes() / concurrent_workers(spec));
  const auto sweeps = run_replicas(spec.replicas, spec.jobs, [&](std::uint64_t r) {
    return brw_sweep(params, n_max, SeedSpec{spec.master_seed, r}, spec.floor);
  });
  record.rows.columns = {"replica", "n", "k_min", "k_max", "tau"};
  Table points;
  points.columns = {"replica", "n", "j"};
  for (std::uint64_t r = 0; r < sweeps.size(); ++r) {
    const double replica = static_cast<double>(r);
    for (const auto& g : sweeps[r]) {
      record.rows.rows.push_back({replica, static_cast<double>(g.n), g.k_min, g.k_max, g.tau});
      for (const double j : g.points_above) {
        points.rows.push_back({replica, static_cast<double>(g.n), j});
      }
    }
  }
  record.points = std::move(points);
}

void run_gillespie(const ExperimentSpec& spec, ResultRecord& record) {
  const ModelParams params = spec.params();
  const double t_end = *spec.t_end;
  const std::uint64_t budget = memory_budget_bytes() / concurrent_workers(spec);
  const auto trajectories = run_replicas(spec.replicas, spec.jobs, [&](std::uint64_t r) {
    return gillespie_run(params, t_end, SeedSpec{spec.master_seed, r}, budget).jumps;
  });
  record.rows.columns = {"replica", "event_time", "m_t", "M_t"};
  for (std::uint64_t r = 0; r < trajectories.size(); ++r) {
    for (const auto& jump : trajectories[r]) {
      record.rows.rows.push_back({static_cast<double>(r), jump.time,
                                  static_cast<double>(jump.m), static_cast<double>(jump.M)});
    }
  }
}

void run_spine(const ExperimentSpec& spec, ResultRecord& record) {
  const ModelParams params = spec.params();
  const int n_max = *spec.n_max;
  const auto paths = run_replicas(spec.replicas, spec.jobs, [&](std::uint64_t r) {
    return spine_sample(params, n_max, SeedSpec{spec.master_seed, r});
  });
  record.rows.columns = {"replica", "i", "split_time"};
  for (std::uint64_t r = 0; r < paths.size(); ++r) {
    const auto& times = paths[r].split_times;
    for (std::size_t i = 0; i < times.size(); ++i) {
      record.rows.rows.push_back({static_cast<double>(r), static_cast<double>(i), times[i]});
    }
  }
}

}  // namespace

std::string to_json(const ExperimentSpec& spec) { return spec_json(spec).dump(2); }

ExperimentSpec spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("json", e.what());
  }
  ExperimentSpec spec;
  read_field(j, "k", spec.k);
  read_field(j, "alpha", spec.alpha);
  std::string engine = std::string(engine_name(spec.engine));
  read_field(j, "engine", engine);
  spec.engine = parse_engine(engine);
  if (j.contains("n_max") && !j["n_max"].is_null()) {
    int n = 0;
    read_field(j, "n_max", n);
    spec.n_max = n;
  }
  if (j.contains("t_end") && !j["t_end"].is_null()) {
    double t = 0.0;
    read_field(j, "t_end", t);
    spec.t_end = t;
  }
  read_field(j, "replicas", spec.replicas);
  read_field(j, "master_seed", spec.master_seed);
  read_field(j, "floor", spec.floor);
  read_field(j, "output_path", spec.output_path);
  read_field(j, "jobs", spec.jobs);
  return spec;
}

ExperimentSpec spec_from_sidecar(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("in", std::string("sidecar is not JSON: ") + e.what());
  }
  if (j.value("command", "") != "simulate" || !j.contains("spec")) {
    throw ConfigError("in", "sidecar does not describe a simulate run");
  }
  return spec_from_json(j["spec"].dump());
}

ResultRecord run(const ExperimentSpec& spec) {
  validate(spec);
  const auto start = std::chrono::steady_clock::now();
  ResultRecord record;
  record.spec = spec;
  record.version = version_string();
  switch (spec.engine) {
    case Engine::brw:
      run_brw(spec, record);
      break;
    case Engine::gillespie:
      run_gillespie(spec, record);
      break;
    case Engine::spine:
      run_spine(spec, record);
      break;
  }
  record.wall_clock_seconds = elapsed_since(start);
  return record;
}

void persist(const ResultRecord& record) {
  if (record.spec.output_path.empty()) {
    throw ConfigError("out", "an output path is required");
  }
  const std::filesystem::path out = record.spec.output_path;
  write_csv(out, record.rows);
  json meta;
  meta["command"] = "simulate";
  meta["spec"] = spec_json(record.spec);
  meta["master_seed"] = record.spec.master_seed;
  if (record.points) {
    write_csv(points_path(out), *record.points);
    meta["points_file"] = points_path(out).filename().string();
    meta["points_rows"] = record.points->rows.size();
  }
  write_text(sidecar_path(out),
             sidecar(meta, record.rows.rows.size(), record.wall_clock_seconds).dump(2) + "\n");
}

std::string summary_line(const ResultRecord& record) {
  std::ostringstream line;
  line << engine_name(record.spec.engine) << ": k=" << record.spec.k
       << " alpha=" << format_double(record.spec.alpha) << " replicas=" << record.spec.replicas
       << " seed=" << record.spec.master_seed << " rows=" << record.rows.rows.size();
  if (record.points) {
    line << " points=" << record.points->rows.size();
  }
  line << " wall=" << format_double(std::round(record.wall_clock_seconds * 1000.0) / 1000.0)
       << "s";
  if (!record.spec.output_path.empty()) {
    line << " -> " << record.spec.output_path;
  }
  return line.str();
}

Table tails_table(double q, int n, double lo, double hi, double step) {
  require_unit_interval_q(q);
  if (n < 0) {
    throw ConfigError("n", "must be >= 0");
  }
  if (!(step > 0.0) || !(hi >= lo) || lo < 0.0) {
    throw ConfigError("t-grid", "need 0 <= LO <= HI and STEP > 0");
  }
  Table table;
  table.columns = {"q", "n", "t", "survival", "abs_error"};
  const auto count = static_cast<std::uint64_t>(std::floor((hi - lo) / step * (1.0 + 1e-12))) + 1;
  for (std::uint64_t i = 0; i < count; ++i) {
    const double t = lo + static_cast<double>(i) * step;
    const auto eval = analytic::survival_Kn(q, n, t);
    table.rows.push_back({q, static_cast<double>(n), t, eval.value, eval.abs_error});
  }
  return table;
}

Grid parse_grid(std::string_view text) {
  Grid grid;
  double* fields[] = {&grid.lo, &grid.hi, &grid.step};
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const auto colon = text.find(':', start);
    if ((i < 2) == (colon == std::string_view::npos)) {
      throw ConfigError("t-grid", "expected LO:HI:STEP, got '" + std::string(text) + "'");
    }
    const auto cell = text.substr(start, colon == std::string_view::npos ? text.size() - start
                                                                        : colon - start);
    const auto* end = cell.data() + cell.size();
    const auto parsed = std::from_chars(cell.data(), end, *fields[i]);
    if (parsed.ec != std::errc() || parsed.ptr != end) {
      throw ConfigError("t-grid", "bad number '" + std::string(cell) + "'");
    }
    start = colon + 1;
  }
  if (!(grid.step > 0.0) || !(grid.hi >= grid.lo)) {
    throw ConfigError("t-grid", "need LO <= HI and STEP > 0");
  }
  return grid;
}

void persist_tails(const std::filesystem::path& path, double q, int n, const Grid& grid,
                   const Table& table, double wall_clock_seconds) {
  write_csv(path, table);
  json meta;
  meta["command"] = "tails";
  meta["q"] = q;
  meta["n"] = n;
  meta["t_grid"] = {{"lo", grid.lo}, {"hi", grid.hi}, {"step", grid.step}};
  write_text(sidecar_path(path),
             sidecar(meta, table.rows.size(), wall_clock_seconds).dump(2) + "\n");
}

std::string version_string() { return FRAGSIM_VERSION_STRING; }
std::string git_describe() { return FRAGSIM_GIT_DESCRIBE; }

}  // namespace fragsim

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "fragsim/errors.hpp"
#include "fragsim/experiment.hpp"
#include "fragsim/plotdata.hpp"
#include "fragsim/verification.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct SimulateArgs {
  std::string engine;
  int k = 2;
  double alpha = 1.0;
  std::optional<int> n_max;
  std::optional<double> t_end;
  std::uint64_t replicas = 1;
  std::uint64_t seed = 0;
  double floor = fragsim::kDefaultPointFloor;
  std::string out;
  unsigned jobs = 1;
};

struct TailsArgs {
  double q = 0.5;
  int n = 0;
  std::string grid;
  std::string out;
};

struct VerifyArgs {
  std::string suite;
  std::uint64_t seed = fragsim::verify::kDefaultSeed;
  unsigned jobs = 1;
};

struct PlotArgs {
  std::string in;
  std::string kind;
  std::string out;
};

int do_simulate(const SimulateArgs& args) {
  fragsim::ExperimentSpec spec;
  spec.engine = fragsim::parse_engine(args.engine);
  spec.k = args.k;
  spec.alpha = args.alpha;
  spec.n_max = args.n_max;
  spec.t_end = args.t_end;
  spec.replicas = args.replicas;
  spec.master_seed = args.seed;
  spec.floor = args.floor;
  spec.output_path = args.out;
  spec.jobs = args.jobs;
  const auto record = fragsim::run(spec);
  fragsim::persist(record);
  std::cout << fragsim::summary_line(record) << '\n';
  return kExitOk;
}

int do_tails(const TailsArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  const auto grid = fragsim::parse_grid(args.grid);
  const auto table = fragsim::tails_table(args.q, args.n, grid.lo, grid.hi, grid.step);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  fragsim::persist_tails(args.out, args.q, args.n, grid, table, seconds);
  std::cout << "tails: q=" << fragsim::format_double(args.q) << " n=" << args.n
            << " rows=" << table.rows.size() << " -> " << args.out << '\n';
  return kExitOk;
}

int do_verify(const VerifyArgs& args) {
  fragsim::verify::Options options;
  options.seed = args.seed;
  options.jobs = args.jobs;
  std::size_t failed = 0;
  const auto results = fragsim::verify::run_suite(
      args.suite, options, [&](const fragsim::verify::CheckResult& r) {
        std::cout << fragsim::verify::format(r) << std::endl;
        failed += r.pass ? 0 : 1;
      });
  std::cout << "verify " << args.suite << ": " << results.size() << " checks, " << failed
            << " failed\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

int do_plotdata(const PlotArgs& args) {
  fragsim::emit_plotdata(args.in, fragsim::parse_plot_kind(args.kind), args.out);
  std::cout << "plotdata: " << args.kind << " -> " << args.out << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification harness for k-regular self-similar fragmentation"};
  app.set_version_flag("--version", fragsim::version_string() + " (" + fragsim::git_describe() + ")");
  app.set_config("--config", "", "INI file; [simulate], [tails], ... sections, flags override");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run replicas of one engine and write CSV");
  simulate->add_option("engine", sim.engine, "brw | gillespie | spine")
      ->required()
      ->check(CLI::IsMember({"brw", "gillespie", "spine"}));
  simulate->add_option("--k", sim.k, "Pieces per split")->required();
  simulate->add_option("--alpha", sim.alpha, "Self-similarity index")->required();
  auto* n_max = simulate->add_option("--n-max", sim.n_max, "Last generation (brw, spine)");
  auto* t_end = simulate->add_option("--t-end", sim.t_end, "Horizon (gillespie)");
  n_max->excludes(t_end);
  simulate->add_option("--replicas", sim.replicas, "Independent replicas")->required();
  simulate->add_option("--seed", sim.seed, "Master seed")->required();
  simulate->add_option("--floor", sim.floor, "Keep J(v) >= floor in the points file")
      ->capture_default_str();
  simulate->add_option("--out", sim.out, "Output CSV")->required();
  simulate->add_option("--jobs", sim.jobs, "Worker threads")->capture_default_str();

  TailsArgs tails;
  auto* tails_cmd = app.add_subcommand("tails", "Tabulate P(K_n > t) on a grid");
  tails_cmd->add_option("--q", tails.q, "Ratio q in (0,1)")->required();
  tails_cmd->add_option("--n", tails.n, "Generation")->required()->check(CLI::NonNegativeNumber);
  tails_cmd->add_option("--t-grid", tails.grid, "LO:HI:STEP")->required();
  tails_cmd->add_option("--out", tails.out, "Output CSV")->required();

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Run an acceptance suite");
  std::vector<std::string> suites;
  for (const auto name : fragsim::verify::suite_names()) {
    suites.emplace_back(name);
  }
  verify->add_option("--suite", ver.suite, "tails | leftail | extremes | pointprocess | coverage | all")
      ->required()
      ->check(CLI::IsMember(suites));
  verify->add_option("--seed", ver.seed, "Master seed (goldens assume the default)")
      ->capture_default_str();
  verify->add_option("--jobs", ver.jobs, "Worker threads")->capture_default_str();

  PlotArgs plot;
  auto* plotdata = app.add_subcommand("plotdata", "Derive a plotting table from a simulate CSV");
  plotdata->add_option("--in", plot.in, "simulate CSV (sidecar must sit next to it)")
      ->required()
      ->check(CLI::ExistingFile);
  std::vector<std::string> kinds;
  for (const auto name : fragsim::plot_kind_names()) {
    kinds.emplace_back(name);
  }
  plotdata->add_option("--kind", plot.kind, "m-staircase | M-staircase | intensity | tau-cdf")
      ->required()
      ->check(CLI::IsMember(kinds));
  plotdata->add_option("--out", plot.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return do_simulate(sim);
    if (*tails_cmd) return do_tails(tails);
    if (*verify) return do_verify(ver);
    if (*plotdata) return do_plotdata(plot);
  } catch (const fragsim::ConfigError& e) {
    std::cerr << "config error [" << e.field() << "]: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fragsim::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

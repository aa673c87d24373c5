#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "fragsim/analytic.hpp"
#include "fragsim/csv.hpp"
#include "fragsim/errors.hpp"
#include "fragsim/experiment.hpp"
#include "fragsim/plotdata.hpp"
#include "fragsim/rng.hpp"
#include "fragsim/verification.hpp"

using namespace fragsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "fragsim_unit";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentSpec brw_spec() {
  ExperimentSpec spec;
  spec.engine = Engine::brw;
  spec.n_max = 6;
  spec.replicas = 5;
  spec.master_seed = 123;
  spec.floor = -3.0;
  return spec;
}

std::string field_of(const ExperimentSpec& spec) {
  try {
    validate(spec);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(3.0), "3");
  Rng rng(SeedSpec{1, 1});
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.exponential() * 1e-3;
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

TEST(Csv, WriteReadRoundTrip) {
  Table t;
  t.columns = {"a", "b"};
  t.rows = {{1.0, 0.1}, {-2.5, 1e-300}};
  const auto path = scratch("roundtrip.csv");
  write_csv(path, t);
  EXPECT_EQ(slurp(path), "schema_version,a,b\n1,1,0.1\n1,-2.5,1e-300\n");
  const auto back = read_csv(path);
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.column("b"), 1u);
  EXPECT_THROW(back.column("zzz"), std::out_of_range);
}

TEST(Csv, RejectsMalformedFiles) {
  const auto path = scratch("bad.csv");
  write_text(path, "schema_version,a\n1,abc\n");
  EXPECT_THROW(read_csv(path), std::runtime_error);
  write_text(path, "schema_version,a\n2,1\n");
  EXPECT_THROW(read_csv(path), std::runtime_error);
  write_text(path, "a,b\n");
  EXPECT_THROW(read_csv(path), std::runtime_error);
}

TEST(Spec, ValidationNamesTheField) {
  auto spec = brw_spec();
  EXPECT_EQ(field_of(spec), "");
  spec.k = 1;
  EXPECT_EQ(field_of(spec), "k");
  spec = brw_spec();
  spec.alpha = -1;
  EXPECT_EQ(field_of(spec), "alpha");
  spec = brw_spec();
  spec.t_end = 10.0;
  EXPECT_EQ(field_of(spec), "t_end");
  spec = brw_spec();
  spec.n_max.reset();
  EXPECT_EQ(field_of(spec), "n_max");
  spec = brw_spec();
  spec.replicas = 0;
  EXPECT_EQ(field_of(spec), "replicas");
  spec = brw_spec();
  spec.engine = Engine::gillespie;
  EXPECT_EQ(field_of(spec), "n_max");
  spec.n_max.reset();
  EXPECT_EQ(field_of(spec), "t_end");
  spec.t_end = 50.0;
  EXPECT_EQ(field_of(spec), "");
  EXPECT_THROW(parse_engine("tree"), ConfigError);
}

TEST(Spec, JsonRoundTrip) {
  auto spec = brw_spec();
  spec.master_seed = 0xFFFFFFFFFFFFFFFFULL;
  spec.output_path = "x/y.csv";
  spec.jobs = 4;
  const auto back = spec_from_json(to_json(spec));
  EXPECT_EQ(back.k, spec.k);
  EXPECT_EQ(back.alpha, spec.alpha);
  EXPECT_EQ(back.engine, spec.engine);
  EXPECT_EQ(back.n_max, spec.n_max);
  EXPECT_EQ(back.t_end, spec.t_end);
  EXPECT_EQ(back.replicas, spec.replicas);
  EXPECT_EQ(back.master_seed, spec.master_seed);
  EXPECT_EQ(back.floor, spec.floor);
  EXPECT_EQ(back.output_path, spec.output_path);
  EXPECT_EQ(back.jobs, spec.jobs);
  EXPECT_THROW(spec_from_json("{"), ConfigError);
  EXPECT_THROW(spec_from_json(R"({"k": "two"})"), ConfigError);
}

TEST(Run, SingleRootDraw) {
  ExperimentSpec spec;
  spec.engine = Engine::brw;
  spec.n_max = 0;
  spec.replicas = 1;
  spec.master_seed = 5;
  const auto record = run(spec);
  ASSERT_EQ(record.rows.rows.size(), 1u);
  Rng rng(SeedSpec{5, 0});
  const double draw = rng.exponential();
  const auto& row = record.rows.rows[0];
  EXPECT_EQ(row[record.rows.column("k_min")], draw);
  EXPECT_EQ(row[record.rows.column("k_max")], draw);
  EXPECT_EQ(row[record.rows.column("tau")], draw);
}

TEST(Run, ByteIdenticalAcrossJobs) {
  for (const Engine engine : {Engine::brw, Engine::gillespie, Engine::spine}) {
    ExperimentSpec spec;
    spec.engine = engine;
    if (engine == Engine::gillespie) {
      spec.t_end = 80.0;
    } else {
      spec.n_max = 7;
    }
    spec.replicas = 9;
    spec.master_seed = 31;
    spec.jobs = 1;
    const auto a = format_csv(run(spec).rows);
    spec.jobs = 4;
    const auto b = format_csv(run(spec).rows);
    EXPECT_EQ(a, b) << engine_name(engine);
  }
}

TEST(Persist, WritesCsvPointsAndSidecar) {
  auto spec = brw_spec();
  spec.output_path = scratch("persist.csv").string();
  const auto record = run(spec);
  persist(record);
  const auto rows = read_csv(spec.output_path);
  EXPECT_EQ(rows.columns, (std::vector<std::string>{"replica", "n", "k_min", "k_max", "tau"}));
  EXPECT_EQ(rows.rows.size(), 5u * 7u);
  const auto points = read_csv(points_path(spec.output_path));
  EXPECT_EQ(points.columns, (std::vector<std::string>{"replica", "n", "j"}));
  const auto back = spec_from_sidecar(slurp(sidecar_path(spec.output_path)));
  EXPECT_EQ(back.master_seed, spec.master_seed);
  EXPECT_EQ(back.n_max, spec.n_max);
  EXPECT_NE(summary_line(record).find("rows=35"), std::string::npos);
}

TEST(Tails, GridAndTable) {
  const auto grid = parse_grid("0:2:0.5");
  EXPECT_EQ(grid.lo, 0.0);
  EXPECT_EQ(grid.hi, 2.0);
  EXPECT_EQ(grid.step, 0.5);
  EXPECT_THROW(parse_grid("0:2"), ConfigError);
  EXPECT_THROW(parse_grid("0:x:1"), ConfigError);
  EXPECT_THROW(parse_grid("2:0:1"), ConfigError);
  const auto table = tails_table(0.5, 3, 0.0, 2.0, 0.5);
  ASSERT_EQ(table.rows.size(), 5u);
  EXPECT_EQ(table.rows[0][table.column("survival")], 1.0);
  EXPECT_EQ(table.rows[4][table.column("survival")], analytic::survival_Kn(0.5, 3, 2.0).value);
}

TEST(Plotdata, KindEngineMismatch) {
  auto spec = brw_spec();
  const auto record = run(spec);
  EXPECT_THROW(plot_table(spec, record.rows, nullptr, PlotKind::m_staircase), ConfigError);
  EXPECT_THROW(parse_plot_kind("histogram"), ConfigError);
  const auto cdf = plot_table(spec, record.rows, nullptr, PlotKind::tau_cdf);
  EXPECT_EQ(cdf.rows.size(), record.rows.rows.size());
}

TEST(Plotdata, EmptyRecordGivesHeaderOnly) {
  auto spec = brw_spec();
  Table empty;
  empty.columns = {"replica", "n", "k_min", "k_max", "tau"};
  const auto out = plot_table(spec, empty, nullptr, PlotKind::tau_cdf);
  EXPECT_TRUE(out.rows.empty());
  EXPECT_EQ(format_csv(out), "schema_version,n,tau,empirical_cdf,limit_cdf\n");
}

TEST(Plotdata, StaircaseAndIntensityFromFiles) {
  ExperimentSpec spec;
  spec.engine = Engine::gillespie;
  spec.t_end = 300.0;
  spec.replicas = 2;
  spec.output_path = scratch("gill.csv").string();
  persist(run(spec));
  const auto out = scratch("gill_M.csv");
  emit_plotdata(spec.output_path, PlotKind::M_staircase, out);
  const auto table = read_csv(out);
  EXPECT_EQ(table.columns,
            (std::vector<std::string>{"replica", "t", "value", "lo_int", "hi_int"}));
  for (const auto& row : table.rows) {
    EXPECT_EQ(std::isnan(row[3]), row[1] <= std::exp(1.0));
  }

  auto brw = brw_spec();
  brw.replicas = 40;
  brw.output_path = scratch("brw.csv").string();
  persist(run(brw));
  const auto dens = scratch("brw_intensity.csv");
  emit_plotdata(brw.output_path, PlotKind::intensity, dens);
  const auto intensity = read_csv(dens);
  ASSERT_FALSE(intensity.rows.empty());
  EXPECT_EQ(intensity.rows[0][intensity.column("s")], -2.5);
}

TEST(Verify, SuiteNames) {
  EXPECT_TRUE(verify::is_suite("tails"));
  EXPECT_FALSE(verify::is_suite("nonsense"));
  EXPECT_THROW(verify::suite_criteria("nonsense"), std::invalid_argument);
  EXPECT_EQ(verify::suite_criteria("all").size(), 12u);
}

TEST(Verify, LeftTailSuitePasses) {
  const auto results = verify::run_suite("leftail", verify::Options{});
  ASSERT_FALSE(results.empty());
  for (const auto& r : results) {
    EXPECT_TRUE(r.pass) << verify::format(r);
  }
}

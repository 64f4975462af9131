#include <filesystem>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "ranplan/config.hpp"
#include "ranplan/error.hpp"
#include "ranplan/harness.hpp"

using namespace ranplan;

namespace {

// Two SBSs on a 37-grid disk: small enough for quick end-to-end runs.
ScenarioConfig small_config(std::size_t windows) {
  return parse_config(R"({
    "layout": {"grid_diameter_km": 0.1, "extent_layers": 3, "max_sc_layers": 2,
               "mbs_sc_radius_km": 1.5, "sbs_max_power_w": 1,
               "sbs": [{"coord": [2, 0]}, {"coord": [-2, 1]}]},
    "slices": {"sinr_min_db": [7, 11], "rb_per_bit": [1e-5, 1e-5], "ee_weight": [1, 1]},
    "radio": {"rb_budget": 100000},
    "traffic": {"ppp_rate_per_grid": 0.5},
    "learning": {"hidden": [32], "latent": 8, "train_instances": 20, "epochs": 5},
    "run": {"intervals": 3, "windows": )" + std::to_string(windows) +
                      R"(, "seed": 3, "record_wall_time": false}
  })");
}

double mean_objective(const std::vector<WindowRow>& rows) {
  double s = 0.0;
  for (const auto& r : rows) s += r.objective;
  return s / static_cast<double>(rows.size());
}

std::string to_csv(const std::vector<WindowRow>& rows) {
  std::ostringstream os;
  write_rows(os, rows, ExportFormat::csv);
  return os.str();
}

}  // namespace

TEST(Harness, MacroOnlySingleWindow) {
  auto cfg = small_config(1);
  cfg.layout.sbs.clear();
  auto out = run_windows(cfg);
  ASSERT_EQ(out.rows.size(), 1u);
  EXPECT_TRUE(out.rows[0].feasible);
  EXPECT_EQ(out.rows[0].evaluations, 1u);
  EXPECT_FALSE(out.store.has_value());
}

TEST(Harness, RunsAreByteIdentical) {
  auto cfg = small_config(3);
  EXPECT_EQ(to_csv(run_windows(cfg).rows), to_csv(run_windows(cfg).rows));
  cfg.run.solver = Solver::ulscs;
  cfg.run.warmup_windows = 3;
  EXPECT_EQ(to_csv(run_windows(cfg).rows), to_csv(run_windows(cfg).rows));
}

TEST(Harness, SeedsDifferPerWindow) {
  EXPECT_NE(traffic_seed(1, 0), traffic_seed(1, 1));
  EXPECT_NE(traffic_seed(1, 0), search_seed(1, 0));
  EXPECT_NE(traffic_seed(1, 0), traffic_seed(2, 0));
}

TEST(Harness, SliceAwareGridBeatsCellBaseline) {
  auto sz = small_config(20);
  auto cz = sz;
  cz.run.scheme = Scheme::cz_cell;
  auto a = run_windows(sz).rows;
  auto b = run_windows(cz).rows;
  for (const auto& r : a) EXPECT_TRUE(r.feasible);
  EXPECT_GE(mean_objective(a), mean_objective(b));
}

TEST(Harness, RowsPassRevalidation) {
  auto cfg = small_config(4);
  for (auto scheme : {Scheme::sz_grid, Scheme::cz_grid, Scheme::cz_cell}) {
    cfg.run.scheme = scheme;
    for (const auto& r : run_windows(cfg).rows)
      EXPECT_EQ(r.infeasibility.find("revalidation"), std::string::npos) << r.infeasibility;
  }
}

TEST(Harness, FixedSolverShrinksToFit) {
  auto cfg = small_config(1);
  cfg.run.solver = Solver::fixed;
  cfg.run.fixed_sc_layers = 3;
  auto layout = cfg.build_layout();
  auto scm = fixed_decision(cfg, layout);
  EXPECT_EQ(scm.l_full, (std::vector<int>{2, 2}));
  EXPECT_EQ(run_windows(cfg).rows.size(), 1u);
}

TEST(Harness, UlscsDominatesBaseline) {
  auto cfg = small_config(5);
  cfg.run.solver = Solver::ulscs;
  cfg.run.warmup_windows = 5;
  auto out = run_windows(cfg);
  ASSERT_TRUE(out.store.has_value());
  EXPECT_EQ(out.store->size(), 10u);
  for (const auto& r : out.rows) EXPECT_GE(r.objective, r.baseline_objective);
}

TEST(Harness, StorePersistsAcrossRuns) {
  auto cfg = small_config(2);
  cfg.run.solver = Solver::ulscs;
  auto path = std::filesystem::temp_directory_path() / "ranplan_harness_store.jsonl";
  std::filesystem::remove(path);
  cfg.run.store_path = path;
  run_windows(cfg);
  run_windows(cfg);
  EXPECT_EQ(RecordStore::load(path).size(), 4u);
  std::filesystem::remove(path);
}

TEST(Harness, SbsCountSweep) {
  auto cfg = small_config(4);
  auto out = sweep(cfg, SweepAxis::num_sbs, {0, 1, 2});
  EXPECT_TRUE(out.failures.empty());
  ASSERT_EQ(out.rows.size(), 12u);
  EXPECT_EQ(out.rows.front().axis, "num_sbs");
  EXPECT_EQ(out.rows.front().axis_value, 0.0);
  EXPECT_EQ(out.rows.back().axis_value, 2.0);
}

TEST(Harness, SweepRecordsBadValues) {
  auto cfg = small_config(1);
  auto out = sweep(cfg, SweepAxis::num_sbs, {1, 7});
  EXPECT_EQ(out.rows.size(), 1u);
  ASSERT_EQ(out.failures.size(), 1u);
  EXPECT_EQ(out.failures[0].axis_value, 7.0);
  EXPECT_THROW(apply_axis(cfg, SweepAxis::grid_diameter, 0.05), Error);
}

TEST(Harness, EmptyExportIsHeaderOnly) {
  std::ostringstream os;
  write_rows(os, {}, ExportFormat::csv);
  const auto text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  std::istringstream is(text);
  EXPECT_TRUE(read_rows(is, ExportFormat::csv).empty());
  std::ostringstream js;
  write_rows(js, {}, ExportFormat::jsonl);
  EXPECT_TRUE(js.str().empty());
}

TEST(Harness, CsvAndJsonlRoundTripAndAgree) {
  auto rows = run_windows(small_config(3)).rows;
  WindowRow odd;
  odd.axis = "k";
  odd.scheme = "CZ+cell";
  odd.solver = "loscs";
  odd.infeasibility = "revalidation_failed: power, \"quoted\"";
  odd.xi = {0.5, 1e-300};
  rows.push_back(odd);
  for (auto fmt : {ExportFormat::csv, ExportFormat::jsonl}) {
    std::stringstream ss;
    write_rows(ss, rows, fmt);
    EXPECT_EQ(read_rows(ss, fmt), rows);
  }
  auto dir = std::filesystem::temp_directory_path();
  export_rows(dir / "ranplan_rows.csv", rows, ExportFormat::csv);
  export_rows(dir / "ranplan_rows.jsonl", rows, ExportFormat::jsonl);
  EXPECT_EQ(import_rows(dir / "ranplan_rows.csv", export_format_for(dir / "ranplan_rows.csv")),
            import_rows(dir / "ranplan_rows.jsonl", export_format_for(dir / "ranplan_rows.jsonl")));
  std::filesystem::remove(dir / "ranplan_rows.csv");
  std::filesystem::remove(dir / "ranplan_rows.jsonl");
}

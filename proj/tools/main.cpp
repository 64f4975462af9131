// ranplan: command-line front end for traffic generation, autoencoder
// training, single-window planning, multi-window runs, sweeps and export.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ranplan/config.hpp"
#include "ranplan/error.hpp"
#include "ranplan/harness.hpp"
#include "ranplan/io.hpp"
#include "ranplan/learning.hpp"
#include "ranplan/metrics.hpp"
#include "ranplan/search.hpp"
#include "ranplan/traffic.hpp"

namespace {

using nlohmann::json;
using namespace ranplan;

constexpr int kExitError = 2;
constexpr int kExitUsage = 64;

void print_error(std::string_view code, std::string_view message) {
  std::cerr << json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
}

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheme;
  std::optional<std::string> solver;
};

void add_common(CLI::App* app, Common& c, bool need_config = true) {
  auto* opt = app->add_option("--config", c.config_path, "Scenario config (JSON)");
  if (need_config) opt->required();
  app->add_option("--seed", c.seed, "Override run.seed");
  app->add_option("--scheme", c.scheme, "SZ+grid, CZ+grid or CZ+cell");
  app->add_option("--solver", c.solver, "loscs, ulscs, exhaustive or fixed");
}

ScenarioConfig load(const Common& c) {
  auto cfg = load_config(c.config_path);
  if (c.seed) cfg.run.seed = *c.seed;
  if (c.scheme) cfg.run.scheme = scheme_from_string(*c.scheme);
  if (c.solver) cfg.run.solver = solver_from_string(*c.solver);
  cfg.validate();
  return cfg;
}

json objective_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void emit(const std::optional<std::string>& out, const std::string& text) {
  if (out) {
    write_text_file(*out, text);
  } else {
    std::cout << text;
  }
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> v;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) v.push_back(parse_double(tok));
  }
  if (v.empty()) throw Error(ErrorCode::config_error, "--values needs at least one number");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planning-stage resource management for a sliced two-tier RAN"};
  app.require_subcommand(1);

  // gen-traffic
  Common gen;
  std::string gen_out;
  std::size_t gen_window = 0;
  auto* gen_cmd = app.add_subcommand("gen-traffic", "Generate one window's DTD instance");
  add_common(gen_cmd, gen);
  gen_cmd->add_option("--out", gen_out, "Output DTD file")->required();
  gen_cmd->add_option("--window", gen_window, "Window index");

  // train-ae
  Common tr;
  std::string tr_out;
  std::optional<std::size_t> tr_instances, tr_epochs;
  auto* tr_cmd = app.add_subcommand("train-ae", "Train the autoencoder and save the model");
  add_common(tr_cmd, tr);
  tr_cmd->add_option("--out", tr_out, "Output model file")->required();
  tr_cmd->add_option("--instances", tr_instances, "Override learning.train_instances");
  tr_cmd->add_option("--epochs", tr_epochs, "Override learning.epochs");

  // plan
  Common pl;
  std::size_t pl_window = 0;
  std::optional<std::string> pl_dtd, pl_model, pl_store, pl_out;
  auto* pl_cmd = app.add_subcommand("plan", "Solve a single planning window");
  add_common(pl_cmd, pl);
  pl_cmd->add_option("--window", pl_window, "Window index for generated traffic");
  pl_cmd->add_option("--dtd", pl_dtd, "Use this DTD file instead of generated traffic");
  pl_cmd->add_option("--model", pl_model, "Autoencoder model (ulscs)");
  pl_cmd->add_option("--store", pl_store, "Record store file (ulscs), updated in place");
  pl_cmd->add_option("--out", pl_out, "Write the result JSON here instead of stdout");

  // run
  Common rn;
  std::optional<std::string> rn_out, rn_format, rn_model, rn_store;
  std::optional<std::size_t> rn_windows;
  bool rn_no_time = false;
  auto* rn_cmd = app.add_subcommand("run", "Solve run.windows planning windows");
  add_common(rn_cmd, rn);
  rn_cmd->add_option("--out", rn_out, "Result table (.csv or .jsonl); stdout if omitted");
  rn_cmd->add_option("--format", rn_format, "csv or jsonl");
  rn_cmd->add_option("--model", rn_model, "Autoencoder model (ulscs)");
  rn_cmd->add_option("--store", rn_store, "Record store file (ulscs)");
  rn_cmd->add_option("--windows", rn_windows, "Override run.windows");
  rn_cmd->add_flag("--no-wall-time", rn_no_time, "Write 0 in the wall_time_s column");

  // sweep
  Common sw;
  std::string sw_axis, sw_values;
  std::optional<std::string> sw_out, sw_format;
  bool sw_no_time = false;
  auto* sw_cmd = app.add_subcommand("sweep", "Repeat run over values of one axis");
  add_common(sw_cmd, sw);
  sw_cmd->add_option("--axis", sw_axis,
                     "num_sbs, num_slices, bandwidth, grid_diameter, k or capacity")
      ->required();
  sw_cmd->add_option("--values", sw_values, "Comma-separated axis values")->required();
  sw_cmd->add_option("--out", sw_out, "Result table (.csv or .jsonl); stdout if omitted");
  sw_cmd->add_option("--format", sw_format, "csv or jsonl");
  sw_cmd->add_flag("--no-wall-time", sw_no_time, "Write 0 in the wall_time_s column");

  // export
  Common ex;
  std::string ex_in, ex_out;
  std::optional<std::string> ex_from, ex_to;
  auto* ex_cmd = app.add_subcommand("export", "Convert a result table between csv and jsonl");
  add_common(ex_cmd, ex, false);
  ex_cmd->add_option("--in", ex_in, "Input table")->required();
  ex_cmd->add_option("--out", ex_out, "Output table")->required();
  ex_cmd->add_option("--from", ex_from, "Input format (default: from extension)");
  ex_cmd->add_option("--to", ex_to, "Output format (default: from extension)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage_error", e.what());
    return kExitUsage;
  }

  try {
    if (*gen_cmd) {
      const auto cfg = load(gen);
      const auto layout = cfg.build_layout();
      save_dtd(window_dtd(cfg, layout, gen_window), gen_out);
    } else if (*tr_cmd) {
      auto cfg = load(tr);
      if (tr_instances) cfg.learning.train_instances = *tr_instances;
      if (tr_epochs) cfg.learning.train.epochs = *tr_epochs;
      cfg.learning.model_path.reset();
      cfg.validate();
      const auto layout = cfg.build_layout();
      TrainResult report;
      const auto ae = build_autoencoder(cfg, layout, &report);
      ae.save(tr_out);
      std::cout << json{{"model", tr_out},
                        {"layer_sizes", ae.layer_sizes()},
                        {"loss_history", report.loss_history}}
                       .dump()
                << '\n';
    } else if (*pl_cmd) {
      auto cfg = load(pl);
      if (pl_model) cfg.learning.model_path = *pl_model;
      const auto layout = cfg.build_layout();
      const auto radio = cfg.resolved_radio();
      const GainTable gains(layout);
      const auto dtd = pl_dtd ? load_dtd(*pl_dtd, layout.num_grids(), cfg.slices.num_slices())
                              : window_dtd(cfg, layout, pl_window);
      const PlanningInputs in{layout, dtd, cfg.slices, radio, gains};
      const auto opts = scheme_options(cfg.run.scheme, cfg.run.exhaustive_cap);
      const auto init = ScmDecision::minimal(layout.num_sbs(), cfg.slices.num_slices());
      const auto seed = search_seed(cfg.run.seed, pl_window);
      SearchResult res;
      json extra = json::object();
      switch (cfg.run.solver) {
        case Solver::loscs: res = loscs(in, init, seed, opts); break;
        case Solver::exhaustive: res = exhaustive_search(in, opts); break;
        case Solver::fixed: {
          res.scm = fixed_decision(cfg, layout);
          auto ev = evaluate_scm(in, res.scm, opts);
          res.plan = std::move(ev.plan);
          res.objective = ev.objective;
          res.feasible = ev.feasible;
          res.evaluations = 1;
          break;
        }
        case Solver::ulscs: {
          const auto ae = build_autoencoder(cfg, layout);
          RecordStore store = pl_store && std::filesystem::exists(*pl_store)
                                  ? RecordStore::load(*pl_store)
                                  : RecordStore(cfg.run.capacity);
          auto u = ulscs(in, ae, store, cfg.run.k, seed, opts);
          extra["baseline_objective"] = objective_json(u.baseline_objective);
          extra["store_size"] = store.size();
          if (pl_store) store.save(*pl_store);
          res = std::move(u);
          break;
        }
      }
      json out = {{"scheme", std::string(to_string(cfg.run.scheme))},
                  {"solver", std::string(to_string(cfg.run.solver))},
                  {"seed", seed},
                  {"feasible", res.feasible},
                  {"objective", objective_json(res.objective)},
                  {"total_power_w", res.plan.total_power()},
                  {"evaluations", res.evaluations},
                  {"l_full", res.scm.l_full},
                  {"l_reduced", res.scm.l_reduced}};
      std::vector<std::vector<int>> zoom;
      for (const auto& z : res.scm.zoom) zoom.emplace_back(z.begin(), z.end());
      out["zoom"] = zoom;
      if (res.feasible) {
        const auto cov = build_coverage(layout, res.scm, cfg.slices);
        out["per_slice_ee"] = ee_report(dtd, res.plan, cov, cfg.slices).per_slice_ee;
      } else if (res.plan.infeasibility) {
        out["infeasibility"] = std::string(to_string(*res.plan.infeasibility));
      }
      json trace = json::array();
      for (const auto& tp : res.trace) trace.push_back({tp.iteration, objective_json(tp.objective)});
      out["trace"] = trace;
      out.update(extra);
      emit(pl_out, out.dump() + "\n");
    } else if (*rn_cmd) {
      auto cfg = load(rn);
      if (rn_model) cfg.learning.model_path = *rn_model;
      if (rn_store) cfg.run.store_path = *rn_store;
      if (rn_windows) cfg.run.windows = *rn_windows;
      if (rn_no_time) cfg.run.record_wall_time = false;
      cfg.validate();
      const auto format = rn_format ? export_format_from_string(*rn_format)
                          : rn_out  ? export_format_for(*rn_out)
                                    : ExportFormat::csv;
      const auto result = run_windows(cfg);
      std::ostringstream os;
      write_rows(os, result.rows, format);
      emit(rn_out, os.str());
    } else if (*sw_cmd) {
      auto cfg = load(sw);
      if (sw_no_time) cfg.run.record_wall_time = false;
      const auto format = sw_format ? export_format_from_string(*sw_format)
                          : sw_out  ? export_format_for(*sw_out)
                                    : ExportFormat::csv;
      const auto result = sweep(cfg, sweep_axis_from_string(sw_axis), parse_values(sw_values));
      std::ostringstream os;
      write_rows(os, result.rows, format);
      emit(sw_out, os.str());
      for (const auto& f : result.failures) {
        std::cerr << json{{"sweep_failure", {{"axis_value", f.axis_value}, {"error", f.error}}}}
                         .dump()
                  << '\n';
      }
    } else if (*ex_cmd) {
      const auto from = ex_from ? export_format_from_string(*ex_from) : export_format_for(ex_in);
      const auto to = ex_to ? export_format_from_string(*ex_to) : export_format_for(ex_out);
      export_rows(ex_out, import_rows(ex_in, from), to);
    }
  } catch (const Error& e) {
    print_error(to_string(e.code()), e.what());
    return kExitError;
  } catch (const std::exception& e) {
    print_error("internal_error", e.what());
    return 1;
  }
  return EXIT_SUCCESS;
}

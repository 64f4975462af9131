#pragma once

// Experiment orchestration: the per-window planning loop, parameter sweeps
// and result export.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ranplan/config.hpp"
#include "ranplan/learning.hpp"
#include "ranplan/search.hpp"

namespace ranplan {

/// One output row: a solved planning window.
struct WindowRow {
  std::string axis;          // sweep axis, empty for plain runs
  double axis_value = 0.0;
  std::size_t window = 0;
  std::string scheme;
  std::string solver;
  std::uint64_t seed = 0;
  std::vector<double> xi;    // per-slice energy efficiency
  double objective = kInfeasibleObjective;
  /// Plain loscs objective from the same start; equals `objective` except for ulscs.
  double baseline_objective = kInfeasibleObjective;
  double total_power_w = 0.0;
  bool feasible = false;
  std::string infeasibility;  // empty when feasible
  std::size_t evaluations = 0;
  double wall_time_s = 0.0;

  friend bool operator==(const WindowRow&, const WindowRow&) = default;
};

/// Seeds derived for window w of a run seeded with `seed`.
std::uint64_t traffic_seed(std::uint64_t seed, std::size_t window);
std::uint64_t search_seed(std::uint64_t seed, std::size_t window);

/// Traffic of window w for a configuration, on the layout it describes.
DtdInstance window_dtd(const ScenarioConfig& config, const NetworkLayout& layout,
                       std::size_t window);

/// Decision used by the `fixed` solver: every SBS at the configured radius,
/// shrunk uniformly until the full-size disks stop overlapping.
ScmDecision fixed_decision(const ScenarioConfig& config, const NetworkLayout& layout);

/// Search options implied by a scheme.
SearchOptions scheme_options(Scheme scheme, std::size_t exhaustive_cap);

/// Independent re-check of a solved window: RB budgets, power budgets, SINR
/// targets (with equality for grid-based IM), positivity and the decision's
/// own constraints. Returns a description of the first violation.
std::optional<std::string> revalidate(const PlanningInputs& in, const ScmDecision& scm,
                                      const PowerPlan& plan, ImScheme im);

/// Autoencoder for a configuration: loaded from learning.model_path when set,
/// otherwise trained on freshly generated instances.
Autoencoder build_autoencoder(const ScenarioConfig& config, const NetworkLayout& layout,
                              TrainResult* report = nullptr);

/// Training instances used by build_autoencoder.
std::vector<DtdInstance> training_set(const ScenarioConfig& config, const NetworkLayout& layout);

struct RunOutput {
  std::vector<WindowRow> rows;
  std::optional<RecordStore> store;
};

/// Solves run.windows planning windows. A store is used (and returned) only
/// by the ulscs solver; it is preloaded from run.store_path when that file
/// exists and otherwise filled by run.warmup_windows loscs windows.
RunOutput run_windows(const ScenarioConfig& config, const Autoencoder* ae = nullptr);

enum class SweepAxis { num_sbs, num_slices, bandwidth, grid_diameter, k, capacity };

std::string_view to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(std::string_view name);

/// The configuration for one sweep value.
ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value);

struct SweepFailure {
  double axis_value = 0.0;
  std::string error;
};

struct SweepOutput {
  std::vector<WindowRow> rows;  // sorted by (axis value, window)
  std::vector<SweepFailure> failures;
};

SweepOutput sweep(const ScenarioConfig& base, SweepAxis axis, const std::vector<double>& values);

enum class ExportFormat { csv, jsonl };

ExportFormat export_format_from_string(std::string_view name);
/// Picks the format from the file extension (.csv or .jsonl).
ExportFormat export_format_for(const std::filesystem::path& path);

void write_rows(std::ostream& os, const std::vector<WindowRow>& rows, ExportFormat format);
std::vector<WindowRow> read_rows(std::istream& is, ExportFormat format);
void export_rows(const std::filesystem::path& path, const std::vector<WindowRow>& rows,
                 ExportFormat format);
std::vector<WindowRow> import_rows(const std::filesystem::path& path, ExportFormat format);

}  // namespace ranplan

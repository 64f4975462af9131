#pragma once

// Interference management: per-interval power reservation that meets every
// active pair's SINR target with equality.
//
// For interval t and the active (grid, slice) pairs (load > 0), the SINR
// equalities form the linear system
//
//   (H - rho * Gamma * Omega) p = rho * Gamma * N0_RB * 1
//
// with H = diag(h_serving / (w * eta)), Omega the b * theta * h couplings and
// Gamma the per-row linear SINR floor. Rows are ordered slice-major.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ranplan/channel.hpp"
#include "ranplan/geometry.hpp"
#include "ranplan/slicing.hpp"
#include "ranplan/traffic.hpp"

namespace ranplan {

/// Read-only inputs shared by every evaluation within a planning window.
struct PlanningInputs {
  const NetworkLayout& layout;
  const DtdInstance& dtd;
  const SliceSpec& slices;
  const RadioConfig& radio;
  const GainTable& gains;
};

enum class InfeasibilityReason {
  singular_system,
  nonpositive_power,
  budget_violation,
  rb_budget_violation,
  not_converged,
};

std::string_view to_string(InfeasibilityReason reason);

class PowerPlan {
 public:
  PowerPlan() = default;
  PowerPlan(std::size_t grids, std::size_t slices, std::size_t intervals)
      : grids_(grids), slices_(slices), intervals_(intervals),
        power_(grids * slices * intervals, 0.0) {}

  std::size_t num_grids() const { return grids_; }
  std::size_t num_slices() const { return slices_; }
  std::size_t num_intervals() const { return intervals_; }

  double power(std::size_t i, std::size_t n, std::size_t t) const {
    return power_[(i * slices_ + n) * intervals_ + t];
  }
  void set_power(std::size_t i, std::size_t n, std::size_t t, double w) {
    power_[(i * slices_ + n) * intervals_ + t] = w;
  }
  const std::vector<double>& flat() const { return power_; }

  double total_power() const;
  double interval_total(std::size_t t) const;

  bool feasible = true;
  std::optional<InfeasibilityReason> infeasibility;

  void mark_infeasible(InfeasibilityReason reason) {
    feasible = false;
    if (!infeasibility) infeasibility = reason;
  }

  friend bool operator==(const PowerPlan&, const PowerPlan&) = default;

 private:
  std::size_t grids_ = 0;
  std::size_t slices_ = 0;
  std::size_t intervals_ = 0;
  std::vector<double> power_;
};

struct ActivePair {
  std::size_t grid;
  std::size_t slice;
};

struct InterferenceSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd c;
  std::vector<ActivePair> pairs;

  std::size_t size() const { return pairs.size(); }
};

InterferenceSystem assemble_system(const PlanningInputs& in, const ScmDecision& scm,
                                   const CoverageMap& coverage, std::size_t t);

struct SolverOptions {
  /// Systems whose (row-equilibrated) condition estimate exceeds this are
  /// treated as singular.
  double max_condition = 1e12;
};

struct IntervalSolution {
  Eigen::VectorXd powers;
  std::optional<InfeasibilityReason> infeasibility;
  double condition_estimate = 1.0;

  bool ok() const { return !infeasibility.has_value(); }
};

/// Closed-form power of one interval: solves A p = c.
IntervalSolution solve_power_interval(const InterferenceSystem& system,
                                      const SolverOptions& options = {});

struct FixedPointResult {
  Eigen::VectorXd powers;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Verification path: iterates the SINR-equality map
/// p <- (c - offdiag(A) p) / diag(A) from p = c / diag(A).
FixedPointResult fixed_point_oracle(const InterferenceSystem& system, double tol = 1e-13,
                                    std::size_t max_iter = 1'000'000);

/// Grid-based plan over every interval, including the per-BS power budgets.
PowerPlan plan_power(const PlanningInputs& in, const ScmDecision& scm,
                     const CoverageMap& coverage, const SolverOptions& options = {});

/// Cell-based benchmark: one power per (BS, slice) shared by the BS's active
/// grids for that slice, raised until the worst grid meets its target.
PowerPlan cell_based_power(const PlanningInputs& in, const ScmDecision& scm,
                           const CoverageMap& coverage, double tol = 1e-12,
                           std::size_t max_iter = 100'000);

/// Per-BS power budget check for interval t.
bool validate_power(const PowerPlan& plan, const CoverageMap& coverage,
                    const NetworkLayout& layout, std::size_t t);

/// Planning-stage SINR of an active pair under `plan`.
double sinr(const PowerPlan& plan, const PlanningInputs& in, const ScmDecision& scm,
            const CoverageMap& coverage, std::size_t i, std::size_t n, std::size_t t);

}  // namespace ranplan

#pragma once

// Service-coverage search: local-optimum search over one SBS at a time, the
// exhaustive oracle for small instances, and the cell-zooming restriction.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "ranplan/metrics.hpp"
#include "ranplan/power.hpp"
#include "ranplan/slicing.hpp"

namespace ranplan {

enum class ImScheme { grid, cell };

struct SearchOptions {
  ImScheme im = ImScheme::grid;
  /// Cell zooming: candidates keep the same SC radius for every slice.
  bool uniform_zoom = false;
  std::size_t exhaustive_cap = 100'000;
  SolverOptions solver;
};

inline constexpr double kInfeasibleObjective = -std::numeric_limits<double>::infinity();

/// One SCM decision evaluated end to end: budgets, power, objective.
struct Evaluation {
  PowerPlan plan;
  double objective = kInfeasibleObjective;
  bool feasible = false;
};

Evaluation evaluate_scm(const PlanningInputs& in, const ScmDecision& scm,
                        const SearchOptions& options = {});

struct TracePoint {
  std::size_t iteration = 0;
  double objective = kInfeasibleObjective;
};

struct SearchResult {
  ScmDecision scm;
  PowerPlan plan;
  double objective = kInfeasibleObjective;
  bool feasible = false;
  std::vector<TracePoint> trace;
  std::size_t evaluations = 0;
};

/// Iterative per-SBS neighbourhood search. Starts from `init`, accepts only
/// strict improvements, and stops once no SBS can improve the objective.
/// An infeasible start is scored -inf so any feasible candidate replaces it.
SearchResult loscs(const PlanningInputs& in, const ScmDecision& init, std::uint64_t seed,
                   const SearchOptions& options = {});

/// loscs restricted to identical SC radii across slices.
SearchResult cz_search(const PlanningInputs& in, const ScmDecision& init,
                       std::uint64_t seed, SearchOptions options = {});

/// Global maximiser over every joint decision. Throws cap_exceeded when the
/// product of per-SBS configuration counts exceeds `options.exhaustive_cap`.
SearchResult exhaustive_search(const PlanningInputs& in, const SearchOptions& options = {});

/// True when no single-SBS candidate strictly improves on `scm`'s objective.
bool is_local_optimum(const PlanningInputs& in, const ScmDecision& scm, double objective,
                      const SearchOptions& options = {});

/// Seeded random legal decision: SBSs are visited in random order and take a
/// random l_f among those that still fit, then random l_r and zoom bits.
ScmDecision random_scm(const NetworkLayout& layout, std::size_t num_slices,
                       std::uint64_t seed, bool uniform_zoom = false);

}  // namespace ranplan

#include "ranplan/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ranplan/error.hpp"

namespace ranplan {

std::string_view to_string(InfeasibilityReason reason) {
  switch (reason) {
    case InfeasibilityReason::singular_system: return "singular_system";
    case InfeasibilityReason::nonpositive_power: return "nonpositive_power";
    case InfeasibilityReason::budget_violation: return "budget_violation";
    case InfeasibilityReason::rb_budget_violation: return "rb_budget_violation";
    case InfeasibilityReason::not_converged: return "not_converged";
  }
  return "unknown";
}

double PowerPlan::total_power() const {
  double s = 0.0;
  for (double p : power_) s += p;
  return s;
}

double PowerPlan::interval_total(std::size_t t) const {
  double s = 0.0;
  for (std::size_t i = 0; i < grids_; ++i) {
    for (std::size_t n = 0; n < slices_; ++n) s += power(i, n, t);
  }
  return s;
}

namespace {

void check_dimensions(const PlanningInputs& in, const CoverageMap& coverage) {
  if (in.dtd.num_grids() != in.layout.num_grids() ||
      coverage.num_grids() != in.layout.num_grids() ||
      in.dtd.num_slices() != in.slices.num_slices() ||
      coverage.num_slices() != in.slices.num_slices() ||
      in.gains.num_grids() != in.layout.num_grids() ||
      in.gains.num_bs() != in.layout.num_bs()) {
    throw Error(ErrorCode::dimension_mismatch, "planning inputs disagree in size");
  }
}

}  // namespace

InterferenceSystem assemble_system(const PlanningInputs& in, const ScmDecision& scm,
                                   const CoverageMap& coverage, std::size_t t) {
  check_dimensions(in, coverage);
  if (t >= in.dtd.num_intervals()) {
    throw Error(ErrorCode::index_out_of_range, "interval index out of range");
  }
  InterferenceSystem sys;
  for (std::size_t n = 0; n < in.slices.num_slices(); ++n) {
    for (std::size_t i = 0; i < in.dtd.num_grids(); ++i) {
      if (in.dtd.load(i, n, t) > 0.0) sys.pairs.push_back({i, n});
    }
  }
  const auto k = static_cast<Eigen::Index>(sys.pairs.size());
  sys.a = Eigen::MatrixXd::Zero(k, k);
  sys.c = Eigen::VectorXd::Zero(k);
  if (k == 0) return sys;

  const double noise = in.radio.noise_per_rb_w();
  // theta depends only on the interferer in the occupancy model; cache it.
  std::vector<double> theta_col(sys.pairs.size());
  for (std::size_t col = 0; col < sys.pairs.size(); ++col) {
    const auto [i2, n2] = sys.pairs[col];
    theta_col[col] = theta(in.dtd, in.slices, in.radio, 0, 0, i2, n2, t);
  }
  for (Eigen::Index row = 0; row < k; ++row) {
    const auto [i, n] = sys.pairs[static_cast<std::size_t>(row)];
    const double target = in.slices.sinr_target(n);
    const double rbs = in.dtd.load(i, n, t) * in.slices.rb_per_bit[n];
    sys.a(row, row) = in.gains.gain(coverage.assoc(i, n), i) / rbs;
    sys.c(row) = target * noise;
    for (Eigen::Index col = 0; col < k; ++col) {
      if (col == row) continue;
      const auto [i2, n2] = sys.pairs[static_cast<std::size_t>(col)];
      const int b = interference_indicator(coverage, scm, i, n, i2, n2);
      if (b == 0) continue;
      const double h = in.gains.gain(coverage.assoc(i2, n2), i);
      sys.a(row, col) = -target * delta(b, theta_col[static_cast<std::size_t>(col)], h);
    }
  }
  return sys;
}

IntervalSolution solve_power_interval(const InterferenceSystem& system,
                                      const SolverOptions& options) {
  IntervalSolution out;
  const auto k = static_cast<Eigen::Index>(system.size());
  if (k == 0) {
    out.powers = Eigen::VectorXd(0);
    return out;
  }
  // Row equilibration: diag(A)^-1 A has unit diagonal, so the condition
  // estimate reflects the coupling rather than the raw gain magnitudes.
  const Eigen::VectorXd diag = system.a.diagonal();
  if ((diag.array() <= 0.0).any() || !diag.allFinite()) {
    out.infeasibility = InfeasibilityReason::singular_system;
    out.condition_estimate = std::numeric_limits<double>::infinity();
    return out;
  }
  const Eigen::MatrixXd scaled = diag.cwiseInverse().asDiagonal() * system.a;
  const Eigen::VectorXd rhs = system.c.cwiseQuotient(diag);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(scaled);
  const double rcond = lu.rcond();
  out.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(out.condition_estimate <= options.max_condition)) {
    out.infeasibility = InfeasibilityReason::singular_system;
    return out;
  }
  out.powers = lu.solve(rhs);
  if (!out.powers.allFinite()) {
    out.infeasibility = InfeasibilityReason::singular_system;
  } else if ((out.powers.array() <= 0.0).any()) {
    out.infeasibility = InfeasibilityReason::nonpositive_power;
  }
  return out;
}

FixedPointResult fixed_point_oracle(const InterferenceSystem& system, double tol,
                                    std::size_t max_iter) {
  FixedPointResult out;
  const auto k = static_cast<Eigen::Index>(system.size());
  if (k == 0) {
    out.powers = Eigen::VectorXd(0);
    out.converged = true;
    return out;
  }
  const Eigen::VectorXd diag = system.a.diagonal();
  Eigen::MatrixXd coupling = -(diag.cwiseInverse().asDiagonal() * system.a);
  coupling.diagonal().setZero();
  const Eigen::VectorXd base = system.c.cwiseQuotient(diag);

  Eigen::VectorXd p = base;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd next = base + coupling * p;
    out.iterations = it;
    if (!next.allFinite() || next.cwiseAbs().maxCoeff() > 1e200) break;
    const double change =
        ((next - p).cwiseAbs().array() / next.cwiseAbs().array().max(1e-300)).maxCoeff();
    p = std::move(next);
    if (change < tol) {
      out.converged = true;
      break;
    }
  }
  out.powers = std::move(p);
  return out;
}

namespace {

void check_budgets(PowerPlan& plan, const CoverageMap& coverage, const NetworkLayout& layout) {
  for (std::size_t t = 0; t < plan.num_intervals(); ++t) {
    if (!validate_power(plan, coverage, layout, t)) {
      plan.mark_infeasible(InfeasibilityReason::budget_violation);
      return;
    }
  }
}

}  // namespace

PowerPlan plan_power(const PlanningInputs& in, const ScmDecision& scm,
                     const CoverageMap& coverage, const SolverOptions& options) {
  PowerPlan plan(in.dtd.num_grids(), in.dtd.num_slices(), in.dtd.num_intervals());
  for (std::size_t t = 0; t < in.dtd.num_intervals(); ++t) {
    const auto sys = assemble_system(in, scm, coverage, t);
    const auto sol = solve_power_interval(sys, options);
    if (!sol.ok()) {
      plan.mark_infeasible(*sol.infeasibility);
      return plan;
    }
    for (std::size_t r = 0; r < sys.size(); ++r) {
      plan.set_power(sys.pairs[r].grid, sys.pairs[r].slice, t,
                     sol.powers(static_cast<Eigen::Index>(r)));
    }
  }
  check_budgets(plan, coverage, in.layout);
  return plan;
}

PowerPlan cell_based_power(const PlanningInputs& in, const ScmDecision& scm,
                           const CoverageMap& coverage, double tol, std::size_t max_iter) {
  PowerPlan plan(in.dtd.num_grids(), in.dtd.num_slices(), in.dtd.num_intervals());
  const std::size_t num_slices = in.slices.num_slices();
  for (std::size_t t = 0; t < in.dtd.num_intervals(); ++t) {
    const auto sys = assemble_system(in, scm, coverage, t);
    const auto k = static_cast<Eigen::Index>(sys.size());
    if (k == 0) continue;
    // Group id of each active pair: its (serving BS, slice).
    std::vector<std::size_t> group(sys.size());
    for (std::size_t r = 0; r < sys.size(); ++r) {
      const auto [i, n] = sys.pairs[r];
      group[r] = coverage.assoc(i, n) * num_slices + n;
    }
    const std::size_t num_groups = in.layout.num_bs() * num_slices;

    const Eigen::VectorXd diag = sys.a.diagonal();
    Eigen::MatrixXd coupling = -(diag.cwiseInverse().asDiagonal() * sys.a);
    coupling.diagonal().setZero();
    const Eigen::VectorXd base = sys.c.cwiseQuotient(diag);

    std::vector<double> level(num_groups, 0.0);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(k);
    bool converged = false;
    for (std::size_t it = 0; it < max_iter; ++it) {
      const Eigen::VectorXd required = base + coupling * p;
      std::vector<double> next(num_groups, 0.0);
      for (std::size_t r = 0; r < sys.size(); ++r) {
        next[group[r]] = std::max(next[group[r]], required(static_cast<Eigen::Index>(r)));
      }
      double change = 0.0;
      bool finite = true;
      for (std::size_t g = 0; g < num_groups; ++g) {
        if (!std::isfinite(next[g]) || next[g] > 1e200) finite = false;
        if (next[g] > 0.0) change = std::max(change, std::abs(next[g] - level[g]) / next[g]);
      }
      level = std::move(next);
      for (std::size_t r = 0; r < sys.size(); ++r) p(static_cast<Eigen::Index>(r)) = level[group[r]];
      if (!finite) break;
      if (change < tol) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      plan.mark_infeasible(InfeasibilityReason::not_converged);
      return plan;
    }
    for (std::size_t r = 0; r < sys.size(); ++r) {
      plan.set_power(sys.pairs[r].grid, sys.pairs[r].slice, t, p(static_cast<Eigen::Index>(r)));
    }
  }
  check_budgets(plan, coverage, in.layout);
  return plan;
}

bool validate_power(const PowerPlan& plan, const CoverageMap& coverage,
                    const NetworkLayout& layout, std::size_t t) {
  for (std::size_t m = 0; m < coverage.num_bs(); ++m) {
    double total = 0.0;
    for (std::size_t n = 0; n < coverage.num_slices(); ++n) {
      for (auto i : coverage.sc_set(m, n)) total += plan.power(i, n, t);
    }
    if (total > layout.bs(m).max_power_w) return false;
  }
  return true;
}

double sinr(const PowerPlan& plan, const PlanningInputs& in, const ScmDecision& scm,
            const CoverageMap& coverage, std::size_t i, std::size_t n, std::size_t t) {
  const double load = in.dtd.load(i, n, t);
  if (!(load > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "SINR of an inactive pair is undefined");
  }
  const double per_rb = plan.power(i, n, t) / (load * in.slices.rb_per_bit[n]);
  double interference = 0.0;
  for (std::size_t n2 = 0; n2 < in.slices.num_slices(); ++n2) {
    for (std::size_t i2 = 0; i2 < in.dtd.num_grids(); ++i2) {
      const double p2 = plan.power(i2, n2, t);
      if (p2 == 0.0) continue;
      const int b = interference_indicator(coverage, scm, i, n, i2, n2);
      const double th = theta(in.dtd, in.slices, in.radio, i, n, i2, n2, t);
      interference += delta(b, th, in.gains.gain(coverage.assoc(i2, n2), i)) * p2;
    }
  }
  return per_rb * in.gains.gain(coverage.assoc(i, n), i) /
         (in.radio.noise_per_rb_w() + interference);
}

}  // namespace ranplan

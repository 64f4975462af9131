#include "ranplan/search.hpp"

#include <algorithm>
#include <random>

#include "ranplan/error.hpp"

namespace ranplan {

Evaluation evaluate_scm(const PlanningInputs& in, const ScmDecision& scm,
                        const SearchOptions& options) {
  Evaluation ev;
  const auto coverage = build_coverage(in.layout, scm, in.slices);
  ev.plan = PowerPlan(in.dtd.num_grids(), in.dtd.num_slices(), in.dtd.num_intervals());
  if (!check_rb_budgets(coverage, in.dtd, in.slices, in.radio.rb_budget).all()) {
    ev.plan.mark_infeasible(InfeasibilityReason::rb_budget_violation);
    return ev;
  }
  ev.plan = options.im == ImScheme::grid ? plan_power(in, scm, coverage, options.solver)
                                         : cell_based_power(in, scm, coverage);
  if (!ev.plan.feasible) return ev;
  ev.objective = ee_report(in.dtd, ev.plan, coverage, in.slices).objective;
  ev.feasible = true;
  return ev;
}

namespace {

bool is_uniform(const ScmDecision& scm) {
  for (const auto& z : scm.zoom) {
    if (std::adjacent_find(z.begin(), z.end(), std::not_equal_to<>()) != z.end()) return false;
  }
  return true;
}

CandidateOptions candidate_options(const SearchOptions& options) {
  return {.dedupe = true, .uniform_zoom = options.uniform_zoom};
}

}  // namespace

SearchResult loscs(const PlanningInputs& in, const ScmDecision& init, std::uint64_t seed,
                   const SearchOptions& options) {
  init.validate(in.layout, in.slices.num_slices());
  if (options.uniform_zoom && !is_uniform(init.canonical())) {
    throw Error(ErrorCode::invalid_decision, "cell zooming needs identical zoom bits per SBS");
  }

  SearchResult res;
  res.scm = init;
  {
    auto ev = evaluate_scm(in, init, options);
    ++res.evaluations;
    res.plan = std::move(ev.plan);
    res.objective = ev.objective;
    res.feasible = ev.feasible;
  }
  res.trace.push_back({0, res.objective});

  const std::size_t num_sbs = in.layout.num_sbs();
  if (num_sbs == 0) return res;

  std::mt19937_64 rng(seed);
  auto pick = [&rng](const std::vector<std::size_t>& pool) {
    std::uniform_int_distribution<std::size_t> dist(0, pool.size() - 1);
    return pool[dist(rng)];
  };
  auto all_sbs = [num_sbs] {
    std::vector<std::size_t> v(num_sbs);
    for (std::size_t k = 0; k < num_sbs; ++k) v[k] = k;
    return v;
  };

  std::vector<std::size_t> pending = all_sbs();
  std::size_t current = pick(pending);
  std::size_t iteration = 0;
  const auto cand_opts = candidate_options(options);
  while (!pending.empty()) {
    ++iteration;
    const auto candidates = enumerate_candidates(in.layout, res.scm, current, cand_opts);
    for (const auto& cand : candidates) {
      ScmDecision next = res.scm.with_sbs(current, cand);
      if (next.canonical() == res.scm.canonical()) continue;
      auto ev = evaluate_scm(in, next, options);
      ++res.evaluations;
      if (!ev.feasible || !(ev.objective > res.objective)) continue;
      res.scm = std::move(next);
      res.plan = std::move(ev.plan);
      res.objective = ev.objective;
      res.feasible = true;
      pending = all_sbs();
    }
    std::erase(pending, current);
    res.trace.push_back({iteration, res.objective});
    if (!pending.empty()) current = pick(pending);
  }
  return res;
}

SearchResult cz_search(const PlanningInputs& in, const ScmDecision& init,
                       std::uint64_t seed, SearchOptions options) {
  options.uniform_zoom = true;
  return loscs(in, init, seed, options);
}

SearchResult exhaustive_search(const PlanningInputs& in, const SearchOptions& options) {
  const std::size_t num_sbs = in.layout.num_sbs();
  const std::size_t num_slices = in.slices.num_slices();
  const auto space =
      sbs_config_space(in.layout.max_sc_layers(), num_slices, candidate_options(options));

  double combos = 1.0;
  for (std::size_t k = 0; k < num_sbs; ++k) combos *= static_cast<double>(space.size());
  if (combos > static_cast<double>(options.exhaustive_cap)) {
    throw Error(ErrorCode::cap_exceeded, "exhaustive search would visit " +
                                             std::to_string(static_cast<long long>(combos)) +
                                             " decisions");
  }

  SearchResult best;
  best.scm = ScmDecision::minimal(num_sbs, num_slices);
  std::vector<std::size_t> digits(num_sbs, 0);
  ScmDecision scm = best.scm;
  while (true) {
    for (std::size_t k = 0; k < num_sbs; ++k) {
      const auto& c = space[digits[k]];
      scm.l_full[k] = c.l_full;
      scm.l_reduced[k] = c.l_reduced;
      scm.zoom[k] = c.zoom;
    }
    if (validate_non_overlap(in.layout, scm.l_full)) {
      auto ev = evaluate_scm(in, scm, options);
      ++best.evaluations;
      if (ev.feasible && ev.objective > best.objective) {
        best.scm = scm;
        best.plan = std::move(ev.plan);
        best.objective = ev.objective;
        best.feasible = true;
        best.trace.push_back({best.evaluations, best.objective});
      }
    }
    std::size_t k = 0;
    while (k < num_sbs && ++digits[k] == space.size()) digits[k++] = 0;
    if (k == num_sbs) break;
  }
  if (!best.feasible) {
    best.plan = evaluate_scm(in, best.scm, options).plan;
  }
  return best;
}

bool is_local_optimum(const PlanningInputs& in, const ScmDecision& scm, double objective,
                      const SearchOptions& options) {
  const auto cand_opts = candidate_options(options);
  for (std::size_t k = 0; k < in.layout.num_sbs(); ++k) {
    for (const auto& cand : enumerate_candidates(in.layout, scm, k, cand_opts)) {
      const auto ev = evaluate_scm(in, scm.with_sbs(k, cand), options);
      if (ev.feasible && ev.objective > objective) return false;
    }
  }
  return true;
}

ScmDecision random_scm(const NetworkLayout& layout, std::size_t num_slices,
                       std::uint64_t seed, bool uniform_zoom) {
  const std::size_t num_sbs = layout.num_sbs();
  ScmDecision scm = ScmDecision::minimal(num_sbs, num_slices);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(num_sbs);
  for (std::size_t k = 0; k < num_sbs; ++k) order[k] = k;
  std::shuffle(order.begin(), order.end(), rng);

  // Start from l_f = 1 everywhere (always legal) and grow SBSs one at a time.
  for (auto k : order) {
    std::vector<int> options;
    for (int l_f = 1; l_f <= layout.max_sc_layers(); ++l_f) {
      auto trial = scm.l_full;
      trial[k] = l_f;
      if (validate_non_overlap(layout, trial)) options.push_back(l_f);
    }
    std::uniform_int_distribution<std::size_t> pick_f(0, options.size() - 1);
    scm.l_full[k] = options[pick_f(rng)];
    std::uniform_int_distribution<int> pick_r(1, scm.l_full[k]);
    scm.l_reduced[k] = pick_r(rng);
    std::bernoulli_distribution coin(0.5);
    if (uniform_zoom) {
      std::fill(scm.zoom[k].begin(), scm.zoom[k].end(), coin(rng) ? 1 : 0);
    } else {
      for (auto& a : scm.zoom[k]) a = coin(rng) ? 1 : 0;
    }
  }
  return scm;
}

}  // namespace ranplan

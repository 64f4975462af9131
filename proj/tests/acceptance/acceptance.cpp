// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ranplan/config.hpp"
#include "ranplan/error.hpp"
#include "ranplan/harness.hpp"
#include "ranplan/learning.hpp"
#include "ranplan/metrics.hpp"
#include "ranplan/search.hpp"

using namespace ranplan;
using namespace ranplan::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string config_path(const char* name) { return std::string(RANPLAN_CONFIG_DIR) + "/" + name; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// Random feasible power-control instances: I <= 37, N <= 3, T <= 3.

struct Instance {
  std::unique_ptr<Scenario> sc;
  ScmDecision scm;
  CoverageMap cov;
  PowerPlan plan;
};

std::vector<Instance> feasible_instances(std::size_t count, std::uint64_t seed0) {
  const std::vector<std::vector<HexCoord>> sites = {
      {}, {{1, 0}}, {{2, 0}}, {{2, -1}, {-2, 1}}, {{2, 0}, {-2, 1}}};
  std::vector<Instance> out;
  std::mt19937_64 rng(seed0);
  for (std::uint64_t attempt = 0; out.size() < count && attempt < 50 * count; ++attempt) {
    const int extent = 1 + static_cast<int>(rng() % 3);
    auto s = sites[rng() % sites.size()];
    bool fits = true;
    for (auto c : s) fits = fits && hex_distance(c, {0, 0}) <= extent;
    if (!fits) continue;
    const std::size_t n = 1 + rng() % 3;
    const std::size_t t = 2 + rng() % 2;
    const double rate = 0.5 + 1.5 * static_cast<double>(rng() % 1000) / 1000.0;
    auto sc = make_scenario(make_layout(extent, s, 2), n, rng(), t, rate);
    auto scm = random_scm(sc->layout, n, rng());
    auto cov = build_coverage(sc->layout, scm, sc->slices);
    auto plan = plan_power(sc->inputs(), scm, cov);
    if (!plan.feasible || plan.total_power() == 0.0) continue;
    out.push_back({std::move(sc), std::move(scm), std::move(cov), std::move(plan)});
  }
  return out;
}

Outcome criterion1(const std::vector<Instance>& inst, double elapsed) {
  double worst = 0.0;
  std::size_t pairs = 0;
  for (const auto& x : inst) {
    const auto in = x.sc->inputs();
    for (std::size_t t = 0; t < x.sc->dtd.num_intervals(); ++t)
      for (std::size_t n = 0; n < x.sc->slices.num_slices(); ++n)
        for (std::size_t i = 0; i < x.sc->layout.num_grids(); ++i) {
          if (x.sc->dtd.load(i, n, t) == 0.0) continue;
          ++pairs;
          worst = std::max(worst, rel_err(sinr(x.plan, in, x.scm, x.cov, i, n, t),
                                          x.sc->slices.sinr_target(n)));
        }
  }
  Outcome o;
  o.pass = inst.size() >= 200 && worst <= 1e-9 && elapsed < 30.0;
  o.detail = std::to_string(inst.size()) + " instances, " + std::to_string(pairs) +
             " active pairs, max SINR rel err " + fmt("%.2e", worst) + ", " +
             fmt("%.2f", elapsed) + " s";
  return o;
}

double spectral_radius(const InterferenceSystem& sys) {
  const Eigen::VectorXd diag = sys.a.diagonal();
  Eigen::MatrixXd b = -(diag.cwiseInverse().asDiagonal() * sys.a);
  b.diagonal().setZero();
  return b.eigenvalues().cwiseAbs().maxCoeff();
}

Outcome criterion2(const std::vector<Instance>& inst) {
  double worst = 0.0;
  std::size_t systems = 0, convergent = 0;
  for (const auto& x : inst) {
    for (std::size_t t = 0; t < x.sc->dtd.num_intervals(); ++t) {
      const auto sys = assemble_system(x.sc->inputs(), x.scm, x.cov, t);
      if (sys.size() == 0) continue;
      ++systems;
      const auto sol = solve_power_interval(sys);
      const auto fp = fixed_point_oracle(sys);
      if (!fp.converged) continue;
      ++convergent;
      for (Eigen::Index r = 0; r < sol.powers.size(); ++r)
        worst = std::max(worst, rel_err(sol.powers(r), fp.powers(r)));
    }
  }
  // Scan rho upward on interfering instances until the coupling passes 1.
  std::size_t scanned = 0, above = 0, inconsistent = 0;
  for (const auto& x : inst) {
    if (scanned >= 40) break;
    if (x.sc->layout.num_sbs() == 0) continue;
    const auto base = assemble_system(x.sc->inputs(), x.scm, x.cov, 0);
    if (base.size() < 2 || spectral_radius(base) < 1e-6) continue;
    ++scanned;
    SliceSpec slices = x.sc->slices;
    for (double rho = 1.0; rho < 1e12; rho *= 1.7) {
      slices.sinr_scale = rho;
      PlanningInputs in{x.sc->layout, x.sc->dtd, slices, x.sc->radio, x.sc->gains};
      const auto sys = assemble_system(in, x.scm, x.cov, 0);
      const double radius = spectral_radius(sys);
      if (std::abs(radius - 1.0) < 1e-3) continue;  // too close to call either way
      const bool linear_ok = solve_power_interval(sys).ok();
      const bool oracle_ok = fixed_point_oracle(sys, 1e-13, 200'000).converged;
      if (linear_ok != oracle_ok || linear_ok != (radius < 1.0)) ++inconsistent;
      if (radius > 1.0) {
        ++above;
        break;
      }
    }
  }
  Outcome o;
  o.pass = worst <= 1e-6 && convergent > 0 && inconsistent == 0 && above == scanned && scanned > 0;
  o.detail = std::to_string(convergent) + "/" + std::to_string(systems) +
             " convergent systems, max rel gap " + fmt("%.2e", worst) + "; " +
             std::to_string(above) + "/" + std::to_string(scanned) +
             " rho scans crossed radius 1, " + std::to_string(inconsistent) + " disagreements";
  return o;
}

Outcome criterion3(const std::vector<Instance>& inst) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t pairs = 0, violations = 0, mono_checks = 0, mono_fail = 0;
  double worst = -1e300;
  for (std::size_t k = 0; pairs < 500 && k < 20 * inst.size(); ++k) {
    const auto& x = inst[k % inst.size()];
    const auto in = x.sc->inputs();
    const double tau = x.sc->dtd.interval_duration_s();
    const std::size_t t = rng() % x.sc->dtd.num_intervals();
    auto perturbed = [&]() {
      PowerPlan p = x.plan;
      const double s = 1.0 + u(rng);
      for (std::size_t i = 0; i < p.num_grids(); ++i)
        for (std::size_t n = 0; n < p.num_slices(); ++n)
          p.set_power(i, n, t, x.plan.power(i, n, t) * s * (1.0 + 0.2 * u(rng)));
      return p;
    };
    auto feasible = [&](const PowerPlan& p) {
      if (!validate_power(p, x.cov, x.sc->layout, t)) return false;
      for (std::size_t n = 0; n < p.num_slices(); ++n)
        for (std::size_t i = 0; i < p.num_grids(); ++i)
          if (x.sc->dtd.load(i, n, t) > 0.0 &&
              sinr(p, in, x.scm, x.cov, i, n, t) < x.sc->slices.sinr_target(n))
            return false;
      return true;
    };
    const PowerPlan p1 = perturbed(), p2 = perturbed();
    if (!feasible(p1) || !feasible(p2)) continue;
    PowerPlan mid = p1;
    for (std::size_t i = 0; i < mid.num_grids(); ++i)
      for (std::size_t n = 0; n < mid.num_slices(); ++n)
        mid.set_power(i, n, t, 0.5 * (p1.power(i, n, t) + p2.power(i, n, t)));
    const auto f = [&](const PowerPlan& p) {
      return interval_objective(x.sc->dtd, p, x.cov, x.sc->slices, tau, t);
    };
    const double avg = 0.5 * (f(p1) + f(p2));
    const double gap = (f(mid) - avg) / std::max(1.0, std::abs(avg));
    worst = std::max(worst, gap);
    if (gap > 1e-12) ++violations;
    ++pairs;
    // Single-component increases at p1.
    for (std::size_t i = 0; i < p1.num_grids(); ++i)
      for (std::size_t n = 0; n < p1.num_slices(); ++n) {
        if (p1.power(i, n, t) == 0.0 || rng() % 4 != 0) continue;
        PowerPlan up = p1;
        up.set_power(i, n, t, p1.power(i, n, t) * (1.0 + 1e-3 + u(rng)));
        ++mono_checks;
        if (!(f(up) < f(p1))) ++mono_fail;
      }
  }
  Outcome o;
  o.pass = pairs >= 500 && violations == 0 && mono_checks > 0 && mono_fail == 0;
  o.detail = std::to_string(pairs) + " feasible pairs, max scaled midpoint gap " +
             fmt("%.2e", worst) + ", " + std::to_string(violations) + " violations; " +
             std::to_string(mono_checks) + " single-component increases, " +
             std::to_string(mono_fail) + " non-decreasing";
  return o;
}

Outcome criterion4() {
  std::size_t done = 0, bad = 0, cell_infeasible = 0;
  double mean_saving = 0.0;
  for (std::uint64_t seed = 1; done < 60 && seed < 1000; ++seed) {
    auto sc = make_scenario(make_layout(3, {{2, 0}}, 2), 2, seed, 3, 1.0);
    auto scm = random_scm(sc->layout, 2, seed);
    auto cov = build_coverage(sc->layout, scm, sc->slices);
    auto grid = plan_power(sc->inputs(), scm, cov);
    if (!grid.feasible) continue;
    ++done;
    auto cell = cell_based_power(sc->inputs(), scm, cov);
    const double grid_obj = ee_report(sc->dtd, grid, cov, sc->slices).objective;
    if (!cell.feasible) {
      ++cell_infeasible;  // no power at all meets the targets: +inf power, -inf objective
      continue;
    }
    const double cell_obj = ee_report(sc->dtd, cell, cov, sc->slices).objective;
    const double tol = 1e-12 * cell.total_power();
    if (grid.total_power() > cell.total_power() + tol || grid_obj < cell_obj * (1 - 1e-12)) ++bad;
    mean_saving += 1.0 - grid.total_power() / cell.total_power();
  }
  Outcome o;
  o.pass = done >= 50 && bad == 0;
  const std::size_t both = done - cell_infeasible;
  o.detail = std::to_string(done) + " instances (" + std::to_string(cell_infeasible) +
             " cell-infeasible), " + std::to_string(bad) + " violations, mean grid power saving " +
             fmt("%.1f%%", 100.0 * mean_saving / static_cast<double>(std::max<std::size_t>(1, both)));
  return o;
}

Outcome criterion5() {
  const auto cfg = load_config(config_path("granularity.json"));
  const std::vector<double> diameters = {0.1, 0.05, 0.025, 0.0125};
  std::map<double, std::vector<WindowRow>> rows;
  for (double d : diameters) rows[d] = run_windows(apply_axis(cfg, SweepAxis::grid_diameter, d)).rows;
  // Compare windows that every diameter could serve.
  std::vector<std::size_t> common;
  for (std::size_t w = 0; w < cfg.run.windows; ++w) {
    bool ok = true;
    for (double d : diameters) ok = ok && rows[d][w].feasible;
    if (ok) common.push_back(w);
  }
  std::vector<double> means;
  for (double d : diameters) {
    double s = 0.0;
    for (auto w : common) s += rows[d][w].total_power_w;
    means.push_back(s / static_cast<double>(std::max<std::size_t>(1, common.size())));
  }
  bool monotone = true;
  for (std::size_t k = 1; k < means.size(); ++k) monotone = monotone && means[k] <= means[k - 1];
  const double last = std::abs(means[means.size() - 1] - means[means.size() - 2]) / means[means.size() - 2];
  Outcome o;
  o.pass = !common.empty() && monotone && last < 0.02;
  o.detail = std::to_string(common.size()) + "/" + std::to_string(cfg.run.windows) +
             " windows; mean power (W) at d=";
  for (std::size_t k = 0; k < diameters.size(); ++k)
    o.detail += fmt("%g", diameters[k]) + ":" + fmt("%.4f", means[k]) + (k + 1 < diameters.size() ? ", " : "");
  o.detail += "; last change " + fmt("%.2f%%", 100.0 * last);
  return o;
}

bool trace_ok(const SearchResult& r) {
  for (std::size_t k = 1; k < r.trace.size(); ++k)
    if (r.trace[k].objective < r.trace[k - 1].objective) return false;
  return true;
}

Outcome criterion6() {
  std::size_t runs = 0, bad_trace = 0, not_local = 0, m1_miss = 0, m1 = 0, m2_equal = 0, m2 = 0,
              m2_above = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    for (std::size_t sbs : {1u, 2u}) {
      auto sc = tiny_scenario(sbs, seed);
      auto local = loscs(sc->inputs(), ScmDecision::minimal(sbs, 2), seed);
      auto global = exhaustive_search(sc->inputs());
      ++runs;
      if (!trace_ok(local)) ++bad_trace;
      if (local.feasible && !is_local_optimum(sc->inputs(), local.scm, local.objective)) ++not_local;
      const bool equal = local.objective == global.objective ||
                         rel_err(local.objective, global.objective) < 1e-12;
      if (sbs == 1) {
        ++m1;
        if (!equal) ++m1_miss;
      } else {
        ++m2;
        if (equal) ++m2_equal;
        if (local.objective > global.objective * (1 + 1e-12)) ++m2_above;
      }
    }
  }
  // Desk-scale runs: traces and local optimality.
  const auto desk = load_config(config_path("desk.json"));
  const auto layout = desk.build_layout();
  const auto radio = desk.resolved_radio();
  const GainTable gains(layout);
  for (std::size_t w = 0; w < 10; ++w) {
    const auto dtd = window_dtd(desk, layout, w);
    const PlanningInputs in{layout, dtd, desk.slices, radio, gains};
    auto res = loscs(in, random_scm(layout, 2, w + 1), w + 1);
    ++runs;
    if (!trace_ok(res)) ++bad_trace;
    if (res.feasible && !is_local_optimum(in, res.scm, res.objective)) ++not_local;
  }
  const double rate = static_cast<double>(m2_equal) / static_cast<double>(m2);
  Outcome o;
  o.pass = bad_trace == 0 && not_local == 0 && m1_miss == 0 && m2_above == 0 && rate >= 0.70;
  o.detail = std::to_string(runs) + " runs, " + std::to_string(bad_trace) + " decreasing traces, " +
             std::to_string(not_local) + " non-local outputs; M=1 exact on " +
             std::to_string(m1 - m1_miss) + "/" + std::to_string(m1) + "; M=2 exact on " +
             std::to_string(m2_equal) + "/" + std::to_string(m2) + " (" + fmt("%.0f%%", 100 * rate) + ")";
  return o;
}

Outcome criterion7() {
  std::size_t tiny = 0, bad = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto sc = tiny_scenario(2, seed);
    SearchOptions cz;
    cz.uniform_zoom = true;
    const auto s = exhaustive_search(sc->inputs());
    const auto c = exhaustive_search(sc->inputs(), cz);
    ++tiny;
    if (c.objective > s.objective) ++bad;
  }
  const auto desk = load_config(config_path("desk.json"));
  const auto layout = desk.build_layout();
  const auto radio = desk.resolved_radio();
  const GainTable gains(layout);
  double sz_mean = 0.0, cz_mean = 0.0;
  const std::size_t windows = 20;
  for (std::size_t w = 0; w < windows; ++w) {
    const auto dtd = window_dtd(desk, layout, w);
    const PlanningInputs in{layout, dtd, desk.slices, radio, gains};
    const auto seed = search_seed(desk.run.seed, w);
    sz_mean += loscs(in, ScmDecision::minimal(4, 2), seed).objective / windows;
    cz_mean += cz_search(in, ScmDecision::minimal(4, 2), seed).objective / windows;
  }
  Outcome o;
  o.pass = bad == 0 && sz_mean >= cz_mean;
  o.detail = std::to_string(tiny - bad) + "/" + std::to_string(tiny) +
             " tiny instances with SZ >= CZ; 4-SBS loscs mean SZ+grid " + fmt("%.1f", sz_mean) +
             " vs CZ+grid " + fmt("%.1f", cz_mean);
  return o;
}

struct UlscsStats {
  std::size_t windows = 0, below = 0, strict = 0;
  double mean_gain = 0.0;
};

UlscsStats ulscs_stats(const ScenarioConfig& cfg, const Autoencoder& ae) {
  UlscsStats s;
  for (const auto& r : run_windows(cfg, &ae).rows) {
    ++s.windows;
    if (!r.feasible) continue;
    if (r.objective < r.baseline_objective) ++s.below;
    if (r.objective > r.baseline_objective) ++s.strict;
    s.mean_gain += (r.objective - r.baseline_objective);
  }
  s.mean_gain /= static_cast<double>(s.windows);
  return s;
}

ScenarioConfig ulscs_config() {
  auto cfg = load_config(config_path("desk.json"));
  cfg.run.solver = Solver::ulscs;
  cfg.run.record_wall_time = false;
  return cfg;
}

Outcome criterion8(const Autoencoder& ae) {
  auto cfg = ulscs_config();
  cfg.run.windows = 100;
  cfg.run.warmup_windows = 50;
  const auto s = ulscs_stats(cfg, ae);
  Outcome o;
  o.pass = s.windows == 100 && s.below == 0 && s.strict >= 1;
  o.detail = std::to_string(s.windows) + " windows after 50 warm-up records: " +
             std::to_string(s.below) + " below loscs, " + std::to_string(s.strict) +
             " strict improvements, mean gain " + fmt("%.1f", s.mean_gain);
  return o;
}

Outcome criterion9(const Autoencoder& ae) {
  auto base = ulscs_config();
  base.run.windows = 50;
  base.run.warmup_windows = 200;
  std::vector<double> sizes = {10, 50, 200}, ks = {1, 3, 5};
  std::vector<double> by_size, by_k;
  for (double c : sizes) by_size.push_back(ulscs_stats(apply_axis(base, SweepAxis::capacity, c), ae).mean_gain);
  base.run.capacity = 200;
  for (double k : ks) by_k.push_back(ulscs_stats(apply_axis(base, SweepAxis::k, k), ae).mean_gain);
  const double rs = spearman(sizes, by_size), rk = spearman(ks, by_k);
  Outcome o;
  o.pass = rs >= 0.0 && rk >= 0.0;
  o.detail = "store size {10,50,200}: mean gain " + fmt("%.1f", by_size[0]) + ", " +
             fmt("%.1f", by_size[1]) + ", " + fmt("%.1f", by_size[2]) + " (rho " + fmt("%.2f", rs) +
             "); k {1,3,5}: " + fmt("%.1f", by_k[0]) + ", " + fmt("%.1f", by_k[1]) + ", " +
             fmt("%.1f", by_k[2]) + " (rho " + fmt("%.2f", rk) + ")";
  return o;
}

Outcome criterion10(Autoencoder& trained) {
  // Gradient check on random small networks.
  const Activation acts[] = {Activation::elu, Activation::tanh, Activation::sigmoid,
                             Activation::identity, Activation::elu};
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 10; ++k) {
    std::vector<std::size_t> sizes = {6 + k % 4, 4 + k % 2, 2 + k % 2};
    Autoencoder ae(sizes, acts[k % 5], 100 + k);
    worst = std::max(worst, gradient_check(ae, random_batch(sizes[0], 3, 200 + k)));
  }
  // Training on the desk training set.
  const auto cfg = load_config(config_path("desk.json"));
  const auto layout = cfg.build_layout();
  TrainResult report;
  trained = build_autoencoder(cfg, layout, &report);
  const auto& h = report.loss_history;
  const std::size_t epochs = std::min<std::size_t>(50, h.size() - 1);
  const double drop = 1.0 - h[epochs] / h.front();
  // Determinism and cosine properties.
  TrainResult again;
  const Autoencoder twin = build_autoencoder(cfg, layout, &again);
  const auto a = window_dtd(cfg, layout, 0), b = window_dtd(cfg, layout, 1);
  const Eigen::VectorXd za = trained.encode(a);
  bool exact = twin == trained && again.loss_history == h && trained.encode(a) == za &&
               similarity(trained, a, a) == 1.0 && cosine_similarity(za, 2.5 * za) == 1.0 &&
               similarity(trained, a, b) == similarity(twin, a, b);
  Outcome o;
  o.pass = worst < 1e-4 && drop >= 0.30 && exact;
  o.detail = "max gradient rel err " + fmt("%.2e", worst) + "; loss " + fmt("%.4f", h.front()) +
             " -> " + fmt("%.4f", h[epochs]) + " (" + fmt("%.1f%%", 100 * drop) + " drop in " +
             std::to_string(epochs) + " epochs); determinism and cosine checks " +
             (exact ? "hold" : "FAIL");
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  };

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Instance> inst;
  report(1, "SINR equality at the closed-form power", [&] {
    inst = feasible_instances(200, 2024);
    return criterion1(inst, seconds_since(t0));
  });
  report(2, "linear solve vs fixed-point oracle", [&] { return criterion2(inst); });
  report(3, "convexity and monotonicity of the interval objective", [&] { return criterion3(inst); });
  report(4, "grid-based vs cell-based power", criterion4);
  report(5, "grid granularity trend", criterion5);
  report(6, "local search correctness", criterion6);
  report(7, "slice-aware vs cell zooming", criterion7);
  Autoencoder ae({2, 1}, Activation::identity, 0);
  report(10, "autoencoder", [&] { return criterion10(ae); });
  report(8, "retrieval-assisted search dominance", [&] { return criterion8(ae); });
  report(9, "store size and k trends", [&] { return criterion9(ae); });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "SOME FAIL", failures);
  return failures == 0 ? 0 : 1;
}

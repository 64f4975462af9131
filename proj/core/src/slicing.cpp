#include "ranplan/slicing.hpp"

#include <algorithm>
#include <string>

#include "ranplan/error.hpp"

namespace ranplan {

void SliceSpec::validate() const {
  const std::size_t n = sinr_min_db.size();
  if (n == 0) throw Error(ErrorCode::invalid_argument, "at least one slice required");
  if (rb_per_bit.size() != n || ee_weight.size() != n) {
    throw Error(ErrorCode::dimension_mismatch, "per-slice lists differ in length");
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (!(rb_per_bit[s] > 0.0)) throw Error(ErrorCode::invalid_argument, "eta must be positive");
    if (!(ee_weight[s] > 0.0)) throw Error(ErrorCode::invalid_argument, "lambda must be positive");
    if (!std::isfinite(sinr_min_db[s])) {
      throw Error(ErrorCode::invalid_argument, "SINR target must be finite");
    }
  }
  if (!(sinr_scale > 0.0)) throw Error(ErrorCode::invalid_argument, "rho must be positive");
}

ScmDecision ScmDecision::minimal(std::size_t num_sbs, std::size_t num_slices) {
  ScmDecision d;
  d.l_full.assign(num_sbs, 1);
  d.l_reduced.assign(num_sbs, 1);
  d.zoom.assign(num_sbs, std::vector<std::uint8_t>(num_slices, 1));
  return d;
}

SbsConfig ScmDecision::sbs_config(std::size_t k) const {
  return {l_full.at(k), l_reduced.at(k), zoom.at(k)};
}

ScmDecision ScmDecision::with_sbs(std::size_t k, const SbsConfig& cfg) const {
  ScmDecision d = *this;
  d.l_full.at(k) = cfg.l_full;
  d.l_reduced.at(k) = cfg.l_reduced;
  d.zoom.at(k) = cfg.zoom;
  return d;
}

ScmDecision ScmDecision::canonical() const {
  ScmDecision d = *this;
  for (std::size_t k = 0; k < d.num_sbs(); ++k) {
    if (d.l_full[k] == d.l_reduced[k]) std::fill(d.zoom[k].begin(), d.zoom[k].end(), 1);
  }
  return d;
}

void ScmDecision::validate(const NetworkLayout& layout, std::size_t num_slices) const {
  const std::size_t m = layout.num_sbs();
  if (l_full.size() != m || l_reduced.size() != m || zoom.size() != m) {
    throw Error(ErrorCode::invalid_decision, "decision size does not match the SBS count");
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (zoom[k].size() != num_slices) {
      throw Error(ErrorCode::invalid_decision, "zoom vector size does not match N");
    }
    if (l_reduced[k] < 1 || l_full[k] > layout.max_sc_layers()) {
      throw Error(ErrorCode::invalid_decision,
                  "SC radius of SBS " + std::to_string(k + 1) + " outside [1, L_max]");
    }
    if (l_reduced[k] > l_full[k]) {
      throw Error(ErrorCode::invalid_decision,
                  "reduced radius exceeds full radius at SBS " + std::to_string(k + 1));
    }
    for (auto a : zoom[k]) {
      if (a > 1) throw Error(ErrorCode::invalid_decision, "zoom entries must be binary");
    }
  }
  if (!validate_non_overlap(layout, l_full)) {
    throw Error(ErrorCode::invalid_decision, "SBS coverage areas overlap");
  }
}

int sc_radius(const ScmDecision& scm, std::size_t k, std::size_t n) {
  return scm.zoom.at(k).at(n) ? scm.l_full.at(k) : scm.l_reduced.at(k);
}

CoverageMap build_coverage(const NetworkLayout& layout, const ScmDecision& scm,
                           const SliceSpec& slices) {
  const std::size_t num_slices = slices.num_slices();
  scm.validate(layout, num_slices);

  const std::size_t grids = layout.num_grids();
  const std::size_t num_bs = layout.num_bs();
  CoverageMap cov;
  cov.num_slices_ = num_slices;
  cov.sc_sets_.assign(num_bs, std::vector<std::vector<std::size_t>>(num_slices));
  cov.ring_sets_.assign(num_bs, {});
  cov.assoc_.assign(grids * num_slices, 0);
  cov.territory_.assign(grids, 0);
  cov.ring_owner_.assign(grids, 0);

  for (std::size_t i = 0; i < grids; ++i) {
    for (std::size_t m = 1; m < num_bs; ++m) {
      if (layout.layer_distance(m, i) <= scm.l_full[m - 1]) {
        cov.territory_[i] = m;
        break;
      }
    }
    const std::size_t owner = cov.territory_[i];
    const int d = owner ? layout.layer_distance(owner, i) : 0;
    if (owner && d > scm.l_reduced[owner - 1]) {
      cov.ring_owner_[i] = owner;
      cov.ring_sets_[owner].push_back(i);
    }
    for (std::size_t n = 0; n < num_slices; ++n) {
      std::size_t server = 0;
      if (owner && d <= sc_radius(scm, owner - 1, n)) server = owner;
      cov.assoc_[i * num_slices + n] = server;
      cov.sc_sets_[server][n].push_back(i);
    }
  }
  return cov;
}

RbBudgetCheck check_rb_budgets(const CoverageMap& coverage, const DtdInstance& dtd,
                               const SliceSpec& slices, double rb_budget) {
  if (dtd.num_grids() != coverage.num_grids() ||
      dtd.num_slices() != coverage.num_slices() ||
      slices.num_slices() != coverage.num_slices()) {
    throw Error(ErrorCode::dimension_mismatch, "coverage, DTD and slices disagree");
  }
  auto rbs_over = [&](std::span<const std::size_t> grids, std::size_t n) {
    double total = 0.0;
    for (auto i : grids) {
      for (std::size_t t = 0; t < dtd.num_intervals(); ++t) total += dtd.load(i, n, t);
    }
    return total * slices.rb_per_bit[n];
  };

  RbBudgetCheck out;
  const std::size_t num_bs = coverage.num_bs();
  out.sbs_rbs.assign(num_bs - 1, 0.0);
  out.ring_rbs.assign(num_bs - 1, 0.0);
  for (std::size_t n = 0; n < coverage.num_slices(); ++n) {
    out.mbs_rbs += rbs_over(coverage.sc_set(0, n), n);
    for (std::size_t m = 1; m < num_bs; ++m) {
      out.sbs_rbs[m - 1] += rbs_over(coverage.sc_set(m, n), n);
      out.ring_rbs[m - 1] += rbs_over(coverage.ring_set(m), n);
    }
  }
  out.mbs = out.mbs_rbs <= rb_budget;
  for (std::size_t k = 0; k + 1 < num_bs; ++k) {
    out.sbs = out.sbs && out.sbs_rbs[k] <= rb_budget;
    out.ring = out.ring && out.ring_rbs[k] <= rb_budget;
  }
  return out;
}

int interference_indicator(const CoverageMap& coverage, const ScmDecision& scm,
                           std::size_t i, std::size_t n, std::size_t i2,
                           std::size_t n2) {
  const std::size_t m1 = coverage.assoc(i, n);
  const std::size_t m2 = coverage.assoc(i2, n2);
  if (m1 == m2) return 0;
  // SBS full-size SC for n vs the macro inside that SBS's ring for n2.
  if (m1 != 0 && coverage.in_ring(m1, i2) && scm.zoom[m1 - 1][n] == 1 &&
      scm.zoom[m1 - 1][n2] == 0) {
    return 0;
  }
  // Mirror case: victim in the ring, interferer in the SBS's full-size SC.
  if (m2 != 0 && coverage.in_ring(m2, i) && scm.zoom[m2 - 1][n] == 0 &&
      scm.zoom[m2 - 1][n2] == 1) {
    return 0;
  }
  return 1;
}

std::vector<SbsConfig> sbs_config_space(int max_layers, std::size_t num_slices,
                                        CandidateOptions options) {
  std::vector<std::vector<std::uint8_t>> zooms;
  if (options.uniform_zoom) {
    zooms.emplace_back(num_slices, 0);
    zooms.emplace_back(num_slices, 1);
  } else {
    const std::size_t combos = std::size_t{1} << num_slices;
    for (std::size_t bits = 0; bits < combos; ++bits) {
      std::vector<std::uint8_t> z(num_slices);
      for (std::size_t n = 0; n < num_slices; ++n) z[n] = (bits >> (num_slices - 1 - n)) & 1U;
      zooms.push_back(std::move(z));
    }
  }
  std::vector<SbsConfig> out;
  for (int l_f = 1; l_f <= max_layers; ++l_f) {
    for (int l_r = 1; l_r <= l_f; ++l_r) {
      if (options.dedupe && l_r == l_f) {
        out.push_back({l_f, l_r, std::vector<std::uint8_t>(num_slices, 1)});
        continue;
      }
      for (const auto& z : zooms) out.push_back({l_f, l_r, z});
    }
  }
  return out;
}

std::vector<SbsConfig> enumerate_candidates(const NetworkLayout& layout,
                                            const ScmDecision& scm, std::size_t k,
                                            CandidateOptions options) {
  const auto sbs = layout.sbs();
  if (k >= sbs.size()) throw Error(ErrorCode::index_out_of_range, "SBS index out of range");
  auto fits = [&](int l_f) {
    for (std::size_t j = 0; j < sbs.size(); ++j) {
      if (j == k) continue;
      if (hex_distance(sbs[k].coord, sbs[j].coord) < l_f + scm.l_full[j]) return false;
    }
    return true;
  };
  auto out = sbs_config_space(layout.max_sc_layers(), scm.num_slices(), options);
  std::erase_if(out, [&](const SbsConfig& c) { return !fits(c.l_full); });
  return out;
}

}  // namespace ranplan

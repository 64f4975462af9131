#include "ranplan/metrics.hpp"

#include "ranplan/error.hpp"

namespace ranplan {

double EnergyTensor::slice_total(std::size_t n) const {
  double s = 0.0;
  for (std::size_t m = 0; m < bs_; ++m) {
    for (std::size_t t = 0; t < intervals_; ++t) s += at(m, n, t);
  }
  return s;
}

EnergyTensor energy(const PowerPlan& plan, const CoverageMap& coverage, double tau_s) {
  EnergyTensor e(coverage.num_bs(), coverage.num_slices(), plan.num_intervals());
  for (std::size_t m = 0; m < coverage.num_bs(); ++m) {
    for (std::size_t n = 0; n < coverage.num_slices(); ++n) {
      for (std::size_t t = 0; t < plan.num_intervals(); ++t) {
        double bs_power = 0.0;
        for (auto i : coverage.sc_set(m, n)) bs_power += plan.power(i, n, t);
        e.at(m, n, t) = tau_s * bs_power;
      }
    }
  }
  return e;
}

namespace {

double served_bits(const DtdInstance& dtd, const CoverageMap& coverage, std::size_t n) {
  double w = 0.0;
  for (std::size_t m = 0; m < coverage.num_bs(); ++m) {
    for (auto i : coverage.sc_set(m, n)) {
      for (std::size_t t = 0; t < dtd.num_intervals(); ++t) w += dtd.load(i, n, t);
    }
  }
  return w;
}

}  // namespace

std::vector<double> slice_ee(const DtdInstance& dtd, const PowerPlan& plan,
                             const CoverageMap& coverage, const SliceSpec& slices,
                             double tau_s) {
  const auto e = energy(plan, coverage, tau_s);
  std::vector<double> xi(slices.num_slices(), 0.0);
  for (std::size_t n = 0; n < slices.num_slices(); ++n) {
    const double w = served_bits(dtd, coverage, n);
    if (w == 0.0) continue;
    const double energy_j = e.slice_total(n);
    if (!(energy_j > 0.0)) {
      throw Error(ErrorCode::invalid_argument, "slice with traffic but zero energy");
    }
    xi[n] = w / (energy_j * slices.rb_per_bit[n] * w);
  }
  return xi;
}

double objective(std::span<const double> per_slice_ee, std::span<const double> weights) {
  if (per_slice_ee.size() != weights.size()) {
    throw Error(ErrorCode::dimension_mismatch, "one weight per slice expected");
  }
  double d = 0.0;
  for (std::size_t n = 0; n < weights.size(); ++n) d += weights[n] * per_slice_ee[n];
  return d;
}

EeReport ee_report(const DtdInstance& dtd, const PowerPlan& plan,
                   const CoverageMap& coverage, const SliceSpec& slices) {
  EeReport r;
  const double tau = dtd.interval_duration_s();
  r.per_bs_slice_energy = energy(plan, coverage, tau);
  r.per_slice_ee = slice_ee(dtd, plan, coverage, slices, tau);
  for (std::size_t n = 0; n < slices.num_slices(); ++n) {
    const double w = served_bits(dtd, coverage, n);
    r.per_slice_bits.push_back(w);
    r.per_slice_rbs.push_back(w * slices.rb_per_bit[n]);
    r.per_slice_energy_j.push_back(r.per_bs_slice_energy.slice_total(n));
  }
  r.objective = objective(r.per_slice_ee, slices.ee_weight);
  return r;
}

double interval_objective(const DtdInstance& dtd, const PowerPlan& plan,
                          const CoverageMap& coverage, const SliceSpec& slices,
                          double tau_s, std::size_t t) {
  double delta_t = 0.0;
  for (std::size_t n = 0; n < slices.num_slices(); ++n) {
    double bits = 0.0;
    double energy_j = 0.0;
    for (std::size_t m = 0; m < coverage.num_bs(); ++m) {
      for (auto i : coverage.sc_set(m, n)) {
        bits += dtd.load(i, n, t);
        energy_j += tau_s * plan.power(i, n, t);
      }
    }
    if (bits == 0.0) continue;
    if (!(energy_j > 0.0)) {
      throw Error(ErrorCode::invalid_argument, "interval with traffic but zero energy");
    }
    const double chi = bits / (bits * slices.rb_per_bit[n]);
    delta_t += slices.ee_weight[n] * chi / energy_j;
  }
  return delta_t;
}

}  // namespace ranplan

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ranplan/power.hpp"
#include "ranplan/slicing.hpp"
#include "ranplan/traffic.hpp"

namespace ranplan {

/// E[m][n][t]: energy spent by BS m on slice n during interval t, in joules.
class EnergyTensor {
 public:
  EnergyTensor(std::size_t bs, std::size_t slices, std::size_t intervals)
      : bs_(bs), slices_(slices), intervals_(intervals), e_(bs * slices * intervals, 0.0) {}

  double at(std::size_t m, std::size_t n, std::size_t t) const {
    return e_[(m * slices_ + n) * intervals_ + t];
  }
  double& at(std::size_t m, std::size_t n, std::size_t t) {
    return e_[(m * slices_ + n) * intervals_ + t];
  }
  std::size_t num_bs() const { return bs_; }
  std::size_t num_slices() const { return slices_; }
  std::size_t num_intervals() const { return intervals_; }

  double slice_total(std::size_t n) const;

 private:
  std::size_t bs_, slices_, intervals_;
  std::vector<double> e_;
};

struct EeReport {
  std::vector<double> per_slice_ee;        // xi_n, bit/RB/J
  std::vector<double> per_slice_energy_j;  // E_n
  std::vector<double> per_slice_bits;      // w_n
  std::vector<double> per_slice_rbs;       // C_n
  EnergyTensor per_bs_slice_energy{0, 0, 0};
  double objective = 0.0;                  // sum lambda_n xi_n
};

EnergyTensor energy(const PowerPlan& plan, const CoverageMap& coverage, double tau_s);

/// xi_n = w_n / (E_n C_n). A slice without traffic scores 0.
std::vector<double> slice_ee(const DtdInstance& dtd, const PowerPlan& plan,
                             const CoverageMap& coverage, const SliceSpec& slices,
                             double tau_s);

double objective(std::span<const double> per_slice_ee, std::span<const double> weights);

EeReport ee_report(const DtdInstance& dtd, const PowerPlan& plan,
                   const CoverageMap& coverage, const SliceSpec& slices);

/// Per-interval efficiency sum_n lambda_n chi_n / varsigma_n, where
/// varsigma_n = tau * sum p and chi_n = served bits / reserved RBs.
double interval_objective(const DtdInstance& dtd, const PowerPlan& plan,
                          const CoverageMap& coverage, const SliceSpec& slices,
                          double tau_s, std::size_t t);

}  // namespace ranplan

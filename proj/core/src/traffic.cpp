#include "ranplan/traffic.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "ranplan/error.hpp"
#include "ranplan/io.hpp"

namespace ranplan {

DtdInstance::DtdInstance(std::size_t num_grids, std::size_t num_slices,
                         std::size_t num_intervals, double interval_duration_s)
    : grids_(num_grids),
      slices_(num_slices),
      intervals_(num_intervals),
      tau_(interval_duration_s),
      loads_(num_grids * num_slices * num_intervals, 0.0) {
  if (num_grids == 0 || num_slices == 0 || num_intervals == 0) {
    throw Error(ErrorCode::invalid_argument, "DTD dimensions must be positive");
  }
  if (!(interval_duration_s > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "interval duration must be positive");
  }
}

void DtdInstance::set_load(std::size_t i, std::size_t n, std::size_t t, double bits) {
  if (i >= grids_ || n >= slices_ || t >= intervals_) {
    throw Error(ErrorCode::index_out_of_range, "DTD index out of range");
  }
  if (!(bits >= 0.0) || !std::isfinite(bits)) {
    throw Error(ErrorCode::invalid_argument, "loads must be finite and nonnegative");
  }
  loads_[offset(i, n, t)] = bits;
}

void DtdInstance::add_load(std::size_t i, std::size_t n, std::size_t t, double bits) {
  set_load(i, n, t, load(i, n, t) + bits);
}

double DtdInstance::slice_total(std::size_t n) const {
  double total = 0.0;
  for (std::size_t i = 0; i < grids_; ++i) {
    for (std::size_t t = 0; t < intervals_; ++t) total += load(i, n, t);
  }
  return total;
}

void TrafficParams::validate() const {
  if (!(ppp_rate_per_grid >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "PPP rate must be nonnegative");
  }
  if (!(load_low_bits > 0.0) || !(load_high_bits >= load_low_bits)) {
    throw Error(ErrorCode::invalid_argument, "per-UT load range must satisfy 0 < low <= high");
  }
  if (num_intervals == 0 || !(interval_duration_s > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "interval count and duration must be positive");
  }
  if (!(load_quantum_bits > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "load quantum must be positive");
  }
}

namespace {

// Draws the per-interval loads of one UT.
std::vector<double> draw_ut_loads(std::mt19937_64& rng, const TrafficParams& p) {
  std::uniform_real_distribution<double> mean_dist(p.load_low_bits, p.load_high_bits);
  const double mean_bits = mean_dist(rng);
  std::poisson_distribution<long long> quanta(mean_bits / p.load_quantum_bits);
  std::vector<double> loads(p.num_intervals);
  for (auto& l : loads) l = static_cast<double>(quanta(rng)) * p.load_quantum_bits;
  return loads;
}

}  // namespace

DtdInstance generate_dtd(const NetworkLayout& layout, std::size_t num_slices,
                         const TrafficParams& params) {
  params.validate();
  if (num_slices == 0) {
    throw Error(ErrorCode::invalid_argument, "at least one slice required");
  }
  if (layout.num_grids() == 0) {
    throw Error(ErrorCode::invalid_argument, "zero-area layout");
  }
  DtdInstance dtd(layout.num_grids(), num_slices, params.num_intervals,
                  params.interval_duration_s);
  std::mt19937_64 rng(params.seed);
  std::poisson_distribution<int> ut_count(params.ppp_rate_per_grid);
  for (std::size_t i = 0; i < layout.num_grids(); ++i) {
    for (std::size_t n = 0; n < num_slices; ++n) {
      const int count = params.ppp_rate_per_grid > 0.0 ? ut_count(rng) : 0;
      for (int u = 0; u < count; ++u) {
        const auto loads = draw_ut_loads(rng, params);
        for (std::size_t t = 0; t < loads.size(); ++t) dtd.add_load(i, n, t, loads[t]);
      }
    }
  }
  return dtd;
}

UtField generate_ut_field(double radius_km, double reference_diameter_km,
                          std::size_t num_slices, const TrafficParams& params) {
  params.validate();
  if (!(radius_km > 0.0) || !(reference_diameter_km > 0.0) || num_slices == 0) {
    throw Error(ErrorCode::invalid_argument, "UT field needs positive area and slices");
  }
  const double half = 0.5 * reference_diameter_km;
  const double hex_area = 1.5 * std::numbers::sqrt3 * half * half;
  const double density = params.ppp_rate_per_grid / hex_area;
  const double disk_area = std::numbers::pi * radius_km * radius_km;

  UtField field;
  field.num_slices = num_slices;
  field.num_intervals = params.num_intervals;
  field.interval_duration_s = params.interval_duration_s;
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t n = 0; n < num_slices; ++n) {
    std::poisson_distribution<long long> count_dist(density * disk_area);
    const long long count = density > 0.0 ? count_dist(rng) : 0;
    for (long long u = 0; u < count; ++u) {
      const double rho = radius_km * std::sqrt(unit(rng));
      const double phi = 2.0 * std::numbers::pi * unit(rng);
      UtField::Ut ut;
      ut.pos_km = {rho * std::cos(phi), rho * std::sin(phi)};
      ut.slice = n;
      ut.interval_loads_bits = draw_ut_loads(rng, params);
      field.uts.push_back(std::move(ut));
    }
  }
  return field;
}

DtdInstance bin_ut_field(const UtField& field, const NetworkLayout& layout) {
  DtdInstance dtd(layout.num_grids(), field.num_slices, field.num_intervals,
                  field.interval_duration_s);
  const double d = layout.grid_diameter_km();
  for (const auto& ut : field.uts) {
    const HexCoord c = hex_round({ut.pos_km.x / d, ut.pos_km.y / d});
    const auto idx = layout.grid_index(c);
    if (!idx) continue;
    for (std::size_t t = 0; t < ut.interval_loads_bits.size(); ++t) {
      dtd.add_load(*idx, ut.slice, t, ut.interval_loads_bits[t]);
    }
  }
  return dtd;
}

void write_dtd(std::ostream& os, const DtdInstance& dtd) {
  os << "DTD " << dtd.num_grids() << ' ' << dtd.num_slices() << ' '
     << dtd.num_intervals() << ' ' << format_double(dtd.interval_duration_s()) << '\n';
  for (std::size_t i = 0; i < dtd.num_grids(); ++i) {
    for (std::size_t n = 0; n < dtd.num_slices(); ++n) {
      for (std::size_t t = 0; t < dtd.num_intervals(); ++t) {
        os << i << ' ' << n << ' ' << t << ' ' << format_double(dtd.load(i, n, t)) << '\n';
      }
    }
  }
}

DtdInstance read_dtd(std::istream& is) {
  std::string magic, sg, sn, st, stau;
  if (!(is >> magic >> sg >> sn >> st >> stau) || magic != "DTD") {
    throw Error(ErrorCode::parse_error, "missing DTD header");
  }
  const auto grids = parse_int(sg);
  const auto slices = parse_int(sn);
  const auto intervals = parse_int(st);
  if (grids <= 0 || slices <= 0 || intervals <= 0) {
    throw Error(ErrorCode::parse_error, "nonpositive DTD dimension");
  }
  DtdInstance dtd(static_cast<std::size_t>(grids), static_cast<std::size_t>(slices),
                  static_cast<std::size_t>(intervals), parse_double(stau));
  for (std::size_t i = 0; i < dtd.num_grids(); ++i) {
    for (std::size_t n = 0; n < dtd.num_slices(); ++n) {
      for (std::size_t t = 0; t < dtd.num_intervals(); ++t) {
        std::string si, sn2, st2, sv;
        if (!(is >> si >> sn2 >> st2 >> sv)) {
          throw Error(ErrorCode::parse_error, "truncated DTD body");
        }
        if (parse_int(si) != static_cast<long long>(i) ||
            parse_int(sn2) != static_cast<long long>(n) ||
            parse_int(st2) != static_cast<long long>(t)) {
          throw Error(ErrorCode::parse_error, "DTD entries out of order");
        }
        const double v = parse_double(sv);
        if (!(v >= 0.0) || !std::isfinite(v)) {
          throw Error(ErrorCode::parse_error, "negative or non-finite load");
        }
        dtd.set_load(i, n, t, v);
      }
    }
  }
  std::string extra;
  if (is >> extra) {
    throw Error(ErrorCode::parse_error, "trailing data after DTD body");
  }
  return dtd;
}

void save_dtd(const DtdInstance& dtd, const std::filesystem::path& path) {
  std::ostringstream ss;
  write_dtd(ss, dtd);
  write_text_file(path, ss.str());
}

DtdInstance load_dtd(const std::filesystem::path& path) {
  std::istringstream ss(read_text_file(path));
  return read_dtd(ss);
}

DtdInstance load_dtd(const std::filesystem::path& path, std::size_t num_grids,
                     std::size_t num_slices) {
  auto dtd = load_dtd(path);
  if (dtd.num_grids() != num_grids || dtd.num_slices() != num_slices) {
    throw Error(ErrorCode::dimension_mismatch,
                "DTD has " + std::to_string(dtd.num_grids()) + " grids x " +
                    std::to_string(dtd.num_slices()) + " slices, layout expects " +
                    std::to_string(num_grids) + " x " + std::to_string(num_slices));
  }
  return dtd;
}

}  // namespace ranplan

#include "ranplan/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ranplan/error.hpp"
#include "ranplan/io.hpp"
#include "ranplan/metrics.hpp"

namespace ranplan {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ (stream * 0x632be59bd9b4e019ULL)) + index);
}

constexpr std::uint64_t kTrafficStream = 1;
constexpr std::uint64_t kSearchStream = 2;
constexpr std::uint64_t kTrainingStream = 3;
// Warm-up windows draw from their own index range so they never repeat a
// measured window.
constexpr std::size_t kWarmupOffset = 1'000'000;

DtdInstance dtd_with_seed(const ScenarioConfig& config, const NetworkLayout& layout,
                          std::uint64_t seed) {
  TrafficParams p = config.traffic.params;
  p.seed = seed;
  const std::size_t n = config.slices.num_slices();
  if (config.traffic.mode == TrafficMode::grid) return generate_dtd(layout, n, p);
  const auto field =
      generate_ut_field(*config.layout.extent_km, config.traffic.reference_diameter_km, n, p);
  return bin_ut_field(field, layout);
}

}  // namespace

ScmDecision fixed_decision(const ScenarioConfig& config, const NetworkLayout& layout) {
  int l = config.run.fixed_sc_layers
              ? *config.run.fixed_sc_layers
              : std::max(1, static_cast<int>(std::lround(*config.run.fixed_sc_radius_km /
                                                         layout.center_spacing_km())));
  l = std::min(l, layout.max_sc_layers());
  ScmDecision scm = ScmDecision::minimal(layout.num_sbs(), config.slices.num_slices());
  // Shrink uniformly until the full-size disks no longer overlap.
  for (; l >= 1; --l) {
    std::fill(scm.l_full.begin(), scm.l_full.end(), l);
    if (validate_non_overlap(layout, scm.l_full)) break;
  }
  scm.l_reduced = scm.l_full;
  return scm;
}

namespace {

WindowRow make_row(const ScenarioConfig& config, std::size_t window, std::uint64_t seed,
                   const PlanningInputs& in, const SearchResult& res, double baseline,
                   double wall) {
  WindowRow row;
  row.window = window;
  row.scheme = std::string(to_string(config.run.scheme));
  row.solver = std::string(to_string(config.run.solver));
  row.seed = seed;
  row.feasible = res.feasible;
  row.evaluations = res.evaluations;
  row.wall_time_s = config.run.record_wall_time ? wall : 0.0;
  row.baseline_objective = baseline;
  if (res.feasible) {
    const auto im = config.run.scheme == Scheme::cz_cell ? ImScheme::cell : ImScheme::grid;
    if (auto bad = revalidate(in, res.scm, res.plan, im)) {
      row.feasible = false;
      row.infeasibility = "revalidation_failed: " + *bad;
      return row;
    }
    const auto coverage = build_coverage(in.layout, res.scm, in.slices);
    const auto report = ee_report(in.dtd, res.plan, coverage, in.slices);
    row.xi = report.per_slice_ee;
    row.objective = res.objective;
    row.total_power_w = res.plan.total_power();
  } else {
    row.xi.assign(in.slices.num_slices(), 0.0);
    row.infeasibility =
        res.plan.infeasibility ? std::string(to_string(*res.plan.infeasibility)) : "infeasible";
  }
  return row;
}

}  // namespace

std::uint64_t traffic_seed(std::uint64_t seed, std::size_t window) {
  return derive(seed, kTrafficStream, window);
}

std::uint64_t search_seed(std::uint64_t seed, std::size_t window) {
  return derive(seed, kSearchStream, window);
}

DtdInstance window_dtd(const ScenarioConfig& config, const NetworkLayout& layout,
                       std::size_t window) {
  return dtd_with_seed(config, layout, traffic_seed(config.run.seed, window));
}

SearchOptions scheme_options(Scheme scheme, std::size_t exhaustive_cap) {
  SearchOptions o;
  o.exhaustive_cap = exhaustive_cap;
  o.uniform_zoom = scheme != Scheme::sz_grid;
  o.im = scheme == Scheme::cz_cell ? ImScheme::cell : ImScheme::grid;
  return o;
}

std::optional<std::string> revalidate(const PlanningInputs& in, const ScmDecision& scm,
                                      const PowerPlan& plan, ImScheme im) {
  std::optional<CoverageMap> cov;
  try {
    cov = build_coverage(in.layout, scm, in.slices);
  } catch (const Error& e) {
    return std::string("decision: ") + e.what();
  }
  const auto rb = check_rb_budgets(*cov, in.dtd, in.slices, in.radio.rb_budget);
  if (!rb.sbs) return "SBS RB budget exceeded";
  if (!rb.mbs) return "MBS RB budget exceeded";
  if (!rb.ring) return "ring RB budget exceeded";
  for (std::size_t t = 0; t < in.dtd.num_intervals(); ++t) {
    if (!validate_power(plan, *cov, in.layout, t)) {
      return "power budget exceeded in interval " + std::to_string(t);
    }
    for (std::size_t i = 0; i < in.dtd.num_grids(); ++i) {
      for (std::size_t n = 0; n < in.dtd.num_slices(); ++n) {
        if (!(in.dtd.load(i, n, t) > 0.0)) continue;
        const double p = plan.power(i, n, t);
        if (!(p > 0.0)) return "non-positive power at an active grid";
        const double target = in.slices.sinr_target(n);
        const double rel = sinr(plan, in, scm, *cov, i, n, t) / target - 1.0;
        const bool ok = im == ImScheme::grid ? std::abs(rel) <= 1e-6 : rel >= -1e-6;
        if (!ok) {
          return "SINR target missed at grid " + std::to_string(i) + ", slice " +
                 std::to_string(n) + ", interval " + std::to_string(t);
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<DtdInstance> training_set(const ScenarioConfig& config, const NetworkLayout& layout) {
  std::vector<DtdInstance> out;
  out.reserve(config.learning.train_instances);
  for (std::size_t s = 0; s < config.learning.train_instances; ++s) {
    out.push_back(dtd_with_seed(config, layout, derive(config.learning.seed, kTrainingStream, s)));
  }
  return out;
}

Autoencoder build_autoencoder(const ScenarioConfig& config, const NetworkLayout& layout,
                              TrainResult* report) {
  const std::size_t input =
      layout.num_grids() * config.slices.num_slices() * config.traffic.params.num_intervals;
  if (config.learning.model_path) {
    auto ae = Autoencoder::load(*config.learning.model_path);
    if (ae.input_size() != input) {
      throw Error(ErrorCode::config_error,
                  "learning.model_path: model input size " + std::to_string(ae.input_size()) +
                      " does not match I*N*T = " + std::to_string(input));
    }
    return ae;
  }
  std::vector<std::size_t> sizes{input};
  sizes.insert(sizes.end(), config.learning.hidden.begin(), config.learning.hidden.end());
  sizes.push_back(config.learning.latent);
  if (config.learning.latent >= input) {
    throw Error(ErrorCode::config_error, "learning.latent must be below I*N*T");
  }
  Autoencoder ae(sizes, config.learning.activation, config.learning.seed);
  auto result = train(ae, training_set(config, layout), config.learning.train, config.learning.seed);
  if (report) *report = std::move(result);
  return ae;
}

RunOutput run_windows(const ScenarioConfig& config, const Autoencoder* ae_in) {
  config.validate();
  config.slices.validate();
  const auto layout = config.build_layout();
  const auto radio = config.resolved_radio();
  const GainTable gains(layout);
  const auto opts = scheme_options(config.run.scheme, config.run.exhaustive_cap);
  const std::size_t num_sbs = layout.num_sbs();
  const std::size_t num_slices = config.slices.num_slices();

  RunOutput out;
  std::optional<Autoencoder> own_ae;
  const Autoencoder* ae = ae_in;
  if (config.run.solver == Solver::ulscs) {
    if (!ae) {
      own_ae.emplace(build_autoencoder(config, layout));
      ae = &*own_ae;
    }
    const auto& path = config.run.store_path;
    if (path && std::filesystem::exists(*path)) {
      out.store = RecordStore::load(*path);
    } else {
      out.store.emplace(config.run.capacity);
    }
    for (std::size_t w = 0; w < config.run.warmup_windows; ++w) {
      const auto dtd = window_dtd(config, layout, kWarmupOffset + w);
      const PlanningInputs in{layout, dtd, config.slices, radio, gains};
      auto res = loscs(in, ScmDecision::minimal(num_sbs, num_slices),
                       search_seed(config.run.seed, kWarmupOffset + w), opts);
      out.store->insert({dtd, res.scm, res.plan, res.objective});
    }
  }

  for (std::size_t w = 0; w < config.run.windows; ++w) {
    const auto dtd = window_dtd(config, layout, w);
    const PlanningInputs in{layout, dtd, config.slices, radio, gains};
    const auto seed = search_seed(config.run.seed, w);
    const auto start = std::chrono::steady_clock::now();
    SearchResult res;
    double baseline = kInfeasibleObjective;
    switch (config.run.solver) {
      case Solver::loscs:
        res = loscs(in, ScmDecision::minimal(num_sbs, num_slices), seed, opts);
        baseline = res.objective;
        break;
      case Solver::ulscs: {
        auto u = ulscs(in, *ae, *out.store, config.run.k, seed, opts);
        baseline = u.baseline_objective;
        res = std::move(u);
        break;
      }
      case Solver::exhaustive:
        res = exhaustive_search(in, opts);
        baseline = res.objective;
        break;
      case Solver::fixed: {
        res.scm = fixed_decision(config, layout);
        auto ev = evaluate_scm(in, res.scm, opts);
        res.plan = std::move(ev.plan);
        res.objective = ev.objective;
        res.feasible = ev.feasible;
        res.evaluations = 1;
        res.trace.push_back({0, res.objective});
        baseline = res.objective;
        break;
      }
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.rows.push_back(make_row(config, w, seed, in, res, baseline, wall));
  }

  if (out.store && config.run.store_path) out.store->save(*config.run.store_path);
  return out;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::num_sbs: return "num_sbs";
    case SweepAxis::num_slices: return "num_slices";
    case SweepAxis::bandwidth: return "bandwidth";
    case SweepAxis::grid_diameter: return "grid_diameter";
    case SweepAxis::k: return "k";
    case SweepAxis::capacity: return "capacity";
  }
  return "unknown";
}

SweepAxis sweep_axis_from_string(std::string_view name) {
  for (auto a : {SweepAxis::num_sbs, SweepAxis::num_slices, SweepAxis::bandwidth,
                 SweepAxis::grid_diameter, SweepAxis::k, SweepAxis::capacity}) {
    if (to_string(a) == name) return a;
  }
  throw Error(ErrorCode::config_error, "unknown sweep axis '" + std::string(name) + "'");
}

ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value) {
  ScenarioConfig c = base;
  auto as_count = [&](double lo) {
    if (!(value >= lo) || value != std::floor(value)) {
      throw Error(ErrorCode::config_error, std::string(to_string(axis)) + " value " +
                                               format_double(value) + " is not a valid count");
    }
    return static_cast<std::size_t>(value);
  };
  switch (axis) {
    case SweepAxis::num_sbs: {
      const auto m = as_count(0);
      if (m > c.layout.sbs.size()) {
        throw Error(ErrorCode::config_error, "num_sbs sweep exceeds the SBSs listed in the layout");
      }
      c.layout.sbs.resize(m);
      break;
    }
    case SweepAxis::num_slices: {
      const auto n = as_count(1);
      if (n > c.slices.num_slices()) {
        throw Error(ErrorCode::config_error, "num_slices sweep exceeds the slices configured");
      }
      c.slices.sinr_min_db.resize(n);
      c.slices.rb_per_bit.resize(n);
      c.slices.ee_weight.resize(n);
      break;
    }
    case SweepAxis::bandwidth:
      c.radio.bandwidth_hz = value;
      break;
    case SweepAxis::grid_diameter:
      if (!c.layout.extent_km) {
        throw Error(ErrorCode::config_error, "grid_diameter sweep needs layout.extent_km");
      }
      c.layout.grid_diameter_km = value;
      break;
    case SweepAxis::k:
      c.run.k = as_count(0);
      break;
    case SweepAxis::capacity:
      c.run.capacity = as_count(1);
      break;
  }
  c.validate();
  return c;
}

SweepOutput sweep(const ScenarioConfig& base, SweepAxis axis, const std::vector<double>& values) {
  SweepOutput out;
  for (double v : values) {
    try {
      auto rows = run_windows(apply_axis(base, axis, v)).rows;
      for (auto& r : rows) {
        r.axis = std::string(to_string(axis));
        r.axis_value = v;
        out.rows.push_back(std::move(r));
      }
    } catch (const Error& e) {
      out.failures.push_back({v, std::string(to_string(e.code())) + ": " + e.what()});
    }
  }
  std::stable_sort(out.rows.begin(), out.rows.end(), [](const WindowRow& a, const WindowRow& b) {
    if (a.axis_value != b.axis_value) return a.axis_value < b.axis_value;
    return a.window < b.window;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Export

ExportFormat export_format_from_string(std::string_view name) {
  if (name == "csv") return ExportFormat::csv;
  if (name == "jsonl") return ExportFormat::jsonl;
  throw Error(ErrorCode::config_error, "unknown export format '" + std::string(name) + "'");
}

ExportFormat export_format_for(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return ExportFormat::csv;
  if (ext == ".jsonl") return ExportFormat::jsonl;
  throw Error(ErrorCode::config_error, "cannot infer export format from '" + path.string() + "'");
}

namespace {

const std::vector<std::string> kColumns = {
    "axis",     "axis_value",    "window",      "scheme",     "solver",
    "seed",     "xi",            "objective",   "baseline_objective",
    "total_power_w", "feasible", "infeasibility", "evaluations", "wall_time_s"};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t j = 0; j < line.size(); ++j) {
    const char c = line[j];
    if (quoted) {
      if (c == '"' && j + 1 < line.size() && line[j + 1] == '"') {
        cur += '"';
        ++j;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw Error(ErrorCode::parse_error, "unterminated quote in CSV line");
  out.push_back(std::move(cur));
  return out;
}

std::string join_xi(const std::vector<double>& xi) {
  std::string s;
  for (std::size_t n = 0; n < xi.size(); ++n) {
    if (n) s += ';';
    s += format_double(xi[n]);
  }
  return s;
}

std::vector<double> split_xi(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto end = s.find(';', start);
    out.push_back(parse_double(s.substr(start, end - start)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? kInfeasibleObjective : j.get<double>();
}

}  // namespace

void write_rows(std::ostream& os, const std::vector<WindowRow>& rows, ExportFormat format) {
  if (format == ExportFormat::csv) {
    for (std::size_t c = 0; c < kColumns.size(); ++c) os << (c ? "," : "") << kColumns[c];
    os << '\n';
    for (const auto& r : rows) {
      os << csv_field(r.axis) << ',' << format_double(r.axis_value) << ',' << r.window << ','
         << csv_field(r.scheme) << ',' << csv_field(r.solver) << ',' << r.seed << ','
         << join_xi(r.xi) << ',' << format_double(r.objective) << ','
         << format_double(r.baseline_objective) << ',' << format_double(r.total_power_w) << ','
         << (r.feasible ? "true" : "false") << ',' << csv_field(r.infeasibility) << ','
         << r.evaluations << ',' << format_double(r.wall_time_s) << '\n';
    }
  } else {
    for (const auto& r : rows) {
      json j = {{"axis", r.axis},
                {"axis_value", r.axis_value},
                {"window", r.window},
                {"scheme", r.scheme},
                {"solver", r.solver},
                {"seed", r.seed},
                {"xi", r.xi},
                {"objective", number_or_null(r.objective)},
                {"baseline_objective", number_or_null(r.baseline_objective)},
                {"total_power_w", r.total_power_w},
                {"feasible", r.feasible},
                {"infeasibility", r.infeasibility},
                {"evaluations", r.evaluations},
                {"wall_time_s", r.wall_time_s}};
      os << j.dump() << '\n';
    }
  }
  if (!os) throw Error(ErrorCode::io_error, "failed to write result rows");
}

std::vector<WindowRow> read_rows(std::istream& is, ExportFormat format) {
  std::vector<WindowRow> rows;
  std::string line;
  std::size_t lineno = 0;
  if (format == ExportFormat::csv) {
    if (!std::getline(is, line)) throw Error(ErrorCode::parse_error, "missing CSV header");
    ++lineno;
    if (split_csv_line(line) != kColumns) throw Error(ErrorCode::parse_error, "unexpected CSV header");
    while (std::getline(is, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto f = split_csv_line(line);
      if (f.size() != kColumns.size()) {
        throw Error(ErrorCode::parse_error, "CSV line " + std::to_string(lineno) +
                                                " has " + std::to_string(f.size()) + " fields");
      }
      WindowRow r;
      r.axis = f[0];
      r.axis_value = parse_double(f[1]);
      r.window = static_cast<std::size_t>(parse_int(f[2]));
      r.scheme = f[3];
      r.solver = f[4];
      r.seed = std::stoull(f[5]);
      r.xi = split_xi(f[6]);
      r.objective = parse_double(f[7]);
      r.baseline_objective = parse_double(f[8]);
      r.total_power_w = parse_double(f[9]);
      if (f[10] != "true" && f[10] != "false") {
        throw Error(ErrorCode::parse_error, "feasible must be true or false");
      }
      r.feasible = f[10] == "true";
      r.infeasibility = f[11];
      r.evaluations = static_cast<std::size_t>(parse_int(f[12]));
      r.wall_time_s = parse_double(f[13]);
      rows.push_back(std::move(r));
    }
    return rows;
  }
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      WindowRow r;
      r.axis = j.at("axis").get<std::string>();
      r.axis_value = j.at("axis_value").get<double>();
      r.window = j.at("window").get<std::size_t>();
      r.scheme = j.at("scheme").get<std::string>();
      r.solver = j.at("solver").get<std::string>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.xi = j.at("xi").get<std::vector<double>>();
      r.objective = number_from(j.at("objective"));
      r.baseline_objective = number_from(j.at("baseline_objective"));
      r.total_power_w = j.at("total_power_w").get<double>();
      r.feasible = j.at("feasible").get<bool>();
      r.infeasibility = j.at("infeasibility").get<std::string>();
      r.evaluations = j.at("evaluations").get<std::size_t>();
      r.wall_time_s = j.at("wall_time_s").get<double>();
      rows.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::parse_error, "JSONL line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

void export_rows(const std::filesystem::path& path, const std::vector<WindowRow>& rows,
                 ExportFormat format) {
  std::ostringstream os;
  write_rows(os, rows, format);
  write_text_file(path, os.str());
}

std::vector<WindowRow> import_rows(const std::filesystem::path& path, ExportFormat format) {
  std::istringstream is(read_text_file(path));
  return read_rows(is, format);
}

}  // namespace ranplan

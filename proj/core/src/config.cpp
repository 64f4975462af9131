#include "ranplan/config.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "ranplan/error.hpp"
#include "ranplan/io.hpp"

namespace ranplan {

using nlohmann::json;

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::sz_grid: return "SZ+grid";
    case Scheme::cz_grid: return "CZ+grid";
    case Scheme::cz_cell: return "CZ+cell";
  }
  return "unknown";
}

std::string_view to_string(Solver s) {
  switch (s) {
    case Solver::loscs: return "loscs";
    case Solver::ulscs: return "ulscs";
    case Solver::exhaustive: return "exhaustive";
    case Solver::fixed: return "fixed";
  }
  return "unknown";
}

Scheme scheme_from_string(std::string_view name) {
  for (auto s : {Scheme::sz_grid, Scheme::cz_grid, Scheme::cz_cell}) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorCode::config_error,
              "unknown scheme '" + std::string(name) + "' (SZ+grid, CZ+grid, CZ+cell)");
}

Solver solver_from_string(std::string_view name) {
  for (auto s : {Solver::loscs, Solver::ulscs, Solver::exhaustive, Solver::fixed}) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorCode::config_error,
              "unknown solver '" + std::string(name) + "' (loscs, ulscs, exhaustive, fixed)");
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw Error(ErrorCode::config_error, field + ": " + msg);
}

// Reads fields out of one JSON object and rejects keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) fail(path_ + "." + key, "unknown key");
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }
  std::string field(const std::string& key) const { return path_ + "." + key; }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      fail(field(key), "wrong type");
    }
  }
  template <class T>
  void get(const std::string& key, std::optional<T>& out) {
    if (!has(key)) return;
    T v{};
    get(key, v);
    out = v;
  }

  Section sub(const std::string& key) {
    seen_.insert(key);
    static const json kEmpty = json::object();
    return Section(j_.contains(key) ? j_.at(key) : kEmpty, field(key));
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void check_positive(double v, const std::string& field) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(field, "must be a positive finite number");
}

void check_range(double v, double lo, double hi, const std::string& field) {
  if (!(v >= lo && v <= hi)) {
    fail(field, "must lie in [" + format_double(lo) + ", " + format_double(hi) + "]");
  }
}

HexCoord parse_coord(const json& j, const std::string& field) {
  try {
    const auto v = j.get<std::vector<int>>();
    if (v.size() != 2) fail(field, "expected [q, r]");
    return {v[0], v[1]};
  } catch (const json::exception&) {
    fail(field, "expected [q, r]");
  }
}

Point2 parse_point(const json& j, const std::string& field) {
  try {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 2) fail(field, "expected [x, y]");
    return {v[0], v[1]};
  } catch (const json::exception&) {
    fail(field, "expected [x, y]");
  }
}

int layers_for_km(double km, double diameter_km) {
  return std::max(1, static_cast<int>(std::lround(km / (diameter_km * kCenterSpacingPerDiameter))));
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("config is not valid JSON: ") + e.what());
  }
  ScenarioConfig c;
  {
    Section top(root, "config");
    {
      auto s = top.sub("layout");
      auto& l = c.layout;
      s.get("grid_diameter_km", l.grid_diameter_km);
      s.get("extent_layers", l.extent_layers);
      s.get("extent_km", l.extent_km);
      s.get("mbs_height_m", l.mbs_height_m);
      s.get("mbs_max_power_w", l.mbs_max_power_w);
      s.get("carrier_freq_mhz", l.carrier_freq_mhz);
      s.get("max_sc_layers", l.max_sc_layers);
      s.get("max_sc_radius_km", l.max_sc_radius_km);
      s.get("mbs_sc_radius_km", l.mbs_sc_radius_km);
      double sbs_height = 15.0, sbs_power = 1.0;
      s.get("sbs_height_m", sbs_height);
      s.get("sbs_max_power_w", sbs_power);
      if (s.has("sbs")) {
        const auto& arr = s.raw("sbs");
        if (!arr.is_array()) fail(s.field("sbs"), "expected an array");
        for (std::size_t k = 0; k < arr.size(); ++k) {
          Section e(arr[k], s.field("sbs") + "[" + std::to_string(k) + "]");
          SbsPlacement p;
          p.antenna_height_m = sbs_height;
          p.max_power_w = sbs_power;
          if (e.has("coord")) p.coord = parse_coord(e.raw("coord"), e.field("coord"));
          if (e.has("pos_km")) p.pos_km = parse_point(e.raw("pos_km"), e.field("pos_km"));
          e.get("antenna_height_m", p.antenna_height_m);
          e.get("max_power_w", p.max_power_w);
          l.sbs.push_back(p);
        }
      }
    }
    {
      auto s = top.sub("slices");
      s.get("sinr_min_db", c.slices.sinr_min_db);
      s.get("rb_per_bit", c.slices.rb_per_bit);
      s.get("ee_weight", c.slices.ee_weight);
      s.get("rho", c.slices.sinr_scale);
    }
    {
      auto s = top.sub("radio");
      auto& r = c.radio;
      s.get("noise_density_dbm_hz", r.radio.noise_density_dbm_hz);
      s.get("rb_bandwidth_hz", r.radio.rb_bandwidth_hz);
      s.get("rb_budget", r.radio.rb_budget);
      s.get("bandwidth_hz", r.bandwidth_hz);
      s.get("slots_per_window", r.slots_per_window);
      std::string mode = "occupancy";
      s.get("theta_mode", mode);
      if (mode == "occupancy") {
        r.radio.theta_mode = ThetaMode::occupancy;
      } else if (mode == "constant") {
        r.radio.theta_mode = ThetaMode::constant;
      } else {
        fail(s.field("theta_mode"), "expected 'occupancy' or 'constant'");
      }
      s.get("theta_constant", r.radio.theta_constant);
    }
    {
      auto s = top.sub("traffic");
      auto& t = c.traffic;
      s.get("ppp_rate_per_grid", t.params.ppp_rate_per_grid);
      s.get("load_low_bits", t.params.load_low_bits);
      s.get("load_high_bits", t.params.load_high_bits);
      s.get("load_quantum_bits", t.params.load_quantum_bits);
      s.get("reference_diameter_km", t.reference_diameter_km);
      std::string mode = "grid";
      s.get("mode", mode);
      if (mode == "grid") {
        t.mode = TrafficMode::grid;
      } else if (mode == "field") {
        t.mode = TrafficMode::field;
      } else {
        fail(s.field("mode"), "expected 'grid' or 'field'");
      }
    }
    {
      auto s = top.sub("learning");
      auto& l = c.learning;
      std::optional<std::string> model;
      s.get("model_path", model);
      if (model) l.model_path = *model;
      s.get("hidden", l.hidden);
      s.get("latent", l.latent);
      std::string act(to_string(l.activation));
      s.get("activation", act);
      try {
        l.activation = activation_from_string(act);
      } catch (const Error&) {
        fail(s.field("activation"), "unknown activation");
      }
      s.get("train_instances", l.train_instances);
      s.get("epochs", l.train.epochs);
      s.get("batch_size", l.train.batch_size);
      s.get("learning_rate", l.train.learning_rate);
      s.get("seed", l.seed);
    }
    {
      auto s = top.sub("run");
      auto& r = c.run;
      s.get("intervals", c.traffic.params.num_intervals);
      s.get("interval_duration_s", c.traffic.params.interval_duration_s);
      s.get("windows", r.windows);
      s.get("seed", r.seed);
      std::string scheme(to_string(r.scheme)), solver(to_string(r.solver));
      s.get("scheme", scheme);
      s.get("solver", solver);
      r.scheme = scheme_from_string(scheme);
      r.solver = solver_from_string(solver);
      s.get("k", r.k);
      s.get("capacity", r.capacity);
      s.get("warmup_windows", r.warmup_windows);
      std::optional<std::string> store;
      s.get("store_path", store);
      if (store) r.store_path = *store;
      s.get("exhaustive_cap", r.exhaustive_cap);
      s.get("fixed_sc_layers", r.fixed_sc_layers);
      s.get("fixed_sc_radius_km", r.fixed_sc_radius_km);
      s.get("record_wall_time", r.record_wall_time);
    }
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path));
}

void ScenarioConfig::validate() const {
  const auto& l = layout;
  check_positive(l.grid_diameter_km, "layout.grid_diameter_km");
  if (l.extent_layers.has_value() == l.extent_km.has_value()) {
    fail("layout", "set exactly one of extent_layers and extent_km");
  }
  if (l.extent_layers) check_range(*l.extent_layers, 0, 60, "layout.extent_layers");
  if (l.extent_km) check_positive(*l.extent_km, "layout.extent_km");
  check_range(l.mbs_height_m, 30.0, 200.0, "layout.mbs_height_m");
  check_positive(l.mbs_max_power_w, "layout.mbs_max_power_w");
  check_range(l.carrier_freq_mhz, 150.0, 2000.0, "layout.carrier_freq_mhz");
  if (l.max_sc_layers.has_value() == l.max_sc_radius_km.has_value()) {
    fail("layout", "set exactly one of max_sc_layers and max_sc_radius_km");
  }
  if (l.max_sc_layers) check_range(*l.max_sc_layers, 1, 30, "layout.max_sc_layers");
  if (l.max_sc_radius_km) check_positive(*l.max_sc_radius_km, "layout.max_sc_radius_km");
  check_positive(l.mbs_sc_radius_km, "layout.mbs_sc_radius_km");
  for (std::size_t k = 0; k < l.sbs.size(); ++k) {
    const auto f = "layout.sbs[" + std::to_string(k) + "]";
    const auto& p = l.sbs[k];
    if (p.coord.has_value() == p.pos_km.has_value()) fail(f, "set exactly one of coord and pos_km");
    check_range(p.antenna_height_m, 1.0, 200.0, f + ".antenna_height_m");
    check_positive(p.max_power_w, f + ".max_power_w");
  }

  const std::size_t n = slices.sinr_min_db.size();
  if (n == 0) fail("slices.sinr_min_db", "at least one slice required");
  if (slices.rb_per_bit.size() != n) fail("slices.rb_per_bit", "one entry per slice required");
  if (slices.ee_weight.size() != n) fail("slices.ee_weight", "one entry per slice required");
  for (std::size_t s = 0; s < n; ++s) {
    check_range(slices.sinr_min_db[s], -20.0, 40.0, "slices.sinr_min_db");
    check_positive(slices.rb_per_bit[s], "slices.rb_per_bit");
    check_positive(slices.ee_weight[s], "slices.ee_weight");
  }
  check_positive(slices.sinr_scale, "slices.rho");

  const auto& r = radio;
  check_range(r.radio.noise_density_dbm_hz, -250.0, -100.0, "radio.noise_density_dbm_hz");
  check_positive(r.radio.rb_bandwidth_hz, "radio.rb_bandwidth_hz");
  check_positive(r.radio.rb_budget, "radio.rb_budget");
  if (r.bandwidth_hz) check_positive(*r.bandwidth_hz, "radio.bandwidth_hz");
  check_positive(r.slots_per_window, "radio.slots_per_window");
  check_range(r.radio.theta_constant, 0.0, 1.0, "radio.theta_constant");

  const auto& t = traffic;
  if (!(t.params.ppp_rate_per_grid >= 0.0)) fail("traffic.ppp_rate_per_grid", "must be >= 0");
  if (!(t.params.load_low_bits >= 0.0)) fail("traffic.load_low_bits", "must be >= 0");
  if (!(t.params.load_high_bits >= t.params.load_low_bits)) {
    fail("traffic.load_high_bits", "must be >= load_low_bits");
  }
  check_positive(t.params.load_quantum_bits, "traffic.load_quantum_bits");
  check_positive(t.reference_diameter_km, "traffic.reference_diameter_km");
  if (t.mode == TrafficMode::field && !l.extent_km) {
    fail("traffic.mode", "field traffic needs layout.extent_km");
  }
  if (t.params.num_intervals < 2) fail("run.intervals", "a planning window needs T >= 2");
  check_positive(t.params.interval_duration_s, "run.interval_duration_s");

  const auto& le = learning;
  if (le.latent == 0) fail("learning.latent", "must be positive");
  for (auto h : le.hidden) {
    if (h == 0) fail("learning.hidden", "layer sizes must be positive");
  }
  if (le.train_instances == 0) fail("learning.train_instances", "must be positive");
  if (le.train.batch_size == 0) fail("learning.batch_size", "must be positive");
  check_positive(le.train.learning_rate, "learning.learning_rate");

  const auto& ru = run;
  if (ru.windows == 0) fail("run.windows", "must be positive");
  if (ru.capacity == 0) fail("run.capacity", "must be positive");
  if (ru.exhaustive_cap == 0) fail("run.exhaustive_cap", "must be positive");
  if (ru.solver == Solver::fixed && ru.fixed_sc_layers.has_value() == ru.fixed_sc_radius_km.has_value()) {
    fail("run", "the fixed solver needs exactly one of fixed_sc_layers and fixed_sc_radius_km");
  }
  if (ru.fixed_sc_layers) check_range(*ru.fixed_sc_layers, 1, 30, "run.fixed_sc_layers");
  if (ru.fixed_sc_radius_km) check_positive(*ru.fixed_sc_radius_km, "run.fixed_sc_radius_km");
}

NetworkLayout ScenarioConfig::build_layout() const {
  const auto& l = layout;
  const double d = l.grid_diameter_km;
  // A km extent gets the smallest grid disk whose inscribed circle still
  // contains the whole disk of that radius, so binned traffic is never lost.
  const double apothem = d * kCenterSpacingPerDiameter * kCenterSpacingPerDiameter;
  const int extent = l.extent_layers
                         ? *l.extent_layers
                         : static_cast<int>(std::ceil(*l.extent_km / apothem - 1e-9));
  const int max_layers = l.max_sc_layers ? *l.max_sc_layers : layers_for_km(*l.max_sc_radius_km, d);
  BsSite mbs{{0, 0}, l.mbs_height_m, l.carrier_freq_mhz, l.mbs_max_power_w};
  std::vector<BsSite> sbs;
  for (const auto& p : l.sbs) {
    HexCoord c = p.coord ? *p.coord : hex_round({p.pos_km->x / d, p.pos_km->y / d});
    sbs.push_back({c, p.antenna_height_m, l.carrier_freq_mhz, p.max_power_w});
  }
  try {
    return NetworkLayout(d, hex_disk({0, 0}, extent), mbs, std::move(sbs), max_layers,
                         l.mbs_sc_radius_km);
  } catch (const Error& e) {
    throw Error(ErrorCode::config_error, std::string("layout: ") + e.what());
  }
}

RadioConfig ScenarioConfig::resolved_radio() const {
  RadioConfig r = radio.radio;
  if (radio.bandwidth_hz) {
    r.rb_budget = std::floor(*radio.bandwidth_hz / r.rb_bandwidth_hz) * radio.slots_per_window;
  }
  return r;
}

std::string dump_config(const ScenarioConfig& c) {
  json j;
  auto& l = j["layout"];
  l["grid_diameter_km"] = c.layout.grid_diameter_km;
  if (c.layout.extent_layers) l["extent_layers"] = *c.layout.extent_layers;
  if (c.layout.extent_km) l["extent_km"] = *c.layout.extent_km;
  l["mbs_height_m"] = c.layout.mbs_height_m;
  l["mbs_max_power_w"] = c.layout.mbs_max_power_w;
  l["carrier_freq_mhz"] = c.layout.carrier_freq_mhz;
  if (c.layout.max_sc_layers) l["max_sc_layers"] = *c.layout.max_sc_layers;
  if (c.layout.max_sc_radius_km) l["max_sc_radius_km"] = *c.layout.max_sc_radius_km;
  l["mbs_sc_radius_km"] = c.layout.mbs_sc_radius_km;
  l["sbs"] = json::array();
  for (const auto& p : c.layout.sbs) {
    json e;
    if (p.coord) e["coord"] = {p.coord->q, p.coord->r};
    if (p.pos_km) e["pos_km"] = {p.pos_km->x, p.pos_km->y};
    e["antenna_height_m"] = p.antenna_height_m;
    e["max_power_w"] = p.max_power_w;
    l["sbs"].push_back(e);
  }
  j["slices"] = {{"sinr_min_db", c.slices.sinr_min_db},
                 {"rb_per_bit", c.slices.rb_per_bit},
                 {"ee_weight", c.slices.ee_weight},
                 {"rho", c.slices.sinr_scale}};
  auto& r = j["radio"];
  r["noise_density_dbm_hz"] = c.radio.radio.noise_density_dbm_hz;
  r["rb_bandwidth_hz"] = c.radio.radio.rb_bandwidth_hz;
  r["rb_budget"] = c.radio.radio.rb_budget;
  if (c.radio.bandwidth_hz) r["bandwidth_hz"] = *c.radio.bandwidth_hz;
  r["slots_per_window"] = c.radio.slots_per_window;
  r["theta_mode"] = c.radio.radio.theta_mode == ThetaMode::occupancy ? "occupancy" : "constant";
  r["theta_constant"] = c.radio.radio.theta_constant;
  j["traffic"] = {{"ppp_rate_per_grid", c.traffic.params.ppp_rate_per_grid},
                  {"load_low_bits", c.traffic.params.load_low_bits},
                  {"load_high_bits", c.traffic.params.load_high_bits},
                  {"load_quantum_bits", c.traffic.params.load_quantum_bits},
                  {"reference_diameter_km", c.traffic.reference_diameter_km},
                  {"mode", c.traffic.mode == TrafficMode::grid ? "grid" : "field"}};
  auto& le = j["learning"];
  if (c.learning.model_path) le["model_path"] = c.learning.model_path->string();
  le["hidden"] = c.learning.hidden;
  le["latent"] = c.learning.latent;
  le["activation"] = std::string(to_string(c.learning.activation));
  le["train_instances"] = c.learning.train_instances;
  le["epochs"] = c.learning.train.epochs;
  le["batch_size"] = c.learning.train.batch_size;
  le["learning_rate"] = c.learning.train.learning_rate;
  le["seed"] = c.learning.seed;
  auto& ru = j["run"];
  ru["intervals"] = c.traffic.params.num_intervals;
  ru["interval_duration_s"] = c.traffic.params.interval_duration_s;
  ru["windows"] = c.run.windows;
  ru["seed"] = c.run.seed;
  ru["scheme"] = std::string(to_string(c.run.scheme));
  ru["solver"] = std::string(to_string(c.run.solver));
  ru["k"] = c.run.k;
  ru["capacity"] = c.run.capacity;
  ru["warmup_windows"] = c.run.warmup_windows;
  if (c.run.store_path) ru["store_path"] = c.run.store_path->string();
  ru["exhaustive_cap"] = c.run.exhaustive_cap;
  if (c.run.fixed_sc_layers) ru["fixed_sc_layers"] = *c.run.fixed_sc_layers;
  if (c.run.fixed_sc_radius_km) ru["fixed_sc_radius_km"] = *c.run.fixed_sc_radius_km;
  ru["record_wall_time"] = c.run.record_wall_time;
  return j.dump(2) + "\n";
}

}  // namespace ranplan

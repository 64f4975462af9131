#include "ranplan/learning.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ranplan/error.hpp"
#include "ranplan/io.hpp"
#include "ranplan/metrics.hpp"

namespace ranplan {

using nlohmann::json;

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::elu: return "elu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::tanh: return "tanh";
  }
  return "unknown";
}

Activation activation_from_string(std::string_view name) {
  for (auto a : {Activation::identity, Activation::relu, Activation::elu, Activation::sigmoid,
                 Activation::tanh}) {
    if (to_string(a) == name) return a;
  }
  throw Error(ErrorCode::parse_error, "unknown activation '" + std::string(name) + "'");
}

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double activate(Activation a, double z) {
  switch (a) {
    case Activation::identity: return z;
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::elu: return z > 0.0 ? z : std::expm1(z);
    case Activation::sigmoid: return sigmoid(z);
    case Activation::tanh: return std::tanh(z);
  }
  return z;
}

// Derivative expressed through the pre-activation z.
double activate_grad(Activation a, double z) {
  switch (a) {
    case Activation::identity: return 1.0;
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::elu: return z > 0.0 ? 1.0 : std::exp(z);
    case Activation::sigmoid: {
      const double s = sigmoid(z);
      return s * (1.0 - s);
    }
    case Activation::tanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
  }
  return 1.0;
}

Eigen::MatrixXd apply_act(Activation a, const Eigen::MatrixXd& z) {
  return z.unaryExpr([a](double v) { return activate(a, v); });
}

DenseLayer make_layer(std::size_t in, std::size_t out, Activation act, std::mt19937_64& rng) {
  DenseLayer l;
  const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  l.weights.resize(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
  // Fill in a fixed order so the initialisation is independent of Eigen internals.
  for (Eigen::Index c = 0; c < l.weights.cols(); ++c) {
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r) l.weights(r, c) = dist(rng);
  }
  l.bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out));
  l.activation = act;
  return l;
}

bool all_finite(const DenseLayer& l) {
  return l.weights.allFinite() && l.bias.allFinite();
}

}  // namespace

// ---------------------------------------------------------------------------
// Normalizer

Normalizer Normalizer::fit(const std::vector<DtdInstance>& dataset) {
  if (dataset.empty()) throw Error(ErrorCode::invalid_argument, "empty dataset");
  Normalizer n{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& d : dataset) {
    for (double v : d.flat()) {
      n.min = std::min(n.min, v);
      n.max = std::max(n.max, v);
    }
  }
  if (!(n.max > n.min)) n.max = n.min + 1.0;
  return n;
}

Eigen::VectorXd Normalizer::apply(const DtdInstance& dtd) const {
  const auto flat = dtd.flat();
  Eigen::VectorXd x(static_cast<Eigen::Index>(flat.size()));
  const double span = max > min ? max - min : 1.0;
  for (std::size_t j = 0; j < flat.size(); ++j) {
    x(static_cast<Eigen::Index>(j)) = std::clamp((flat[j] - min) / span, 0.0, 1.0);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Autoencoder

Autoencoder::Autoencoder(const std::vector<std::size_t>& encoder_sizes,
                         Activation hidden_activation, std::uint64_t seed) {
  if (encoder_sizes.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "autoencoder needs at least input and latent sizes");
  }
  for (auto s : encoder_sizes) {
    if (s == 0) throw Error(ErrorCode::invalid_argument, "layer sizes must be positive");
  }
  std::mt19937_64 rng(seed);
  const std::size_t depth = encoder_sizes.size() - 1;
  for (std::size_t l = 0; l < depth; ++l) {
    const auto act = l + 1 == depth ? Activation::identity : hidden_activation;
    encoder_.push_back(make_layer(encoder_sizes[l], encoder_sizes[l + 1], act, rng));
  }
  for (std::size_t l = depth; l > 0; --l) {
    const auto act = l == 1 ? Activation::sigmoid : hidden_activation;
    decoder_.push_back(make_layer(encoder_sizes[l], encoder_sizes[l - 1], act, rng));
  }
  check_shapes();
}

Autoencoder::Autoencoder(std::vector<DenseLayer> encoder, std::vector<DenseLayer> decoder,
                         Normalizer normalizer)
    : encoder_(std::move(encoder)), decoder_(std::move(decoder)), normalizer_(normalizer) {
  check_shapes();
}

void Autoencoder::check_shapes() const {
  if (encoder_.empty() || encoder_.size() != decoder_.size()) {
    throw Error(ErrorCode::dimension_mismatch, "decoder must mirror the encoder");
  }
  auto layer_ok = [](const DenseLayer& l) {
    return l.weights.rows() > 0 && l.weights.cols() > 0 && l.bias.size() == l.weights.rows();
  };
  for (std::size_t l = 0; l < encoder_.size(); ++l) {
    const auto& e = encoder_[l];
    const auto& d = decoder_[encoder_.size() - 1 - l];
    if (!layer_ok(e) || !layer_ok(d)) {
      throw Error(ErrorCode::dimension_mismatch, "layer weight/bias shapes disagree");
    }
    if (l + 1 < encoder_.size() && encoder_[l + 1].in_size() != e.out_size()) {
      throw Error(ErrorCode::dimension_mismatch, "encoder layers do not chain");
    }
    if (d.in_size() != e.out_size() || d.out_size() != e.in_size()) {
      throw Error(ErrorCode::dimension_mismatch, "decoder sizes must reverse the encoder's");
    }
    if (!all_finite(e) || !all_finite(d)) {
      throw Error(ErrorCode::invalid_argument, "non-finite autoencoder parameter");
    }
  }
  if (latent_size() >= input_size()) {
    throw Error(ErrorCode::invalid_argument, "latent size must be below the input size");
  }
  if (decoder_.back().activation != Activation::sigmoid) {
    throw Error(ErrorCode::invalid_argument, "decoder output layer must be sigmoid");
  }
}

std::vector<std::size_t> Autoencoder::layer_sizes() const {
  std::vector<std::size_t> s{input_size()};
  for (const auto& l : encoder_) s.push_back(l.out_size());
  return s;
}

std::vector<DenseLayer> Autoencoder::all_layers() const {
  std::vector<DenseLayer> all = encoder_;
  all.insert(all.end(), decoder_.begin(), decoder_.end());
  return all;
}

Eigen::VectorXd Autoencoder::encode_normalized(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != input_size()) {
    throw Error(ErrorCode::dimension_mismatch, "input size " + std::to_string(x.size()) +
                                                   " does not match the encoder's " +
                                                   std::to_string(input_size()));
  }
  Eigen::VectorXd a = x;
  for (const auto& l : encoder_) {
    a = apply_act(l.activation, l.weights * a + l.bias);
  }
  if (!a.allFinite()) throw Error(ErrorCode::divergence, "non-finite latent vector");
  return a;
}

Eigen::VectorXd Autoencoder::encode(const DtdInstance& dtd) const {
  return encode_normalized(normalizer_.apply(dtd));
}

Eigen::VectorXd Autoencoder::reconstruct_normalized(const Eigen::VectorXd& x) const {
  Eigen::VectorXd a = encode_normalized(x);
  for (const auto& l : decoder_) a = apply_act(l.activation, l.weights * a + l.bias);
  return a;
}

double Autoencoder::loss_normalized(const Eigen::MatrixXd& batch) const {
  return forward_backward(batch, nullptr);
}

double Autoencoder::reconstruction_loss(const DtdInstance& dtd) const {
  const Eigen::VectorXd x = normalizer_.apply(dtd);
  const double loss = loss_normalized(x);
  if (!std::isfinite(loss)) throw Error(ErrorCode::divergence, "non-finite reconstruction loss");
  return loss;
}

std::size_t Autoencoder::num_parameters() const {
  std::size_t n = 0;
  for (const auto& l : all_layers()) n += static_cast<std::size_t>(l.weights.size() + l.bias.size());
  return n;
}

Eigen::VectorXd Autoencoder::parameters() const {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(num_parameters()));
  Eigen::Index off = 0;
  for (const auto* layers : {&encoder_, &decoder_}) {
    for (const auto& l : *layers) {
      flat.segment(off, l.weights.size()) = l.weights.reshaped();
      off += l.weights.size();
      flat.segment(off, l.bias.size()) = l.bias;
      off += l.bias.size();
    }
  }
  return flat;
}

void Autoencoder::set_parameters(const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != num_parameters()) {
    throw Error(ErrorCode::dimension_mismatch, "parameter vector has the wrong length");
  }
  if (!flat.allFinite()) throw Error(ErrorCode::invalid_argument, "non-finite parameter");
  Eigen::Index off = 0;
  for (auto* layers : {&encoder_, &decoder_}) {
    for (auto& l : *layers) {
      l.weights.reshaped() = flat.segment(off, l.weights.size());
      off += l.weights.size();
      l.bias = flat.segment(off, l.bias.size());
      off += l.bias.size();
    }
  }
}

double Autoencoder::loss_and_gradient(const Eigen::MatrixXd& batch,
                                      Eigen::VectorXd& gradient) const {
  return forward_backward(batch, &gradient);
}

double Autoencoder::forward_backward(const Eigen::MatrixXd& batch,
                                     Eigen::VectorXd* gradient_out) const {
  if (static_cast<std::size_t>(batch.rows()) != input_size() || batch.cols() == 0) {
    throw Error(ErrorCode::dimension_mismatch, "batch rows must equal the input size");
  }
  const auto layers = all_layers();
  // Forward pass keeping pre-activations; the output layer's sigmoid is folded
  // into the loss, which is evaluated from logits.
  std::vector<Eigen::MatrixXd> acts{batch};
  std::vector<Eigen::MatrixXd> pre;
  for (const auto& l : layers) {
    Eigen::MatrixXd z = (l.weights * acts.back()).colwise() + l.bias;
    acts.push_back(apply_act(l.activation, z));
    pre.push_back(std::move(z));
  }
  const Eigen::MatrixXd& logits = pre.back();
  const double count = static_cast<double>(batch.size());
  double loss = 0.0;
  for (Eigen::Index c = 0; c < batch.cols(); ++c) {
    for (Eigen::Index r = 0; r < batch.rows(); ++r) {
      loss += softplus(logits(r, c)) - batch(r, c) * logits(r, c);
    }
  }
  loss /= count;

  if (gradient_out == nullptr) return loss;

  Eigen::VectorXd& gradient = *gradient_out;
  gradient.resize(static_cast<Eigen::Index>(num_parameters()));
  std::vector<Eigen::Index> offsets;
  {
    Eigen::Index off = 0;
    for (const auto& l : layers) {
      offsets.push_back(off);
      off += l.weights.size() + l.bias.size();
    }
  }
  Eigen::MatrixXd dz = (acts.back() - batch) / count;
  for (std::size_t idx = layers.size(); idx-- > 0;) {
    const auto& l = layers[idx];
    const Eigen::MatrixXd dw = dz * acts[idx].transpose();
    gradient.segment(offsets[idx], dw.size()) = dw.reshaped();
    gradient.segment(offsets[idx] + dw.size(), l.bias.size()) = dz.rowwise().sum();
    if (idx == 0) break;
    Eigen::MatrixXd da = l.weights.transpose() * dz;
    const auto prev_act = layers[idx - 1].activation;
    dz = da.cwiseProduct(pre[idx - 1].unaryExpr([prev_act](double z) {
      return activate_grad(prev_act, z);
    }));
  }
  return loss;
}

namespace {

json layer_to_json(const DenseLayer& l) {
  std::vector<double> w(l.weights.reshaped().begin(), l.weights.reshaped().end());
  std::vector<double> b(l.bias.begin(), l.bias.end());
  return {{"in", l.in_size()},
          {"out", l.out_size()},
          {"activation", std::string(to_string(l.activation))},
          {"weights", w},
          {"bias", b}};
}

DenseLayer layer_from_json(const json& j) {
  DenseLayer l;
  const auto in = j.at("in").get<std::size_t>();
  const auto out = j.at("out").get<std::size_t>();
  const auto w = j.at("weights").get<std::vector<double>>();
  const auto b = j.at("bias").get<std::vector<double>>();
  if (w.size() != in * out || b.size() != out) {
    throw Error(ErrorCode::parse_error, "layer arrays do not match their declared sizes");
  }
  l.weights = Eigen::Map<const Eigen::MatrixXd>(w.data(), static_cast<Eigen::Index>(out),
                                                static_cast<Eigen::Index>(in));
  l.bias = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(out));
  l.activation = activation_from_string(j.at("activation").get<std::string>());
  return l;
}

}  // namespace

void Autoencoder::save(const std::filesystem::path& path) const {
  json j;
  j["model"] = "autoencoder";
  j["version"] = 1;
  j["layer_sizes"] = layer_sizes();
  j["normalizer"] = {{"min", normalizer_.min}, {"max", normalizer_.max}};
  j["encoder"] = json::array();
  j["decoder"] = json::array();
  for (const auto& l : encoder_) j["encoder"].push_back(layer_to_json(l));
  for (const auto& l : decoder_) j["decoder"].push_back(layer_to_json(l));
  write_text_file(path, j.dump() + "\n");
}

Autoencoder Autoencoder::load(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    const json j = json::parse(text);
    if (j.at("model").get<std::string>() != "autoencoder" || j.at("version").get<int>() != 1) {
      throw Error(ErrorCode::parse_error, "not an autoencoder model file");
    }
    std::vector<DenseLayer> enc, dec;
    for (const auto& l : j.at("encoder")) enc.push_back(layer_from_json(l));
    for (const auto& l : j.at("decoder")) dec.push_back(layer_from_json(l));
    Normalizer n{j.at("normalizer").at("min").get<double>(),
                 j.at("normalizer").at("max").get<double>()};
    return Autoencoder(std::move(enc), std::move(dec), n);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("model file: ") + e.what());
  }
}

bool operator==(const Autoencoder& a, const Autoencoder& b) {
  auto same = [](const std::vector<DenseLayer>& x, const std::vector<DenseLayer>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t l = 0; l < x.size(); ++l) {
      if (x[l].activation != y[l].activation || x[l].weights.rows() != y[l].weights.rows() ||
          x[l].weights.cols() != y[l].weights.cols() || x[l].weights != y[l].weights ||
          x[l].bias != y[l].bias) {
        return false;
      }
    }
    return true;
  };
  return a.normalizer_.min == b.normalizer_.min && a.normalizer_.max == b.normalizer_.max &&
         same(a.encoder_, b.encoder_) && same(a.decoder_, b.decoder_);
}

// ---------------------------------------------------------------------------
// Training

TrainResult train(Autoencoder& ae, const std::vector<DtdInstance>& dataset,
                  const TrainParams& params, std::uint64_t seed) {
  if (dataset.empty()) throw Error(ErrorCode::invalid_argument, "empty training set");
  if (params.batch_size == 0 || !(params.learning_rate > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "batch size and learning rate must be positive");
  }
  if (params.fit_normalizer) ae.set_normalizer(Normalizer::fit(dataset));

  const auto k = static_cast<Eigen::Index>(ae.input_size());
  Eigen::MatrixXd data(k, static_cast<Eigen::Index>(dataset.size()));
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    if (dataset[s].size() != ae.input_size()) {
      throw Error(ErrorCode::dimension_mismatch, "training instance size mismatch");
    }
    data.col(static_cast<Eigen::Index>(s)) = ae.normalizer().apply(dataset[s]);
  }

  TrainResult out;
  auto check = [](double loss, std::size_t epoch) {
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::divergence,
                  "training loss became non-finite at epoch " + std::to_string(epoch));
    }
  };
  out.loss_history.push_back(ae.loss_normalized(data));
  check(out.loss_history.back(), 0);

  Eigen::VectorXd theta = ae.parameters();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXd grad;
  std::size_t step = 0;
  std::mt19937_64 rng(seed);
  std::vector<Eigen::Index> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 1; epoch <= params.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += params.batch_size) {
      const std::size_t len = std::min(params.batch_size, order.size() - start);
      Eigen::MatrixXd batch(k, static_cast<Eigen::Index>(len));
      for (std::size_t c = 0; c < len; ++c) {
        batch.col(static_cast<Eigen::Index>(c)) = data.col(order[start + c]);
      }
      const double loss = ae.loss_and_gradient(batch, grad);
      check(loss, epoch);
      ++step;
      m = params.beta1 * m + (1.0 - params.beta1) * grad;
      v = params.beta2 * v + (1.0 - params.beta2) * grad.cwiseAbs2();
      const double bc1 = 1.0 - std::pow(params.beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(params.beta2, static_cast<double>(step));
      theta.array() -= params.learning_rate * (m.array() / bc1) /
                       ((v.array() / bc2).sqrt() + params.epsilon);
      if (!theta.allFinite()) {
        throw Error(ErrorCode::divergence, "parameters became non-finite");
      }
      ae.set_parameters(theta);
    }
    out.loss_history.push_back(ae.loss_normalized(data));
    check(out.loss_history.back(), epoch);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Similarity

double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::dimension_mismatch, "latent sizes differ");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

double similarity(const Autoencoder& ae, const DtdInstance& a, const DtdInstance& b) {
  return cosine_similarity(ae.encode(a), ae.encode(b));
}

// ---------------------------------------------------------------------------
// Records

double recompute_objective(const DataRecord& record, const NetworkLayout& layout,
                           const SliceSpec& slices) {
  if (!record.plan.feasible) return kInfeasibleObjective;
  const auto coverage = build_coverage(layout, record.scm, slices);
  return ee_report(record.dtd, record.plan, coverage, slices).objective;
}

namespace {

// JSON has no infinities; an infeasible objective is stored as null.
json objective_to_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double objective_from_json(const json& j) {
  return j.is_null() ? kInfeasibleObjective : j.get<double>();
}

std::optional<InfeasibilityReason> reason_from_string(const std::string& s) {
  for (auto r : {InfeasibilityReason::singular_system, InfeasibilityReason::nonpositive_power,
                 InfeasibilityReason::budget_violation, InfeasibilityReason::rb_budget_violation,
                 InfeasibilityReason::not_converged}) {
    if (to_string(r) == s) return r;
  }
  throw Error(ErrorCode::parse_error, "unknown infeasibility reason '" + s + "'");
}

json record_to_json(const DataRecord& r) {
  json dtd = {{"grids", r.dtd.num_grids()},
              {"slices", r.dtd.num_slices()},
              {"intervals", r.dtd.num_intervals()},
              {"tau", r.dtd.interval_duration_s()},
              {"loads", std::vector<double>(r.dtd.flat().begin(), r.dtd.flat().end())}};
  std::vector<std::vector<int>> zoom;
  for (const auto& z : r.scm.zoom) zoom.emplace_back(z.begin(), z.end());
  json scm = {{"l_full", r.scm.l_full}, {"l_reduced", r.scm.l_reduced}, {"zoom", zoom}};
  json plan = {{"grids", r.plan.num_grids()},
               {"slices", r.plan.num_slices()},
               {"intervals", r.plan.num_intervals()},
               {"power", r.plan.flat()},
               {"feasible", r.plan.feasible},
               {"infeasibility", r.plan.infeasibility
                                     ? json(std::string(to_string(*r.plan.infeasibility)))
                                     : json(nullptr)}};
  return {{"dtd", dtd}, {"scm", scm}, {"plan", plan}, {"objective", objective_to_json(r.objective)}};
}

DataRecord record_from_json(const json& j) {
  DataRecord r;
  const auto& d = j.at("dtd");
  const auto gi = d.at("grids").get<std::size_t>();
  const auto sn = d.at("slices").get<std::size_t>();
  const auto tt = d.at("intervals").get<std::size_t>();
  r.dtd = DtdInstance(gi, sn, tt, d.at("tau").get<double>());
  const auto loads = d.at("loads").get<std::vector<double>>();
  if (loads.size() != gi * sn * tt) throw Error(ErrorCode::parse_error, "record load count");
  for (std::size_t i = 0, o = 0; i < gi; ++i) {
    for (std::size_t n = 0; n < sn; ++n) {
      for (std::size_t t = 0; t < tt; ++t) r.dtd.set_load(i, n, t, loads[o++]);
    }
  }
  const auto& s = j.at("scm");
  r.scm.l_full = s.at("l_full").get<std::vector<int>>();
  r.scm.l_reduced = s.at("l_reduced").get<std::vector<int>>();
  for (const auto& z : s.at("zoom").get<std::vector<std::vector<int>>>()) {
    std::vector<std::uint8_t> bits;
    for (int b : z) {
      if (b != 0 && b != 1) throw Error(ErrorCode::parse_error, "zoom bits must be 0 or 1");
      bits.push_back(static_cast<std::uint8_t>(b));
    }
    r.scm.zoom.push_back(std::move(bits));
  }
  const auto& p = j.at("plan");
  r.plan = PowerPlan(p.at("grids").get<std::size_t>(), p.at("slices").get<std::size_t>(),
                     p.at("intervals").get<std::size_t>());
  const auto power = p.at("power").get<std::vector<double>>();
  if (power.size() != r.plan.flat().size()) throw Error(ErrorCode::parse_error, "record power count");
  for (std::size_t i = 0, o = 0; i < r.plan.num_grids(); ++i) {
    for (std::size_t n = 0; n < r.plan.num_slices(); ++n) {
      for (std::size_t t = 0; t < r.plan.num_intervals(); ++t) r.plan.set_power(i, n, t, power[o++]);
    }
  }
  r.plan.feasible = p.at("feasible").get<bool>();
  if (!p.at("infeasibility").is_null()) {
    r.plan.infeasibility = reason_from_string(p.at("infeasibility").get<std::string>());
  }
  r.objective = objective_from_json(j.at("objective"));
  return r;
}

}  // namespace

RecordStore::RecordStore(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw Error(ErrorCode::invalid_argument, "store capacity must be positive");
}

void RecordStore::insert(DataRecord record) {
  records_.push_back(std::move(record));
  while (records_.size() > capacity_) records_.pop_front();
}

std::vector<DataRecord> RecordStore::select_top_k(const Autoencoder& ae, const DtdInstance& dtd,
                                                  std::size_t k) const {
  if (k == 0 || records_.empty()) return {};
  const Eigen::VectorXd query = ae.encode(dtd);
  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(records_.size());
  for (std::size_t idx = 0; idx < records_.size(); ++idx) {
    ranked.emplace_back(cosine_similarity(query, ae.encode(records_[idx].dtd)), idx);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second > b.second;
  });
  std::vector<DataRecord> out;
  for (std::size_t j = 0; j < std::min(k, ranked.size()); ++j) {
    out.push_back(records_[ranked[j].second]);
  }
  return out;
}

void RecordStore::save(const std::filesystem::path& path) const {
  std::string text = json{{"record_store", 1}, {"capacity", capacity_}}.dump() + "\n";
  for (const auto& r : records_) text += record_to_json(r).dump() + "\n";
  write_text_file(path, text);
}

RecordStore RecordStore::load(const std::filesystem::path& path) {
  std::istringstream is(read_text_file(path));
  std::string line;
  std::size_t lineno = 0;
  try {
    if (!std::getline(is, line)) throw Error(ErrorCode::parse_error, "empty record store file");
    ++lineno;
    const json header = json::parse(line);
    if (header.at("record_store").get<int>() != 1) {
      throw Error(ErrorCode::parse_error, "unsupported record store version");
    }
    RecordStore store(header.at("capacity").get<std::size_t>());
    while (std::getline(is, line)) {
      ++lineno;
      if (line.empty()) continue;
      store.insert(record_from_json(json::parse(line)));
    }
    return store;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error,
                "record store line " + std::to_string(lineno) + ": " + e.what());
  }
}

void RecordStore::append(const std::filesystem::path& path, const DataRecord& record) {
  std::ofstream os(path, std::ios::app);
  if (!os) throw Error(ErrorCode::io_error, "cannot append to " + path.string());
  os << record_to_json(record).dump() << '\n';
  if (!os) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// ULSCS

namespace {

bool usable_warm_start(const PlanningInputs& in, const ScmDecision& scm,
                       const SearchOptions& options) {
  try {
    scm.validate(in.layout, in.slices.num_slices());
  } catch (const Error&) {
    return false;
  }
  if (!options.uniform_zoom) return true;
  const auto c = scm.canonical();
  for (const auto& z : c.zoom) {
    if (std::adjacent_find(z.begin(), z.end(), std::not_equal_to<>()) != z.end()) return false;
  }
  return true;
}

}  // namespace

UlscsResult ulscs(const PlanningInputs& in, const Autoencoder& ae, RecordStore& store,
                  std::size_t k, std::uint64_t seed, const SearchOptions& options) {
  const auto retrieved = store.select_top_k(ae, in.dtd, k);

  UlscsResult res;
  static_cast<SearchResult&>(res) = loscs(
      in, ScmDecision::minimal(in.layout.num_sbs(), in.slices.num_slices()), seed, options);
  res.baseline_objective = res.objective;

  for (std::size_t j = 0; j < retrieved.size(); ++j) {
    if (!usable_warm_start(in, retrieved[j].scm, options)) {
      res.warm_start_objectives.push_back(kInfeasibleObjective);
      continue;
    }
    auto warm = loscs(in, retrieved[j].scm, seed + j + 1, options);
    res.evaluations += warm.evaluations;
    res.warm_start_objectives.push_back(warm.objective);
    if (warm.feasible && warm.objective > res.objective) {
      const std::size_t evals = res.evaluations;
      static_cast<SearchResult&>(res) = std::move(warm);
      res.evaluations = evals;
    }
  }

  store.insert({in.dtd, res.scm, res.plan, res.objective});
  return res;
}

}  // namespace ranplan

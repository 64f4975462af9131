#pragma once

// Latent-feature retrieval of historical planning windows.
//
// A fully-connected autoencoder compresses a normalised DTD instance into a
// latent vector; cosine similarity between latents ranks stored records, and
// the best-matching records warm-start the local search.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ranplan/power.hpp"
#include "ranplan/search.hpp"
#include "ranplan/slicing.hpp"
#include "ranplan/traffic.hpp"

namespace ranplan {

enum class Activation { identity, relu, elu, sigmoid, tanh };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view name);

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out
  Activation activation = Activation::identity;

  std::size_t in_size() const { return static_cast<std::size_t>(weights.cols()); }
  std::size_t out_size() const { return static_cast<std::size_t>(weights.rows()); }
};

/// Global min-max scaling of load values into [0, 1].
struct Normalizer {
  double min = 0.0;
  double max = 1.0;

  static Normalizer fit(const std::vector<DtdInstance>& dataset);
  /// Scaled and clamped to [0, 1].
  Eigen::VectorXd apply(const DtdInstance& dtd) const;
};

class Autoencoder {
 public:
  /// `encoder_sizes` = [input, hidden..., latent]. Hidden layers use
  /// `hidden_activation`, the latent layer is linear, the decoder mirrors the
  /// encoder and ends in a sigmoid.
  Autoencoder(const std::vector<std::size_t>& encoder_sizes, Activation hidden_activation,
              std::uint64_t seed);

  /// Explicit layers; the decoder's sizes must mirror the encoder's and its
  /// last activation must be sigmoid.
  Autoencoder(std::vector<DenseLayer> encoder, std::vector<DenseLayer> decoder,
              Normalizer normalizer = {});

  std::size_t input_size() const { return encoder_.front().in_size(); }
  std::size_t latent_size() const { return encoder_.back().out_size(); }
  std::vector<std::size_t> layer_sizes() const;

  const std::vector<DenseLayer>& encoder() const { return encoder_; }
  const std::vector<DenseLayer>& decoder() const { return decoder_; }
  const Normalizer& normalizer() const { return normalizer_; }
  void set_normalizer(Normalizer n) { normalizer_ = n; }

  Eigen::VectorXd encode(const DtdInstance& dtd) const;
  Eigen::VectorXd encode_normalized(const Eigen::VectorXd& x) const;
  /// Decoder output (after the sigmoid) for a normalised input.
  Eigen::VectorXd reconstruct_normalized(const Eigen::VectorXd& x) const;

  /// Mean element-wise binary cross-entropy between x and its reconstruction.
  double loss_normalized(const Eigen::MatrixXd& batch) const;
  double reconstruction_loss(const DtdInstance& dtd) const;

  /// Flat parameter vector: every layer's weights (column-major) then bias,
  /// encoder layers first.
  std::size_t num_parameters() const;
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);

  /// Loss and its gradient w.r.t. the flat parameters over a batch whose
  /// columns are normalised inputs.
  double loss_and_gradient(const Eigen::MatrixXd& batch, Eigen::VectorXd& gradient) const;

  void save(const std::filesystem::path& path) const;
  static Autoencoder load(const std::filesystem::path& path);

  friend bool operator==(const Autoencoder& a, const Autoencoder& b);

 private:
  void check_shapes() const;
  double forward_backward(const Eigen::MatrixXd& batch, Eigen::VectorXd* gradient) const;
  std::vector<DenseLayer> all_layers() const;

  std::vector<DenseLayer> encoder_;
  std::vector<DenseLayer> decoder_;
  Normalizer normalizer_;
};

struct TrainParams {
  std::size_t epochs = 50;
  std::size_t batch_size = 16;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  bool fit_normalizer = true;
};

struct TrainResult {
  /// Mean dataset loss before training, then after every epoch.
  std::vector<double> loss_history;
};

/// Mini-batch Adam on the reconstruction loss with seeded shuffling.
/// Throws divergence if the loss becomes non-finite.
TrainResult train(Autoencoder& ae, const std::vector<DtdInstance>& dataset,
                  const TrainParams& params, std::uint64_t seed);

/// Cosine similarity of two latent vectors; 0 if either is the zero vector.
double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double similarity(const Autoencoder& ae, const DtdInstance& a, const DtdInstance& b);

struct DataRecord {
  DtdInstance dtd;
  ScmDecision scm;
  PowerPlan plan;
  double objective = kInfeasibleObjective;

  friend bool operator==(const DataRecord&, const DataRecord&) = default;
};

/// Objective recomputed from the record's own (DTD, SCM, plan).
double recompute_objective(const DataRecord& record, const NetworkLayout& layout,
                           const SliceSpec& slices);

/// Bounded FIFO of data records; the oldest record is evicted first.
class RecordStore {
 public:
  explicit RecordStore(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  /// Oldest first.
  const DataRecord& at(std::size_t idx) const { return records_.at(idx); }

  void insert(DataRecord record);

  /// Up to k records ranked by latent similarity to `dtd`, most similar
  /// first; ties go to the newer record.
  std::vector<DataRecord> select_top_k(const Autoencoder& ae, const DtdInstance& dtd,
                                       std::size_t k) const;

  /// JSON lines: a header object, then one record per line.
  void save(const std::filesystem::path& path) const;
  static RecordStore load(const std::filesystem::path& path);
  /// Appends a single record line to an existing store file.
  static void append(const std::filesystem::path& path, const DataRecord& record);

  friend bool operator==(const RecordStore&, const RecordStore&) = default;

 private:
  std::size_t capacity_;
  std::deque<DataRecord> records_;
};

struct UlscsResult : SearchResult {
  double baseline_objective = kInfeasibleObjective;
  std::vector<double> warm_start_objectives;
};

/// Baseline local search from the minimal decision, then one warm-started
/// local search per retrieved record; keeps the best and stores the outcome.
UlscsResult ulscs(const PlanningInputs& in, const Autoencoder& ae, RecordStore& store,
                  std::size_t k, std::uint64_t seed, const SearchOptions& options = {});

}  // namespace ranplan

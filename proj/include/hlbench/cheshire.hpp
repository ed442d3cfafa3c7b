#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hlbench/hypergraph.hpp"

namespace hlbench {

struct CheshireParams {
  std::size_t embed_dim = 32;
  std::size_t conv_dim = 32;
  /// Number of Chebyshev terms K; term k = 1 is the identity.
  std::size_t cheby_order = 3;
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
  double learn_rate = 1e-2;
  std::size_t train_neg_ratio = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// All trainable parameters in one flat vector:
///   encoder weight (d x m, column-major), encoder bias (d),
///   K convolution weights (d' x d each), head weight (2d'), head bias.
class CheshireWeights {
 public:
  CheshireWeights() = default;
  CheshireWeights(std::size_t embed_dim, std::size_t conv_dim, std::size_t cheby_order, std::size_t num_hyperedges);

  std::size_t embed_dim() const { return d_; }
  std::size_t conv_dim() const { return dc_; }
  std::size_t cheby_order() const { return k_; }
  std::size_t num_hyperedges() const { return m_; }

  Eigen::VectorXd& data() { return data_; }
  const Eigen::VectorXd& data() const { return data_; }

  using MatMap = Eigen::Map<Eigen::MatrixXd>;
  using ConstMatMap = Eigen::Map<const Eigen::MatrixXd>;
  using VecMap = Eigen::Map<Eigen::VectorXd>;
  using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

  MatMap enc_w() { return {data_.data(), idx(d_), idx(m_)}; }
  ConstMatMap enc_w() const { return {data_.data(), idx(d_), idx(m_)}; }
  VecMap enc_b() { return {data_.data() + off_enc_b(), idx(d_)}; }
  ConstVecMap enc_b() const { return {data_.data() + off_enc_b(), idx(d_)}; }
  /// k is 0-based here: conv_w(0) multiplies the identity term.
  MatMap conv_w(std::size_t k) { return {data_.data() + off_conv(k), idx(dc_), idx(d_)}; }
  ConstMatMap conv_w(std::size_t k) const { return {data_.data() + off_conv(k), idx(dc_), idx(d_)}; }
  VecMap head_w() { return {data_.data() + off_head(), idx(2 * dc_)}; }
  ConstVecMap head_w() const { return {data_.data() + off_head(), idx(2 * dc_)}; }
  double& head_b() { return data_(data_.size() - 1); }
  double head_b() const { return data_(data_.size() - 1); }

  /// Same shape, all zeros.
  CheshireWeights zeros_like() const;

 private:
  static Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }
  std::size_t off_enc_b() const { return d_ * m_; }
  std::size_t off_conv(std::size_t k) const { return d_ * m_ + d_ + k * dc_ * d_; }
  std::size_t off_head() const { return d_ * m_ + d_ + k_ * dc_ * d_; }

  std::size_t d_ = 0, dc_ = 0, k_ = 0, m_ = 0;
  Eigen::VectorXd data_;
};

/// Glorot-uniform matrices, zero biases.
CheshireWeights init_weights(std::size_t num_hyperedges, const CheshireParams& params, std::uint64_t seed);

/// x_i = tanh(W_enc h_i + b_enc) for every node (rows of the result).
Eigen::MatrixXd init_embeddings(const IncidenceMatrix& h, const CheshireWeights& w);

/// Rescaled clique Laplacian applied to row-stacked features:
/// (I - 2J/s) X, i.e. each row minus twice the row mean.
Eigen::MatrixXd apply_clique_laplacian(const Eigen::MatrixXd& x);

/// Chebyshev terms z^(1..K) for the clique on the rows of x_s.
std::vector<Eigen::MatrixXd> chebyshev_terms(const Eigen::MatrixXd& x_s, std::size_t order);

/// tanh(sum_k z^(k) W_conv^(k)^T); rows follow x_s.
Eigen::MatrixXd clique_cheby_conv(const Eigen::MatrixXd& x_s, const CheshireWeights& w);

/// [root-mean-square per column ; max - min per column].
Eigen::VectorXd pool(const Eigen::MatrixXd& xhat);

/// Probability that S is a hyperedge, given node embeddings x (n x d).
double cheshire_score(const CheshireWeights& w, const Eigen::MatrixXd& x, std::span<const NodeId> s);

struct LabeledSet {
  NodeSet nodes;
  double label = 0.0;
};

/// Mean binary cross-entropy over `batch` and its gradient with respect to
/// every parameter, with embeddings recomputed from the incidence rows.
double loss_and_gradient(const CheshireWeights& w, const IncidenceMatrix& h, const std::vector<LabeledSet>& batch,
                         CheshireWeights* grad);

class CheshireModel {
 public:
  CheshireModel() = default;
  CheshireModel(CheshireParams params, Hypergraph train_hypergraph, CheshireWeights weights);

  const CheshireParams& params() const { return params_; }
  const CheshireWeights& weights() const { return weights_; }
  const Eigen::MatrixXd& embeddings() const { return embeddings_; }
  /// Observed hyperedges in canonical (lexicographic) order; column order of H.
  const Hypergraph& hypergraph() const { return hypergraph_; }

  double score(std::span<const NodeId> s) const;

  /// Text checkpoint with hexadecimal floats; load() restores bit-exactly.
  void save(std::ostream& out) const;
  static CheshireModel load(std::istream& in);

 private:
  CheshireParams params_;
  Hypergraph hypergraph_;
  CheshireWeights weights_;
  Eigen::MatrixXd embeddings_;
};

struct TrainHistory {
  std::vector<double> epoch_loss;
};

/// Trains on the observed hyperedges with per-epoch corrupted negatives and
/// Adam updates. Deterministic given params.seed and independent of the
/// storage order of h_obs's hyperedges.
CheshireModel train(const Hypergraph& h_obs, const CheshireParams& params, TrainHistory* history = nullptr);

}  // namespace hlbench

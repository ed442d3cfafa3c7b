#include "hlbench/cheshire.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "hlbench/rng.hpp"

namespace hlbench {

void CheshireParams::validate() const {
  if (embed_dim == 0 || conv_dim == 0 || cheby_order == 0 || epochs == 0 || batch_size == 0 || train_neg_ratio == 0)
    throw Error("CHESHIRE parameters must all be positive");
  if (!(learn_rate > 0.0) || !std::isfinite(learn_rate)) throw Error("CHESHIRE learn_rate must be positive");
}

CheshireWeights::CheshireWeights(std::size_t embed_dim, std::size_t conv_dim, std::size_t cheby_order,
                                 std::size_t num_hyperedges)
    : d_(embed_dim), dc_(conv_dim), k_(cheby_order), m_(num_hyperedges) {
  const std::size_t total = d_ * m_ + d_ + k_ * dc_ * d_ + 2 * dc_ + 1;
  data_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
}

CheshireWeights CheshireWeights::zeros_like() const { return CheshireWeights(d_, dc_, k_, m_); }

CheshireWeights init_weights(std::size_t num_hyperedges, const CheshireParams& params, std::uint64_t seed) {
  params.validate();
  CheshireWeights w(params.embed_dim, params.conv_dim, params.cheby_order, num_hyperedges);
  Rng rng(derive_seed(seed, 0x696e6974));
  auto glorot = [&rng](auto&& m) {
    const double bound = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = rng.uniform(-bound, bound);
  };
  glorot(w.enc_w());
  for (std::size_t k = 0; k < params.cheby_order; ++k) glorot(w.conv_w(k));
  {
    auto hw = w.head_w();
    const double bound = std::sqrt(6.0 / static_cast<double>(hw.size() + 1));
    for (Eigen::Index i = 0; i < hw.size(); ++i) hw(i) = rng.uniform(-bound, bound);
  }
  return w;
}

namespace {

Eigen::VectorXd encoder_preactivation(const IncidenceMatrix& h, const CheshireWeights& w, std::size_t node) {
  Eigen::VectorXd pre = w.enc_b();
  const auto enc = w.enc_w();
  for (std::size_t e : h.row(node)) pre += enc.col(static_cast<Eigen::Index>(e));
  return pre;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log1p_exp(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& x, std::span<const NodeId> s) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(s.size()), x.cols());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= static_cast<std::size_t>(x.rows())) throw Error("CHESHIRE: node " + std::to_string(s[i]) + " has no embedding");
    out.row(static_cast<Eigen::Index>(i)) = x.row(s[i]);
  }
  return out;
}

}  // namespace

Eigen::MatrixXd init_embeddings(const IncidenceMatrix& h, const CheshireWeights& w) {
  if (h.cols() != w.num_hyperedges())
    throw Error("init_embeddings: incidence has " + std::to_string(h.cols()) + " columns, encoder expects " +
                std::to_string(w.num_hyperedges()));
  Eigen::MatrixXd x(static_cast<Eigen::Index>(h.rows()), static_cast<Eigen::Index>(w.embed_dim()));
  for (std::size_t i = 0; i < h.rows(); ++i)
    x.row(static_cast<Eigen::Index>(i)) = encoder_preactivation(h, w, i).array().tanh().transpose();
  return x;
}

Eigen::MatrixXd apply_clique_laplacian(const Eigen::MatrixXd& x) {
  // L = I - (J - I)/(s-1), lambda_max = s/(s-1), so 2L/lambda_max - I = I - 2J/s.
  const Eigen::RowVectorXd mean = x.colwise().mean();
  return x - 2.0 * Eigen::MatrixXd::Ones(x.rows(), 1) * mean;
}

std::vector<Eigen::MatrixXd> chebyshev_terms(const Eigen::MatrixXd& x_s, std::size_t order) {
  if (x_s.rows() < 2) throw Error("clique convolution needs at least 2 nodes");
  std::vector<Eigen::MatrixXd> z;
  z.reserve(order);
  z.push_back(x_s);
  if (order >= 2) z.push_back(apply_clique_laplacian(x_s));
  for (std::size_t k = 2; k < order; ++k) z.push_back(2.0 * apply_clique_laplacian(z[k - 1]) - z[k - 2]);
  return z;
}

Eigen::MatrixXd clique_cheby_conv(const Eigen::MatrixXd& x_s, const CheshireWeights& w) {
  if (static_cast<std::size_t>(x_s.cols()) != w.embed_dim()) throw Error("clique_cheby_conv: embedding width mismatch");
  const auto z = chebyshev_terms(x_s, w.cheby_order());
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(x_s.rows(), static_cast<Eigen::Index>(w.conv_dim()));
  for (std::size_t k = 0; k < z.size(); ++k) y += z[k] * w.conv_w(k).transpose();
  return y.array().tanh().matrix();
}

Eigen::VectorXd pool(const Eigen::MatrixXd& xhat) {
  const Eigen::Index c = xhat.cols();
  Eigen::VectorXd out(2 * c);
  out.head(c) = (xhat.array().square().colwise().mean()).sqrt().transpose();
  out.tail(c) = (xhat.colwise().maxCoeff() - xhat.colwise().minCoeff()).transpose();
  return out;
}

double cheshire_score(const CheshireWeights& w, const Eigen::MatrixXd& x, std::span<const NodeId> s) {
  if (s.size() < 2) throw Error("CHESHIRE score needs at least 2 nodes");
  // Sorted rows make the floating-point sums, and so the score, independent of input order.
  const NodeSet sorted = canonical(NodeSet(s.begin(), s.end()));
  if (sorted.size() != s.size()) throw Error("CHESHIRE score: repeated node");
  const Eigen::VectorXd h = pool(clique_cheby_conv(gather_rows(x, sorted), w));
  return sigmoid(w.head_w().dot(h) + w.head_b());
}

double loss_and_gradient(const CheshireWeights& w, const IncidenceMatrix& h, const std::vector<LabeledSet>& batch,
                         CheshireWeights* grad) {
  if (batch.empty()) throw Error("loss_and_gradient: empty batch");
  const auto d = static_cast<Eigen::Index>(w.embed_dim());
  const auto dc = static_cast<Eigen::Index>(w.conv_dim());
  const std::size_t order = w.cheby_order();
  const double inv_b = 1.0 / static_cast<double>(batch.size());

  std::unordered_map<NodeId, Eigen::VectorXd> emb;
  auto embedding = [&](NodeId v) -> const Eigen::VectorXd& {
    auto it = emb.find(v);
    if (it == emb.end()) {
      if (v >= h.rows()) throw Error("CHESHIRE: node " + std::to_string(v) + " outside incidence rows");
      it = emb.emplace(v, encoder_preactivation(h, w, v).array().tanh().matrix()).first;
    }
    return it->second;
  };

  double loss = 0.0;
  for (const auto& item : batch) {
    const NodeSet s = canonical(item.nodes);
    if (s.size() < 2) throw Error("loss_and_gradient: candidate with fewer than 2 nodes");
    const auto rows = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXd xs(rows, d);
    for (Eigen::Index i = 0; i < rows; ++i) xs.row(i) = embedding(s[static_cast<std::size_t>(i)]).transpose();

    const auto z = chebyshev_terms(xs, order);
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(rows, dc);
    for (std::size_t k = 0; k < order; ++k) y += z[k] * w.conv_w(k).transpose();
    const Eigen::MatrixXd xhat = y.array().tanh().matrix();
    const Eigen::VectorXd pooled = pool(xhat);
    const double logit = w.head_w().dot(pooled) + w.head_b();
    loss += (log1p_exp(logit) - item.label * logit) * inv_b;
    if (grad == nullptr) continue;

    const double dlogit = (sigmoid(logit) - item.label) * inv_b;
    grad->head_w() += dlogit * pooled;
    grad->head_b() += dlogit;
    const Eigen::VectorXd dpooled = dlogit * w.head_w();

    Eigen::MatrixXd dxhat = Eigen::MatrixXd::Zero(rows, dc);
    for (Eigen::Index j = 0; j < dc; ++j) {
      const double norm = pooled(j);
      if (norm > 0.0) dxhat.col(j) += (dpooled(j) / (static_cast<double>(rows) * norm)) * xhat.col(j);
      Eigen::Index imax = 0, imin = 0;
      xhat.col(j).maxCoeff(&imax);
      xhat.col(j).minCoeff(&imin);
      dxhat(imax, j) += dpooled(dc + j);
      dxhat(imin, j) -= dpooled(dc + j);
    }
    const Eigen::MatrixXd dy = (dxhat.array() * (1.0 - xhat.array().square())).matrix();

    std::vector<Eigen::MatrixXd> dz(order);
    for (std::size_t k = 0; k < order; ++k) {
      grad->conv_w(k) += dy.transpose() * z[k];
      dz[k] = dy * w.conv_w(k);
    }
    // Reverse the recursion z_k = 2 L z_{k-1} - z_{k-2}; L is symmetric.
    for (std::size_t k = order; k-- > 2;) {
      dz[k - 1] += 2.0 * apply_clique_laplacian(dz[k]);
      dz[k - 2] -= dz[k];
    }
    if (order >= 2) dz[0] += apply_clique_laplacian(dz[1]);

    auto enc_grad = grad->enc_w();
    for (Eigen::Index i = 0; i < rows; ++i) {
      const NodeId v = s[static_cast<std::size_t>(i)];
      const Eigen::VectorXd& x = emb.at(v);
      const Eigen::VectorXd dpre = (dz[0].row(i).transpose().array() * (1.0 - x.array().square())).matrix();
      grad->enc_b() += dpre;
      for (std::size_t e : h.row(v)) enc_grad.col(static_cast<Eigen::Index>(e)) += dpre;
    }
  }
  return loss;
}

// --- model -------------------------------------------------------------------

CheshireModel::CheshireModel(CheshireParams params, Hypergraph train_hypergraph, CheshireWeights weights)
    : params_(params), hypergraph_(std::move(train_hypergraph)), weights_(std::move(weights)) {
  params_.validate();
  if (weights_.num_hyperedges() != hypergraph_.num_edges() || weights_.embed_dim() != params_.embed_dim ||
      weights_.conv_dim() != params_.conv_dim || weights_.cheby_order() != params_.cheby_order)
    throw Error("CheshireModel: weight shapes do not match parameters");
  embeddings_ = init_embeddings(incidence(hypergraph_), weights_);
}

double CheshireModel::score(std::span<const NodeId> s) const { return cheshire_score(weights_, embeddings_, s); }

namespace {

std::string hex(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw Error("checkpoint: bad number '" + s + "'");
  return v;
}

template <class T>
T expect_value(std::istream& in, const char* key) {
  std::string k;
  T v{};
  if (!(in >> k) || k != key || !(in >> v)) throw Error(std::string("checkpoint: expected '") + key + "'");
  return v;
}

}  // namespace

void CheshireModel::save(std::ostream& out) const {
  out << "hlbench-cheshire 1\n";
  out << "embed_dim " << params_.embed_dim << "\nconv_dim " << params_.conv_dim << "\ncheby_order "
      << params_.cheby_order << "\nepochs " << params_.epochs << "\nbatch_size " << params_.batch_size
      << "\nlearn_rate " << hex(params_.learn_rate) << "\ntrain_neg_ratio " << params_.train_neg_ratio << "\nseed "
      << params_.seed << '\n';
  out << "nodes " << hypergraph_.num_nodes() << '\n';
  for (const auto& label : hypergraph_.labels()) out << label << '\n';
  out << "hyperedges " << hypergraph_.num_edges() << '\n';
  for (const auto& e : hypergraph_.edges()) {
    out << e.size();
    for (NodeId v : e) out << ' ' << v;
    out << '\n';
  }
  out << "weights " << weights_.data().size() << '\n';
  for (Eigen::Index i = 0; i < weights_.data().size(); ++i) out << hex(weights_.data()(i)) << '\n';
}

CheshireModel CheshireModel::load(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "hlbench-cheshire" || version != 1)
    throw Error("checkpoint: not a CHESHIRE checkpoint (version 1)");
  CheshireParams p;
  p.embed_dim = expect_value<std::size_t>(in, "embed_dim");
  p.conv_dim = expect_value<std::size_t>(in, "conv_dim");
  p.cheby_order = expect_value<std::size_t>(in, "cheby_order");
  p.epochs = expect_value<std::size_t>(in, "epochs");
  p.batch_size = expect_value<std::size_t>(in, "batch_size");
  p.learn_rate = parse_hex(expect_value<std::string>(in, "learn_rate"));
  p.train_neg_ratio = expect_value<std::size_t>(in, "train_neg_ratio");
  p.seed = expect_value<std::uint64_t>(in, "seed");
  const auto n = expect_value<std::size_t>(in, "nodes");
  std::string line;
  std::getline(in, line);
  std::vector<std::string> labels(n);
  for (auto& label : labels)
    if (!std::getline(in, label)) throw Error("checkpoint: truncated node labels");
  Hypergraph h(std::move(labels));
  const auto m = expect_value<std::size_t>(in, "hyperedges");
  for (std::size_t e = 0; e < m; ++e) {
    std::size_t size = 0;
    if (!(in >> size)) throw Error("checkpoint: truncated hyperedges");
    NodeSet s(size);
    for (auto& v : s)
      if (!(in >> v)) throw Error("checkpoint: truncated hyperedge");
    if (!h.add(std::move(s))) throw Error("checkpoint: duplicate hyperedge");
  }
  const auto count = expect_value<Eigen::Index>(in, "weights");
  CheshireWeights w(p.embed_dim, p.conv_dim, p.cheby_order, m);
  if (count != w.data().size()) throw Error("checkpoint: weight count does not match shapes");
  std::string tok;
  for (Eigen::Index i = 0; i < count; ++i) {
    if (!(in >> tok)) throw Error("checkpoint: truncated weights");
    w.data()(i) = parse_hex(tok);
  }
  return CheshireModel(p, std::move(h), std::move(w));
}

// --- training ----------------------------------------------------------------

namespace {

/// Replaces ceil(k/2) members of `pos` with random non-members. Returns an
/// empty set if no corruption outside `observed` was found.
NodeSet corrupt(const NodeSet& pos, std::size_t n, const Hypergraph& observed, Rng& rng) {
  const std::size_t k = pos.size();
  const std::size_t replace = (k + 1) / 2;
  if (n < k + replace) return {};
  for (int attempt = 0; attempt < 100; ++attempt) {
    NodeSet s = pos;
    std::vector<std::size_t> slots(k);
    for (std::size_t i = 0; i < k; ++i) slots[i] = i;
    rng.shuffle(slots);
    for (std::size_t r = 0; r < replace; ++r) {
      NodeId v;
      do {
        v = static_cast<NodeId>(rng.below(n));
      } while (std::find(s.begin(), s.end(), v) != s.end() || std::find(pos.begin(), pos.end(), v) != pos.end());
      s[slots[r]] = v;
    }
    canonicalize(s);
    if (!observed.contains(s)) return s;
  }
  return {};
}

}  // namespace

CheshireModel train(const Hypergraph& h_obs, const CheshireParams& params, TrainHistory* history) {
  params.validate();
  if (h_obs.num_edges() < 10)
    throw Error("CHESHIRE training needs at least 10 observed hyperedges, got " + std::to_string(h_obs.num_edges()));

  // Canonical hyperedge order makes training independent of input order.
  std::vector<NodeSet> sorted = h_obs.edges();
  std::sort(sorted.begin(), sorted.end());
  Hypergraph hyper(h_obs.labels());
  for (auto& e : sorted) hyper.add(e);
  const IncidenceMatrix inc = incidence(hyper);
  const std::size_t n = hyper.num_nodes();

  CheshireWeights w = init_weights(hyper.num_edges(), params, params.seed);
  Eigen::VectorXd m1 = Eigen::VectorXd::Zero(w.data().size());
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(w.data().size());
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  double beta1_t = 1.0, beta2_t = 1.0;

  Rng rng(derive_seed(params.seed, 0x747261696e));
  std::vector<std::size_t> order(hyper.num_edges());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t epoch_items = 0;
    for (std::size_t start = 0; start < order.size(); start += params.batch_size) {
      const std::size_t stop = std::min(order.size(), start + params.batch_size);
      std::vector<LabeledSet> batch;
      for (std::size_t b = start; b < stop; ++b) {
        const NodeSet& pos = hyper.edge(order[b]);
        batch.push_back({pos, 1.0});
        for (std::size_t r = 0; r < params.train_neg_ratio; ++r) {
          NodeSet neg = corrupt(pos, n, hyper, rng);
          if (!neg.empty()) batch.push_back({std::move(neg), 0.0});
        }
      }
      CheshireWeights g = w.zeros_like();
      const double loss = loss_and_gradient(w, inc, batch, &g);
      if (!std::isfinite(loss)) throw Error("CHESHIRE training: non-finite loss at epoch " + std::to_string(epoch + 1));
      epoch_loss += loss * static_cast<double>(batch.size());
      epoch_items += batch.size();

      beta1_t *= beta1;
      beta2_t *= beta2;
      const Eigen::VectorXd& gd = g.data();
      m1 = beta1 * m1 + (1.0 - beta1) * gd;
      m2 = beta2 * m2 + (1.0 - beta2) * gd.cwiseProduct(gd);
      const double lr_t = params.learn_rate * std::sqrt(1.0 - beta2_t) / (1.0 - beta1_t);
      w.data().array() -= lr_t * m1.array() / (m2.array().sqrt() + eps);
    }
    if (history) history->epoch_loss.push_back(epoch_loss / static_cast<double>(epoch_items));
  }
  return CheshireModel(params, std::move(hyper), std::move(w));
}

}  // namespace hlbench

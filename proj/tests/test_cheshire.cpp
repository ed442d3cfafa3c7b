#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hlbench/cheshire.hpp"
#include "hlbench/evaluation.hpp"
#include "hlbench/masking.hpp"
#include "hlbench/rng.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace hlbench;

namespace {

CheshireParams small_params(std::size_t order = 3) {
  CheshireParams p;
  p.embed_dim = 5;
  p.conv_dim = 4;
  p.cheby_order = order;
  p.epochs = 30;
  p.batch_size = 8;
  return p;
}

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

Hypergraph toy_hypergraph() {
  Hypergraph h(std::vector<std::string>{"a", "b", "c", "d", "e", "f", "g", "h"});
  const std::vector<NodeSet> edges = {{0, 1},    {1, 2},    {2, 3},    {3, 4}, {4, 5},
                                      {5, 6},    {6, 7},    {0, 1, 2}, {2, 3, 4}, {5, 6, 7}};
  for (const auto& e : edges) h.add(e);
  return h;
}

using fixture::planted;

}  // namespace

TEST_CASE("a single Chebyshev term is a dense layer") {
  CheshireWeights w(3, 2, 1, 1);
  w.conv_w(0) = random_matrix(2, 3, 1);
  const Eigen::MatrixXd x = random_matrix(4, 3, 2);
  const Eigen::MatrixXd expected = (x * w.conv_w(0).transpose()).array().tanh().matrix();
  CHECK((clique_cheby_conv(x, w) - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("clique Laplacian subtracts twice the row mean") {
  const Eigen::MatrixXd x = random_matrix(5, 3, 4);
  const Eigen::MatrixXd l = Eigen::MatrixXd::Identity(5, 5) - 2.0 * Eigen::MatrixXd::Ones(5, 5) / 5.0;
  CHECK((apply_clique_laplacian(x) - l * x).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Chebyshev convolution matches the spectral-domain oracle") {
  for (Eigen::Index s = 2; s <= 6; ++s)
    for (std::size_t order = 1; order <= 4; ++order) {
      CheshireWeights w(4, 3, order, 1);
      std::vector<Eigen::MatrixXd> ws;
      for (std::size_t k = 0; k < order; ++k) {
        w.conv_w(k) = random_matrix(3, 4, 10 * static_cast<std::uint64_t>(s) + k);
        ws.push_back(w.conv_w(k));
      }
      const Eigen::MatrixXd x = random_matrix(s, 4, 99 + static_cast<std::uint64_t>(s));
      CHECK((clique_cheby_conv(x, w) - oracle::spectral_clique_filter(x, ws)).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("convolution is row-permutation equivariant") {
  CheshireWeights w(4, 3, 3, 1);
  for (std::size_t k = 0; k < 3; ++k) w.conv_w(k) = random_matrix(3, 4, 20 + k);
  const Eigen::MatrixXd x = random_matrix(5, 4, 7);
  Eigen::PermutationMatrix<Eigen::Dynamic> p(5);
  p.indices() << 3, 0, 4, 1, 2;
  const Eigen::MatrixXd lhs = clique_cheby_conv(p * x, w);
  const Eigen::MatrixXd rhs = p * clique_cheby_conv(x, w);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("pool") {
  Eigen::MatrixXd x(2, 2);
  x << 3, -1, 4, 1;
  const Eigen::VectorXd p = pool(x);
  REQUIRE(p.size() == 4);
  CHECK(p(0) == doctest::Approx(std::sqrt(12.5)));
  CHECK(p(1) == doctest::Approx(1.0));
  CHECK(p(2) == doctest::Approx(1.0));
  CHECK(p(3) == doctest::Approx(2.0));
}

TEST_CASE("score lies in (0, 1) and ignores node order") {
  const Hypergraph h = toy_hypergraph();
  const CheshireWeights w = init_weights(h.num_edges(), small_params(), 3);
  const Eigen::MatrixXd x = init_embeddings(incidence(h), w);
  const NodeSet a{1, 4, 6};
  const NodeSet b{6, 1, 4};
  const double sa = cheshire_score(w, x, a);
  CHECK(sa > 0.0);
  CHECK(sa < 1.0);
  CHECK(std::abs(sa - cheshire_score(w, x, b)) < 1e-14);
}

TEST_CASE("analytic gradient agrees with central differences") {
  const Hypergraph h = toy_hypergraph();
  const IncidenceMatrix inc = incidence(h);
  const CheshireWeights w = init_weights(h.num_edges(), small_params(), 11);
  const std::vector<LabeledSet> batch = {
      {{0, 1, 2}, 1.0}, {{0, 4, 7}, 0.0}, {{3, 4}, 1.0}, {{1, 6}, 0.0}, {{2, 5, 6, 7}, 0.0}};
  CheshireWeights grad = w.zeros_like();
  loss_and_gradient(w, inc, batch, &grad);
  const double eps = 1e-5;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < w.data().size(); ++i) {
    CheshireWeights plus = w, minus = w;
    plus.data()(i) += eps;
    minus.data()(i) -= eps;
    const double fd =
        (loss_and_gradient(plus, inc, batch, nullptr) - loss_and_gradient(minus, inc, batch, nullptr)) / (2 * eps);
    const double an = grad.data()(i);
    const double rel = std::abs(fd - an) / std::max(1e-6, std::abs(fd) + std::abs(an));
    worst = std::max(worst, rel);
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("training lowers the loss on planted data") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CheshireParams p = small_params();
    p.seed = seed;
    p.epochs = 40;
    TrainHistory hist;
    train(planted(100 + seed), p, &hist);
    REQUIRE(hist.epoch_loss.size() == 40);
    CHECK(hist.epoch_loss.back() <= hist.epoch_loss.front());
  }
}

TEST_CASE("untrained model has chance-level AUC") {
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Hypergraph h = planted(7);
    const MaskSplit split = mask(h, 0.2, Mechanism::mcar, seed);
    const Hypergraph obs = observed_hypergraph(h, split);
    const auto cands = hp_candidates(h, split, 1, seed);
    CheshireParams p = small_params();
    p.seed = seed;
    CheshireModel model(p, obs, init_weights(obs.num_edges(), p, seed));
    std::vector<double> scores;
    for (const auto& c : cands.items) scores.push_back(model.score(c.nodes));
    sum += roc_auc(scores, cands.labels());
  }
  const double mean = sum / 20.0;
  CHECK(mean >= 0.3);
  CHECK(mean <= 0.7);
}

TEST_CASE("training does not depend on hyperedge storage order") {
  const Hypergraph h = planted(5, 30);
  std::vector<NodeSet> reversed(h.edges().rbegin(), h.edges().rend());
  Hypergraph r(h.labels());
  for (const auto& e : reversed) r.add(e);
  CheshireParams p = small_params();
  p.epochs = 5;
  const CheshireModel a = train(h, p);
  const CheshireModel b = train(r, p);
  CHECK(a.weights().data() == b.weights().data());
  CHECK(a.score(NodeSet{0, 1, 2}) == b.score(NodeSet{0, 1, 2}));
}

TEST_CASE("checkpoint reload is bit-exact") {
  CheshireParams p = small_params();
  p.epochs = 3;
  const CheshireModel model = train(planted(9, 20), p);
  std::stringstream ss;
  model.save(ss);
  const CheshireModel back = CheshireModel::load(ss);
  CHECK(back.weights().data() == model.weights().data());
  CHECK(back.embeddings() == model.embeddings());
  for (const NodeSet& s : {NodeSet{0, 1, 2}, NodeSet{3, 40}, NodeSet{10, 22, 31, 59}})
    CHECK(back.score(s) == model.score(s));

  std::istringstream junk("not a checkpoint\n");
  CHECK_THROWS_AS(CheshireModel::load(junk), Error);
}

TEST_CASE("training rejects bad inputs") {
  CheshireParams p = small_params();
  p.epochs = 0;
  CHECK_THROWS_AS(train(planted(1, 20), p), Error);
  CHECK_THROWS_AS(train(planted(1, 5), small_params()), Error);
}

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hlbench/evaluation.hpp"
#include "hlbench/rng.hpp"
#include "oracles.hpp"

using namespace hlbench;

namespace {

double auc(std::vector<double> s, std::vector<int> y) { return roc_auc(s, y); }

}  // namespace

TEST_CASE("AUC examples") {
  CHECK(auc({0.9, 0.1}, {1, 0}) == 1.0);
  CHECK(auc({0.1, 0.9}, {1, 0}) == 0.0);
  CHECK(auc({0.3, 0.3, 0.3, 0.3}, {1, 0, 1, 0}) == 0.5);
  CHECK(auc({0.8, 0.8, 0.2}, {1, 0, 0}) == 0.75);
  CHECK_THROWS_AS(auc({0.2, 0.4}, {1, 1}), Error);
  CHECK_THROWS_AS(auc({0.2}, {1, 0}), Error);
}

TEST_CASE("AUC equals the pairwise-comparison oracle") {
  Rng rng(31);
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 2 + rng.below(40);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(8)) / 8.0;  // coarse grid forces ties
      y[i] = static_cast<int>(rng.below(2));
    }
    y[0] = 1;
    y[1] = 0;
    const auto exact = oracle::auc_pairwise(s, y);
    CHECK(roc_auc(s, y) == doctest::Approx(static_cast<double>(exact.num) / static_cast<double>(exact.den)).epsilon(1e-12));
  }
}

TEST_CASE("AUC is invariant under monotone transforms and flips under negation") {
  Rng rng(8);
  for (int inst = 0; inst < 50; ++inst) {
    std::vector<double> s(30), t(30), neg(30);
    std::vector<int> y(30);
    for (std::size_t i = 0; i < 30; ++i) {
      s[i] = rng.uniform();
      t[i] = std::exp(3 * s[i]) - 7;
      neg[i] = -s[i];
      y[i] = i % 3 == 0;
    }
    CHECK(roc_auc(s, y) == roc_auc(t, y));
    CHECK(roc_auc(s, y) + roc_auc(neg, y) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("F1 and MCC examples") {
  const std::vector<int> y{1, 1, 0, 0};
  auto perfect = f1_mcc(std::vector<double>{0.9, 0.8, 0.1, 0.2}, y);
  CHECK(perfect.f1 == 1.0);
  CHECK(perfect.mcc == doctest::Approx(1.0));
  auto all_pos = f1_mcc(std::vector<double>{0.9, 0.9, 0.9, 0.9}, y);
  CHECK(all_pos.f1 == doctest::Approx(2.0 / 3.0));
  CHECK(all_pos.mcc == 0.0);
  auto all_neg = f1_mcc(std::vector<double>{0.1, 0.1, 0.1, 0.1}, y);
  CHECK(all_neg.f1 == 0.0);
  CHECK(all_neg.mcc == 0.0);
  auto inverted = f1_mcc(std::vector<double>{0.1, 0.2, 0.9, 0.8}, y);
  CHECK(inverted.mcc == doctest::Approx(-1.0));
}

TEST_CASE("MCC is antisymmetric under label flip of predictions") {
  Rng rng(4);
  for (int inst = 0; inst < 100; ++inst) {
    std::vector<double> s(20), flipped(20);
    std::vector<int> y(20);
    for (std::size_t i = 0; i < 20; ++i) {
      s[i] = rng.below(2) ? 0.9 : 0.1;
      flipped[i] = 1.0 - s[i];
      y[i] = static_cast<int>(rng.below(2));
    }
    CHECK(f1_mcc(s, y).mcc == doctest::Approx(-f1_mcc(flipped, y).mcc).epsilon(1e-12));
  }
}

TEST_CASE("minmax_normalize") {
  CHECK(minmax_normalize(std::vector<double>{2, 4, 3}) == std::vector<double>{0, 1, 0.5});
  CHECK(minmax_normalize(std::vector<double>{5, 5}) == std::vector<double>{0, 0});
}

TEST_CASE("method names round-trip") {
  for (Method m : all_methods()) CHECK(parse_method(to_string(m)) == m);
  CHECK(parse_method("hp-cheshire") == Method::hp_cheshire);
  CHECK(task_of(Method::lp_aa) == Task::lp);
  CHECK(task_of(Method::ergm) == Task::hp);
  CHECK_THROWS_AS(parse_method("HP-Magic"), Error);
}

TEST_CASE("run_trial is deterministic and the null baseline sits at 0.5") {
  const Dataset data = make_dataset("er", oracle::random_graph(30, 0.2, 2));
  MethodOptions opt;
  opt.cheshire.epochs = 5;
  opt.cheshire.embed_dim = 8;
  opt.cheshire.conv_dim = 8;
  for (Method m : all_methods()) {
    const TrialResult a = run_trial(data, m, Mechanism::mcar, 0.2, 13, opt);
    const TrialResult b = run_trial(data, m, Mechanism::mcar, 0.2, 13, opt);
    CHECK_MESSAGE(a.ok(), to_string(m), ": ", a.status);
    CHECK(a.auc == b.auc);
    CHECK(a.f1 == b.f1);
    CHECK(a.mcc == b.mcc);
    CHECK(a.task == task_of(m));
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    CHECK(run_trial(data, Method::hp_null, Mechanism::mnar, 0.3, seed, opt).auc == 0.5);
}

TEST_CASE("stage failures become a status") {
  Graph tiny(4);
  tiny.add_edge(0, 1);
  tiny.add_edge(2, 3);
  const Dataset data = make_dataset("tiny", tiny);
  const TrialResult r = run_trial(data, Method::hp_aa, Mechanism::mcar, 0.2, 1);
  CHECK_FALSE(r.ok());
  CHECK(r.status.find("error") != std::string::npos);
}

TEST_CASE("aggregate") {
  std::vector<TrialResult> rows;
  for (double a : {0.6, 0.8}) {
    TrialResult r;
    r.dataset = "d";
    r.method = Method::hp_aa;
    r.rho = 0.2;
    r.auc = a;
    r.f1 = a / 2;
    rows.push_back(r);
  }
  TrialResult failed = rows[0];
  failed.status = "error: boom";
  rows.push_back(failed);
  TrialResult other = rows[0];
  other.dataset = "e";
  rows.push_back(other);

  const auto agg = aggregate(rows);
  REQUIRE(agg.size() == 2);
  CHECK(agg[0].dataset == "d");
  CHECK(agg[0].n_trials == 2);
  CHECK(agg[0].n_failed == 1);
  CHECK(agg[0].auc.mean == doctest::Approx(0.7));
  CHECK(agg[0].auc.sd == doctest::Approx(std::sqrt(0.02)));
  CHECK(agg[1].auc.sd == 0.0);

  std::ostringstream csv;
  write_results_csv(rows, csv);
  CHECK(csv.str().rfind("dataset,method,task,mechanism,rho,seed,auc,f1,mcc,status\n", 0) == 0);
  std::ostringstream table;
  write_auc_table(agg, table);
  CHECK(table.str().find("0.700") != std::string::npos);
}

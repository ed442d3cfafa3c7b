#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hlbench/cheshire.hpp"
#include "hlbench/ergm.hpp"
#include "hlbench/graph.hpp"
#include "hlbench/hypergraph.hpp"
#include "hlbench/masking.hpp"

namespace hlbench {

// --- metrics -----------------------------------------------------------------

/// Mann-Whitney AUC with average ranks for ties; constant scores give 0.5.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

struct F1Mcc {
  double f1 = 0.0;
  double mcc = 0.0;
};

/// Predicts positive when score >= threshold. F1 is 0 with no predicted or
/// actual positives; MCC is 0 when any confusion-matrix marginal is 0.
F1Mcc f1_mcc(std::span<const double> scores, std::span<const int> labels, double threshold = 0.5);

/// Maps scores affinely onto [0, 1]; a constant vector maps to all zeros.
std::vector<double> minmax_normalize(std::span<const double> scores);

// --- methods -----------------------------------------------------------------

enum class Task { lp, hp };
enum class Method { lp_cn, lp_aa, hp_cn, hp_aa, hp_null, hp_matcomp, hp_cheshire, ergm };

std::string_view to_string(Task t);
std::string_view to_string(Method m);
Method parse_method(std::string_view s);
Task task_of(Method m);
const std::vector<Method>& all_methods();

struct MethodOptions {
  std::size_t neg_ratio = 1;
  /// 0 selects min(16, n - 1).
  std::size_t matcomp_rank = 0;
  CheshireParams cheshire;
  double ergm_degree_decay = 0.5;
  double ergm_esp_decay = 0.5;
  MpleOptions mple;
  /// ERGM is fitted on the core-k of G_obs when G_obs has more nodes than
  /// ergm_core_threshold; 0 disables the core.
  std::size_t ergm_core = 100;
  std::size_t ergm_core_threshold = 1000;
  MaskOptions mask;
  double threshold = 0.5;
};

struct Dataset {
  std::string name;
  Graph graph;
  Hypergraph hypergraph;
  /// Activity volume per node when known (message counts); degree otherwise.
  std::optional<std::vector<double>> volumes;
};

/// Wraps a graph and derives its clique hypergraph.
Dataset make_dataset(std::string name, Graph g, std::optional<std::vector<double>> volumes = std::nullopt);

/// Wraps an explicit hypergraph; the graph is its clique expansion.
Dataset make_dataset(std::string name, Hypergraph h);

/// Everything every method of one trial shares: the split, the observed
/// structures and both candidate sets.
struct TrialSetup {
  MaskSplit split;
  Graph g_obs;
  Hypergraph h_obs;
  std::optional<CandidateSet> hp;
  std::optional<CandidateSet> lp;
  std::string hp_error;
  std::string lp_error;
};

TrialSetup prepare_trial(const Dataset& data, Mechanism mechanism, double rho, std::uint64_t seed,
                         const MethodOptions& options = {});

struct TrialResult {
  std::string dataset;
  Method method = Method::hp_null;
  Task task = Task::hp;
  Mechanism mechanism = Mechanism::mcar;
  double rho = 0.0;
  std::uint64_t seed = 0;
  double auc = 0.0;
  double f1 = 0.0;
  double mcc = 0.0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

/// Scores of a method on its task's candidate set, fitted on observed data only.
std::vector<double> method_scores(const Dataset& data, const TrialSetup& setup, Method method,
                                  const MethodOptions& options = {});

/// Fits and scores `method` on a prepared trial. Stage failures are
/// reported in TrialResult::status rather than thrown.
TrialResult evaluate_method(const Dataset& data, const TrialSetup& setup, Method method,
                            const MethodOptions& options = {});

/// load -> mask -> observe -> candidates -> fit/score -> metrics.
TrialResult run_trial(const Dataset& data, Method method, Mechanism mechanism, double rho, std::uint64_t seed,
                      const MethodOptions& options = {});

// --- aggregation -------------------------------------------------------------

struct MetricSummary {
  double mean = 0.0;
  double sd = 0.0;
};

struct AggregateRow {
  std::string dataset;
  Method method = Method::hp_null;
  Task task = Task::hp;
  Mechanism mechanism = Mechanism::mcar;
  double rho = 0.0;
  std::size_t n_trials = 0;
  std::size_t n_failed = 0;
  MetricSummary auc, f1, mcc;
};

/// Groups by (dataset, method, task, mechanism, rho) in first-seen order.
/// Failed trials are counted but excluded from the statistics; sd is the
/// sample standard deviation (0 for a single trial).
std::vector<AggregateRow> aggregate(const std::vector<TrialResult>& trials);

void write_results_csv(const std::vector<TrialResult>& rows, std::ostream& out);
void write_aggregate_csv(const std::vector<AggregateRow>& rows, std::ostream& out);
/// Fixed-width mean AUC table, three decimals, datasets by methods.
void write_auc_table(const std::vector<AggregateRow>& rows, std::ostream& out);

std::string format_rho(double rho);

}  // namespace hlbench

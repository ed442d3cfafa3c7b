#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hlbench/evaluation.hpp"
#include "hlbench/graph.hpp"

namespace hlbench {

// --- dataset registry --------------------------------------------------------

struct RegistryEntry {
  std::string key;
  std::string title;
  std::string file;  // relative to the data directory
  SummaryStats expected;
};

/// The six bundled covert networks, in table order.
const std::vector<RegistryEntry>& registry();

/// $HLBENCH_DATA_DIR if set, else the data/ directory of the source tree.
std::filesystem::path data_directory();

struct LoadedGraph {
  std::string name;
  Graph graph;
  std::optional<std::vector<double>> volumes;
  std::optional<SummaryStats> expected;
  std::vector<std::string> warnings;
};

/// Loads a registry key or a file path. A .csv file whose header starts
/// with `sender,recipient` is read as a message log and projected; other
/// .csv files are csv edgelists; anything else is a plain edgelist.
/// Registry entries are checked against their expected summary statistics;
/// a mismatch is a warning.
LoadedGraph registry_load(const std::string& key_or_path);

// --- experiment configuration -------------------------------------------------

struct ExperimentConfig {
  std::vector<std::string> datasets;
  std::vector<Method> methods;
  Mechanism mechanism = Mechanism::mcar;
  std::vector<double> rhos = {0.2};
  std::size_t trials = 20;
  std::uint64_t base_seed = 7;
  std::filesystem::path out_dir = "results";
  bool chart = false;
  std::size_t threads = 1;
  /// Per-dataset method exclusions; excluded cells are emitted with status
  /// "excluded".
  std::map<std::string, std::vector<Method>> exclude;
  MethodOptions options;

  void validate() const;
};

/// Reads an INI-style manifest:
///
///   [experiment]  datasets, methods, mechanism, rho, trials, seed, out,
///                 chart, threads
///   [cheshire]    embed_dim, conv_dim, cheby_order, epochs, batch_size,
///                 learn_rate, train_neg_ratio
///   [matcomp]     rank
///   [ergm]        degree_decay, esp_decay, ridge, core, core_threshold
///   [sampling]    neg_ratio, mnar_exponent, threshold
///   [exclude]     <dataset> = <method list>
///
/// Lists are comma separated.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

struct ExperimentOutput {
  std::vector<TrialResult> results;
  std::vector<AggregateRow> aggregates;
};

/// Runs datasets x rho x trials x methods with seed base_seed + trial.
/// Row order is the grid order regardless of worker scheduling.
ExperimentOutput run_grid(const ExperimentConfig& config, std::ostream* log = nullptr);

/// run_grid plus results.csv, aggregate.csv and (with chart) chart.svg in
/// config.out_dir.
ExperimentOutput run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Grouped bar chart of mean AUC: one group per dataset, one bar per method.
void write_auc_chart(const std::vector<AggregateRow>& rows, std::ostream& out);

}  // namespace hlbench

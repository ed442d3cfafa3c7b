#include "hlbench/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#ifndef HLBENCH_DEFAULT_DATA_DIR
#define HLBENCH_DEFAULT_DATA_DIR "data"
#endif

namespace hlbench {

const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> entries = {
      {"christmas2000", "Christmas Eve Bombings 2000", "covert/christmas2000.txt", {14, 16, 16.0 / 91.0, 5}},
      {"bali2002", "Bali Bombing 2002", "covert/bali2002.txt", {15, 24, 24.0 / 105.0, 22}},
      {"embassy2004", "Australian Embassy Bombing 2004", "covert/embassy2004.txt", {10, 15, 15.0 / 45.0, 8}},
      {"bali2005", "Bali Bombing 2005", "covert/bali2005.txt", {9, 15, 15.0 / 36.0, 11}},
      {"hamburg2001", "Hamburg Cell 9/11 2001", "covert/hamburg2001.txt", {12, 23, 23.0 / 66.0, 23}},
      {"london_gang", "London Gang 2005-2009", "covert/london_gang.txt", {50, 85, 85.0 / 1225.0, 46}},
  };
  return entries;
}

std::filesystem::path data_directory() {
  if (const char* env = std::getenv("HLBENCH_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return HLBENCH_DEFAULT_DATA_DIR;
}

namespace {

std::string read_first_data_line(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    return line.substr(b);
  }
  return {};
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

LoadedGraph load_file(const std::filesystem::path& path, std::string name) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read dataset file " + path.string());
  LoadedGraph out;
  out.name = std::move(name);
  const bool csv = lower(path.extension().string()) == ".csv";
  if (csv && lower(read_first_data_line(path)).rfind("sender,recipient", 0) == 0) {
    ProjectedGraph p = project_messages(parse_message_log(in));
    out.graph = std::move(p.graph);
    out.volumes = std::move(p.volume);
    if (p.self_messages_dropped)
      out.warnings.push_back(std::to_string(p.self_messages_dropped) + " self-messages dropped");
    return out;
  }
  ParsedEdgelist parsed = parse_edgelist(in, csv ? EdgelistFormat::csv : EdgelistFormat::plain);
  out.graph = std::move(parsed.graph);
  if (parsed.self_loops_dropped)
    out.warnings.push_back(std::to_string(parsed.self_loops_dropped) + " self-loop lines dropped");
  if (parsed.duplicates_collapsed)
    out.warnings.push_back(std::to_string(parsed.duplicates_collapsed) + " duplicate edges collapsed");
  return out;
}

}  // namespace

LoadedGraph registry_load(const std::string& key_or_path) {
  for (const auto& entry : registry()) {
    if (entry.key != key_or_path) continue;
    const auto path = data_directory() / entry.file;
    if (!std::filesystem::exists(path))
      throw Error("dataset '" + entry.key + "' is registered but " + path.string() +
                  " is missing; see data/README.md for how to obtain it");
    LoadedGraph out = load_file(path, entry.key);
    out.expected = entry.expected;
    if (out.graph.num_nodes() >= 2) {
      const SummaryStats got = graph_stats(out.graph);
      if (got.nodes != entry.expected.nodes || got.edges != entry.expected.edges ||
          got.triangles != entry.expected.triangles ||
          format_density(got.density) != format_density(entry.expected.density))
        out.warnings.push_back("summary statistics differ from the reference values for " + entry.key);
    }
    return out;
  }
  const std::filesystem::path path(key_or_path);
  if (std::filesystem::is_regular_file(path)) return load_file(path, path.stem().string());
  std::string keys;
  for (const auto& e : registry()) keys += (keys.empty() ? "" : ", ") + e.key;
  throw Error("unknown dataset '" + key_or_path + "' (not a file; registered keys: " + keys + ")");
}

// --- configuration -------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (datasets.empty()) throw Error("config: no datasets");
  if (methods.empty()) throw Error("config: no methods");
  if (rhos.empty()) throw Error("config: no rho values");
  for (double r : rhos)
    if (!(r > 0.0 && r < 1.0)) throw Error("config: rho must lie in (0, 1)");
  if (trials < 1) throw Error("config: trials must be >= 1");
  if (options.neg_ratio < 1) throw Error("config: neg_ratio must be >= 1");
  options.cheshire.validate();
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

bool parse_bool(const std::string& s) {
  const std::string t = lower(s);
  if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
  if (t == "false" || t == "no" || t == "0" || t == "off") return false;
  throw Error("config: expected a boolean, got '" + s + "'");
}

template <class Tree>
std::optional<std::uint64_t> get_size(const Tree& tree, const char* path) {
  const auto v = tree.template get_optional<std::string>(path);
  if (!v) return std::nullopt;
  std::size_t used = 0;
  unsigned long long out = 0;
  try {
    if (v->find('-') != std::string::npos) throw std::invalid_argument("negative");
    out = std::stoull(*v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || v->find_first_not_of(" \t", used) != std::string::npos)
    throw Error(std::string("config: ") + path + " expects a non-negative integer, got '" + *v + "'");
  return out;
}

template <class Tree>
std::optional<double> get_double(const Tree& tree, const char* path) {
  const auto v = tree.template get_optional<std::string>(path);
  if (!v) return std::nullopt;
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(*v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || v->find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(out))
    throw Error(std::string("config: ") + path + " expects a number, got '" + *v + "'");
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  static const std::map<std::string, std::vector<std::string>> known = {
      {"experiment", {"datasets", "methods", "mechanism", "rho", "trials", "seed", "out", "chart", "threads"}},
      {"cheshire", {"embed_dim", "conv_dim", "cheby_order", "epochs", "batch_size", "learn_rate", "train_neg_ratio"}},
      {"matcomp", {"rank"}},
      {"ergm", {"degree_decay", "esp_decay", "ridge", "core", "core_threshold"}},
      {"sampling", {"neg_ratio", "mnar_exponent", "threshold"}},
      {"exclude", {}}};
  for (const auto& [section, body] : tree) {
    auto it = known.find(section);
    if (it == known.end()) throw Error("config: unknown section [" + section + "]");
    if (section == "exclude") continue;
    for (const auto& [key, value] : body)
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
        throw Error("config: unknown key '" + key + "' in [" + section + "]");
  }

  try {
    if (auto v = tree.get_optional<std::string>("experiment.datasets")) c.datasets = split_list(*v);
    if (auto v = tree.get_optional<std::string>("experiment.methods"))
      for (const auto& m : split_list(*v)) c.methods.push_back(parse_method(m));
    if (auto v = tree.get_optional<std::string>("experiment.mechanism")) c.mechanism = parse_mechanism(*v);
    if (auto v = tree.get_optional<std::string>("experiment.rho")) {
      c.rhos.clear();
      for (const auto& r : split_list(*v)) c.rhos.push_back(std::stod(r));
    }
    if (auto v = get_size(tree, "experiment.trials")) c.trials = *v;
    if (auto v = get_size(tree, "experiment.seed")) c.base_seed = *v;
    if (auto v = tree.get_optional<std::string>("experiment.out")) c.out_dir = *v;
    if (auto v = tree.get_optional<std::string>("experiment.chart")) c.chart = parse_bool(*v);
    if (auto v = get_size(tree, "experiment.threads")) c.threads = std::max<std::size_t>(1, *v);

    auto& ch = c.options.cheshire;
    if (auto v = get_size(tree, "cheshire.embed_dim")) ch.embed_dim = *v;
    if (auto v = get_size(tree, "cheshire.conv_dim")) ch.conv_dim = *v;
    if (auto v = get_size(tree, "cheshire.cheby_order")) ch.cheby_order = *v;
    if (auto v = get_size(tree, "cheshire.epochs")) ch.epochs = *v;
    if (auto v = get_size(tree, "cheshire.batch_size")) ch.batch_size = *v;
    if (auto v = get_double(tree, "cheshire.learn_rate")) ch.learn_rate = *v;
    if (auto v = get_size(tree, "cheshire.train_neg_ratio")) ch.train_neg_ratio = *v;

    if (auto v = get_size(tree, "matcomp.rank")) c.options.matcomp_rank = *v;

    if (auto v = get_double(tree, "ergm.degree_decay")) c.options.ergm_degree_decay = *v;
    if (auto v = get_double(tree, "ergm.esp_decay")) c.options.ergm_esp_decay = *v;
    if (auto v = get_double(tree, "ergm.ridge")) c.options.mple.ridge = *v;
    if (auto v = get_size(tree, "ergm.core")) c.options.ergm_core = *v;
    if (auto v = get_size(tree, "ergm.core_threshold")) c.options.ergm_core_threshold = *v;

    if (auto v = get_size(tree, "sampling.neg_ratio")) c.options.neg_ratio = *v;
    if (auto v = get_double(tree, "sampling.mnar_exponent")) c.options.mask.mnar_exponent = *v;
    if (auto v = get_double(tree, "sampling.threshold")) c.options.threshold = *v;

    if (auto ex = tree.get_child_optional("exclude"))
      for (const auto& [dataset, methods] : *ex)
        for (const auto& m : split_list(methods.data())) c.exclude[dataset].push_back(parse_method(m));
  } catch (const boost::property_tree::ptree_bad_data& e) {
    throw Error(std::string("config: bad value: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw Error("config: bad numeric value");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config " + path.string());
  return parse_config(in);
}

// --- runner ------------------------------------------------------------------------

ExperimentOutput run_grid(const ExperimentConfig& config, std::ostream* log) {
  config.validate();
  std::vector<Dataset> datasets;
  for (const auto& key : config.datasets) {
    LoadedGraph g = registry_load(key);
    if (log)
      for (const auto& w : g.warnings) *log << "warning: " << g.name << ": " << w << '\n';
    datasets.push_back(make_dataset(g.name, std::move(g.graph), std::move(g.volumes)));
  }

  struct Unit {
    std::size_t dataset, rho, trial;
  };
  std::vector<Unit> units;
  for (std::size_t d = 0; d < datasets.size(); ++d)
    for (std::size_t r = 0; r < config.rhos.size(); ++r)
      for (std::size_t t = 0; t < config.trials; ++t) units.push_back({d, r, t});

  std::vector<std::vector<TrialResult>> slots(units.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t u; (u = next.fetch_add(1)) < units.size();) {
      const Unit& unit = units[u];
      const Dataset& data = datasets[unit.dataset];
      const double rho = config.rhos[unit.rho];
      const std::uint64_t seed = config.base_seed + unit.trial;
      const auto excluded_it = config.exclude.find(data.name);
      std::optional<TrialSetup> setup;
      std::string setup_error;
      try {
        setup = prepare_trial(data, config.mechanism, rho, seed, config.options);
      } catch (const std::exception& e) {
        setup_error = std::string("error: ") + e.what();
      }
      for (Method m : config.methods) {
        TrialResult r;
        const bool excluded = excluded_it != config.exclude.end() &&
                              std::find(excluded_it->second.begin(), excluded_it->second.end(), m) !=
                                  excluded_it->second.end();
        if (setup && !excluded) {
          r = evaluate_method(data, *setup, m, config.options);
        } else {
          r.dataset = data.name;
          r.method = m;
          r.task = task_of(m);
          r.mechanism = config.mechanism;
          r.rho = rho;
          r.seed = seed;
          r.status = excluded ? "excluded" : setup_error;
        }
        slots[u].push_back(std::move(r));
      }
      if (log) {
        std::lock_guard lock(log_mutex);
        *log << data.name << " rho=" << format_rho(rho) << " trial " << unit.trial + 1 << "/" << config.trials
             << " done\n";
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(config.threads, units.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  ExperimentOutput out;
  for (auto& s : slots)
    for (auto& r : s) out.results.push_back(std::move(r));
  out.aggregates = aggregate(out.results);
  return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& config, std::ostream* log) {
  ExperimentOutput out = run_grid(config, log);
  std::filesystem::create_directories(config.out_dir);
  auto open = [](const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + p.string());
    return f;
  };
  {
    auto f = open(config.out_dir / "results.csv");
    write_results_csv(out.results, f);
  }
  {
    auto f = open(config.out_dir / "aggregate.csv");
    write_aggregate_csv(out.aggregates, f);
  }
  if (config.chart) {
    auto f = open(config.out_dir / "chart.svg");
    write_auc_chart(out.aggregates, f);
  }
  return out;
}

// --- chart --------------------------------------------------------------------------

void write_auc_chart(const std::vector<AggregateRow>& rows, std::ostream& out) {
  std::vector<std::string> datasets;
  std::vector<Method> methods;
  for (const auto& r : rows) {
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) datasets.push_back(r.dataset);
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
  }
  static const char* palette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#9c755f"};
  const double bar = 14, gap = 24, left = 50, top = 20, plot_h = 240;
  const double group_w = bar * static_cast<double>(methods.size()) + gap;
  const double width = left + group_w * static_cast<double>(datasets.size()) + 160;
  const double height = top + plot_h + 80;
  char buf[256];

  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" font-family=\"sans-serif\" "
                "font-size=\"10\">\n",
                width, height);
  out << buf;
  for (int tick = 0; tick <= 4; ++tick) {
    const double y = top + plot_h * (1.0 - tick / 4.0);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ddd\"/>"
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.2f</text>\n",
                  left, y, width - 160, y, left - 4, y + 3, tick / 4.0);
    out << buf;
  }
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    const double x0 = left + gap / 2 + group_w * static_cast<double>(d);
    for (std::size_t m = 0; m < methods.size(); ++m) {
      for (const auto& r : rows) {
        if (r.dataset != datasets[d] || r.method != methods[m] || r.n_trials == 0) continue;
        const double h = plot_h * std::clamp(r.auc.mean, 0.0, 1.0);
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"%s\"><title>%s %s %.3f</title></rect>\n",
                      x0 + bar * static_cast<double>(m), top + plot_h - h, bar - 2, h, palette[m % 8],
                      datasets[d].c_str(), std::string(to_string(methods[m])).c_str(), r.auc.mean);
        out << buf;
      }
    }
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%s</text>\n",
                  x0 + bar * static_cast<double>(methods.size()) / 2, top + plot_h + 14, datasets[d].c_str());
    out << buf;
  }
  for (std::size_t m = 0; m < methods.size(); ++m) {
    const double y = top + 14.0 * static_cast<double>(m);
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"10\" height=\"10\" fill=\"%s\"/><text x=\"%.1f\" y=\"%.1f\">%s</text>\n",
                  width - 150, y, palette[m % 8], width - 136, y + 9, std::string(to_string(methods[m])).c_str());
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">mean ROC-AUC</text>\n", left / 2,
                top - 6);
  out << buf << "</svg>\n";
}

}  // namespace hlbench

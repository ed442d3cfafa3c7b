#include "hlbench/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <tuple>

#include "hlbench/rng.hpp"
#include "hlbench/scorers.hpp"

namespace hlbench {

namespace {

void check_inputs(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw Error("metrics: scores and labels differ in length");
  for (int y : labels)
    if (y != 0 && y != 1) throw Error("metrics: labels must be 0 or 1");
  for (double s : scores)
    if (std::isnan(s)) throw Error("metrics: NaN score");
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  const std::size_t n = scores.size();
  const auto n_pos = static_cast<std::int64_t>(std::count(labels.begin(), labels.end(), 1));
  const auto n_neg = static_cast<std::int64_t>(n) - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error("roc_auc: need at least one positive and one negative");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Twice the rank sum of positives, kept integral so ties are exact.
  std::int64_t rank_sum_x2 = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const auto tied_rank_x2 = static_cast<std::int64_t>(i + 1 + j);  // ranks i+1..j averaged, doubled
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]] == 1) rank_sum_x2 += tied_rank_x2;
    i = j;
  }
  const std::int64_t u_x2 = rank_sum_x2 - n_pos * (n_pos + 1);
  return static_cast<double>(u_x2) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

F1Mcc f1_mcc(std::span<const double> scores, std::span<const int> labels, double threshold) {
  check_inputs(scores, labels);
  if (scores.empty()) throw Error("f1_mcc: empty input");
  double tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] >= threshold;
    if (labels[i] == 1) (pred ? tp : fn) += 1;
    else (pred ? fp : tn) += 1;
  }
  F1Mcc r;
  const double predicted = tp + fp;
  const double actual = tp + fn;
  if (predicted > 0 && actual > 0) r.f1 = 2.0 * tp / (predicted + actual);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom > 0) r.mcc = (tp * tn - fp * fn) / std::sqrt(denom);
  return r;
}

std::vector<double> minmax_normalize(std::span<const double> scores) {
  std::vector<double> out(scores.size(), 0.0);
  if (scores.empty()) return out;
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = (scores[i] - *lo) / range;
  return out;
}

// --- methods -----------------------------------------------------------------

std::string_view to_string(Task t) { return t == Task::lp ? "LP" : "HP"; }

std::string_view to_string(Method m) {
  switch (m) {
    case Method::lp_cn: return "LP-CN";
    case Method::lp_aa: return "LP-AA";
    case Method::hp_cn: return "HP-CN";
    case Method::hp_aa: return "HP-AA";
    case Method::hp_null: return "HP-Null";
    case Method::hp_matcomp: return "HP-MatComp";
    case Method::hp_cheshire: return "HP-CHESHIRE";
    case Method::ergm: return "ERGM";
  }
  return "?";
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = {Method::lp_cn,  Method::lp_aa,      Method::hp_cn,
                                              Method::hp_aa,  Method::hp_null,    Method::hp_matcomp,
                                              Method::hp_cheshire, Method::ergm};
  return methods;
}

Method parse_method(std::string_view s) {
  auto lower = [](std::string_view v) {
    std::string t(v);
    for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return t;
  };
  for (Method m : all_methods())
    if (lower(to_string(m)) == lower(s)) return m;
  std::string known;
  for (Method m : all_methods()) known += (known.empty() ? "" : ", ") + std::string(to_string(m));
  throw Error("unknown method '" + std::string(s) + "' (known: " + known + ")");
}

Task task_of(Method m) { return (m == Method::lp_cn || m == Method::lp_aa) ? Task::lp : Task::hp; }

Dataset make_dataset(std::string name, Graph g, std::optional<std::vector<double>> volumes) {
  Dataset d;
  d.name = std::move(name);
  d.hypergraph = derive_hypergraph(g);
  d.graph = std::move(g);
  d.volumes = std::move(volumes);
  return d;
}

Dataset make_dataset(std::string name, Hypergraph h) {
  Dataset d;
  d.name = std::move(name);
  d.graph = h.clique_expansion();
  d.hypergraph = std::move(h);
  return d;
}

TrialSetup prepare_trial(const Dataset& data, Mechanism mechanism, double rho, std::uint64_t seed,
                         const MethodOptions& options) {
  TrialSetup t;
  t.split = mask(data.hypergraph, rho, mechanism, derive_seed(seed, 1), options.mask);
  t.split.seed = seed;
  t.g_obs = observed_graph(data.hypergraph, t.split);
  t.h_obs = observed_hypergraph(data.hypergraph, t.split);
  try {
    t.hp = hp_candidates(data.hypergraph, t.split, options.neg_ratio, derive_seed(seed, 2));
  } catch (const Error& e) {
    t.hp_error = e.what();
  }
  try {
    t.lp = lp_candidates(data.graph, data.hypergraph, t.split, options.neg_ratio, derive_seed(seed, 3));
  } catch (const Error& e) {
    t.lp_error = e.what();
  }
  return t;
}

namespace {

std::vector<double> lifted_scores(const DyadScorer& scorer, const CandidateSet& c) {
  std::vector<double> s;
  s.reserve(c.items.size());
  for (const auto& item : c.items) s.push_back(lift(scorer, item.nodes));
  return s;
}

ErgmFit fit_ergm_for_trial(const Dataset& data, const Graph& g_obs, const MethodOptions& options) {
  const ErgmSpec spec = ErgmSpec::standard(options.ergm_degree_decay, options.ergm_esp_decay);
  if (options.ergm_core > 0 && g_obs.num_nodes() > options.ergm_core_threshold) {
    const std::vector<double> volumes = data.volumes ? *data.volumes : degree_volumes(g_obs);
    return fit_mple(core_k(g_obs, volumes, options.ergm_core), spec, options.mple);
  }
  return fit_mple(g_obs, spec, options.mple);
}

}  // namespace

std::vector<double> method_scores(const Dataset& data, const TrialSetup& setup, Method method,
                                  const MethodOptions& options) {
  const Task task = task_of(method);
  const auto& cands = task == Task::lp ? setup.lp : setup.hp;
  if (!cands) throw Error(task == Task::lp ? setup.lp_error : setup.hp_error);
  switch (method) {
    case Method::lp_cn:
    case Method::hp_cn:
      return lifted_scores(CommonNeighborsScorer(setup.g_obs), *cands);
    case Method::lp_aa:
    case Method::hp_aa:
      return lifted_scores(AdamicAdarScorer(setup.g_obs), *cands);
    case Method::hp_null:
      return lifted_scores(NullScorer(), *cands);
    case Method::hp_matcomp: {
      const std::size_t rank = options.matcomp_rank ? options.matcomp_rank : default_matcomp_rank(setup.g_obs.num_nodes());
      return lifted_scores(MatrixCompletionScorer(setup.g_obs, rank), *cands);
    }
    case Method::ergm:
      return lifted_scores(ErgmScorer(fit_ergm_for_trial(data, setup.g_obs, options), setup.g_obs), *cands);
    case Method::hp_cheshire: {
      CheshireParams params = options.cheshire;
      params.seed = derive_seed(setup.split.seed, 4 + options.cheshire.seed);
      const CheshireModel model = train(setup.h_obs, params);
      std::vector<double> s;
      s.reserve(cands->items.size());
      for (const auto& item : cands->items) s.push_back(model.score(item.nodes));
      return s;
    }
  }
  throw Error("unhandled method");
}

TrialResult evaluate_method(const Dataset& data, const TrialSetup& setup, Method method, const MethodOptions& options) {
  TrialResult r;
  r.dataset = data.name;
  r.method = method;
  r.task = task_of(method);
  r.mechanism = setup.split.mechanism;
  r.rho = setup.split.rho;
  r.seed = setup.split.seed;
  try {
    const auto scores = method_scores(data, setup, method, options);
    const auto labels = (r.task == Task::lp ? setup.lp : setup.hp)->labels();
    r.auc = roc_auc(scores, labels);
    const bool unbounded = method == Method::lp_cn || method == Method::lp_aa || method == Method::hp_cn ||
                           method == Method::hp_aa || method == Method::hp_matcomp;
    const auto thresholded = unbounded ? minmax_normalize(scores) : scores;
    const F1Mcc fm = f1_mcc(thresholded, labels, options.threshold);
    r.f1 = fm.f1;
    r.mcc = fm.mcc;
  } catch (const std::exception& e) {
    r.status = std::string("error: ") + e.what();
  }
  return r;
}

TrialResult run_trial(const Dataset& data, Method method, Mechanism mechanism, double rho, std::uint64_t seed,
                      const MethodOptions& options) {
  try {
    return evaluate_method(data, prepare_trial(data, mechanism, rho, seed, options), method, options);
  } catch (const std::exception& e) {
    TrialResult r;
    r.dataset = data.name;
    r.method = method;
    r.task = task_of(method);
    r.mechanism = mechanism;
    r.rho = rho;
    r.seed = seed;
    r.status = std::string("error: ") + e.what();
    return r;
  }
}

// --- aggregation -------------------------------------------------------------

std::vector<AggregateRow> aggregate(const std::vector<TrialResult>& trials) {
  using Key = std::tuple<std::string, Method, Task, Mechanism, double>;
  std::map<Key, std::size_t> slot;
  std::vector<AggregateRow> rows;
  std::vector<std::vector<const TrialResult*>> members;
  for (const auto& t : trials) {
    const Key key{t.dataset, t.method, t.task, t.mechanism, t.rho};
    auto [it, inserted] = slot.emplace(key, rows.size());
    if (inserted) {
      AggregateRow row;
      row.dataset = t.dataset;
      row.method = t.method;
      row.task = t.task;
      row.mechanism = t.mechanism;
      row.rho = t.rho;
      rows.push_back(row);
      members.emplace_back();
    }
    AggregateRow& row = rows[it->second];
    if (t.ok()) {
      ++row.n_trials;
      members[it->second].push_back(&t);
    } else {
      ++row.n_failed;
    }
  }
  auto summarize = [](const std::vector<const TrialResult*>& ms, double TrialResult::*field) {
    MetricSummary s;
    if (ms.empty()) return MetricSummary{std::nan(""), std::nan("")};
    for (const auto* m : ms) s.mean += m->*field;
    s.mean /= static_cast<double>(ms.size());
    if (ms.size() > 1) {
      double ss = 0.0;
      for (const auto* m : ms) ss += (m->*field - s.mean) * (m->*field - s.mean);
      s.sd = std::sqrt(ss / static_cast<double>(ms.size() - 1));
    }
    return s;
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].auc = summarize(members[i], &TrialResult::auc);
    rows[i].f1 = summarize(members[i], &TrialResult::f1);
    rows[i].mcc = summarize(members[i], &TrialResult::mcc);
  }
  return rows;
}

std::string format_rho(double rho) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", rho);
  return buf;
}

namespace {

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

void write_results_csv(const std::vector<TrialResult>& rows, std::ostream& out) {
  out << "dataset,method,task,mechanism,rho,seed,auc,f1,mcc,status\n";
  for (const auto& r : rows) {
    out << csv_field(r.dataset) << ',' << to_string(r.method) << ',' << to_string(r.task) << ','
        << to_string(r.mechanism) << ',' << format_rho(r.rho) << ',' << r.seed << ',';
    if (r.ok())
      out << fixed(r.auc, 6) << ',' << fixed(r.f1, 6) << ',' << fixed(r.mcc, 6) << ",ok\n";
    else
      out << ",,," << csv_field(r.status) << '\n';
  }
}

void write_aggregate_csv(const std::vector<AggregateRow>& rows, std::ostream& out) {
  out << "dataset,method,task,mechanism,rho,n_trials,n_failed,auc_mean,auc_sd,f1_mean,f1_sd,mcc_mean,mcc_sd\n";
  for (const auto& r : rows)
    out << csv_field(r.dataset) << ',' << to_string(r.method) << ',' << to_string(r.task) << ','
        << to_string(r.mechanism) << ',' << format_rho(r.rho) << ',' << r.n_trials << ',' << r.n_failed << ','
        << fixed(r.auc.mean, 6)
        << ',' << fixed(r.auc.sd, 6) << ',' << fixed(r.f1.mean, 6) << ',' << fixed(r.f1.sd, 6) << ','
        << fixed(r.mcc.mean, 6) << ',' << fixed(r.mcc.sd, 6) << '\n';
}

void write_auc_table(const std::vector<AggregateRow>& rows, std::ostream& out) {
  std::vector<std::string> datasets;
  std::vector<Method> methods;
  for (const auto& r : rows) {
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) datasets.push_back(r.dataset);
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
  }
  std::size_t width = 7;
  for (const auto& d : datasets) width = std::max(width, d.size());
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-*s", static_cast<int>(width), "dataset");
  out << buf;
  for (Method m : methods) {
    std::snprintf(buf, sizeof buf, " %12s", std::string(to_string(m)).c_str());
    out << buf;
  }
  out << '\n';
  for (const auto& d : datasets) {
    std::snprintf(buf, sizeof buf, "%-*s", static_cast<int>(width), d.c_str());
    out << buf;
    for (Method m : methods) {
      std::string cell = "---";
      for (const auto& r : rows)
        if (r.dataset == d && r.method == m && r.n_trials > 0) cell = fixed(r.auc.mean, 3);
      std::snprintf(buf, sizeof buf, " %12s", cell.c_str());
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace hlbench

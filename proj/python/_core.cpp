#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "hlbench/cheshire.hpp"
#include "hlbench/ergm.hpp"
#include "hlbench/evaluation.hpp"
#include "hlbench/graph.hpp"
#include "hlbench/hypergraph.hpp"
#include "hlbench/masking.hpp"
#include "hlbench/pipeline.hpp"
#include "hlbench/scorers.hpp"

namespace py = pybind11;
using namespace hlbench;

namespace {

std::unique_ptr<DyadScorer> make_scorer(const std::string& name, const Graph& g, std::size_t rank) {
  if (name == "cn") return std::make_unique<CommonNeighborsScorer>(g);
  if (name == "aa") return std::make_unique<AdamicAdarScorer>(g);
  if (name == "null") return std::make_unique<NullScorer>();
  if (name == "matcomp")
    return std::make_unique<MatrixCompletionScorer>(g, rank ? rank : default_matcomp_rank(g.num_nodes()));
  throw Error("unknown scorer '" + name + "' (cn, aa, null, matcomp)");
}

py::dict result_dict(const TrialResult& r) {
  py::dict d;
  d["dataset"] = r.dataset;
  d["method"] = std::string(to_string(r.method));
  d["task"] = std::string(to_string(r.task));
  d["mechanism"] = std::string(to_string(r.mechanism));
  d["rho"] = r.rho;
  d["seed"] = r.seed;
  d["status"] = r.status;
  if (r.ok()) {
    d["auc"] = r.auc;
    d["f1"] = r.f1;
    d["mcc"] = r.mcc;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hyperlink prediction benchmark core";

  py::register_exception<Error>(m, "HlbenchError", PyExc_ValueError);

  py::class_<Graph>(m, "Graph")
      .def(py::init<std::size_t>(), py::arg("n"))
      .def(py::init<std::vector<std::string>>(), py::arg("labels"))
      .def("add_edge", &Graph::add_edge)
      .def("has_edge", &Graph::has_edge)
      .def("degree", &Graph::degree)
      .def("neighbors", [](const Graph& g, NodeId u) {
        auto n = g.neighbors(u);
        return std::vector<NodeId>(n.begin(), n.end());
      })
      .def_property_readonly("num_nodes", &Graph::num_nodes)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def_property_readonly("labels", &Graph::labels)
      .def("edges", &Graph::edges)
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
      .def("__repr__", [](const Graph& g) {
        return "<Graph nodes=" + std::to_string(g.num_nodes()) + " edges=" + std::to_string(g.num_edges()) + ">";
      });

  py::class_<Hypergraph>(m, "Hypergraph")
      .def(py::init<std::vector<std::string>>(), py::arg("labels"))
      .def("add", &Hypergraph::add)
      .def("contains", [](const Hypergraph& h, NodeSet s) { return h.contains(canonical(std::move(s))); })
      .def_property_readonly("num_nodes", &Hypergraph::num_nodes)
      .def_property_readonly("num_edges", &Hypergraph::num_edges)
      .def_property_readonly("labels", &Hypergraph::labels)
      .def("edges", &Hypergraph::edges)
      .def("clique_expansion", &Hypergraph::clique_expansion);

  m.def(
      "parse_edgelist",
      [](const std::string& text, bool csv) {
        return parse_edgelist(text, csv ? EdgelistFormat::csv : EdgelistFormat::plain).graph;
      },
      py::arg("text"), py::arg("csv") = false);

  m.def("graph_stats", [](const Graph& g) {
    const SummaryStats s = graph_stats(g);
    py::dict d;
    d["nodes"] = s.nodes;
    d["edges"] = s.edges;
    d["density"] = format_density(s.density);
    d["triangles"] = s.triangles;
    return d;
  });

  m.def("maximal_cliques", &maximal_cliques, py::arg("graph"), py::arg("cap") = kDefaultCliqueCap);
  m.def("derive_hypergraph", &derive_hypergraph, py::arg("graph"), py::arg("cap") = kDefaultCliqueCap);

  m.def(
      "mask",
      [](const Hypergraph& h, double rho, const std::string& mechanism, std::uint64_t seed) {
        const MaskSplit s = mask(h, rho, parse_mechanism(mechanism), seed);
        return py::make_tuple(s.observed, s.missing);
      },
      py::arg("hypergraph"), py::arg("rho"), py::arg("mechanism") = "MCAR", py::arg("seed") = 0,
      "Returns (observed ids, missing ids).");

  m.def(
      "roc_auc", [](const std::vector<double>& s, const std::vector<int>& y) { return roc_auc(s, y); },
      py::arg("scores"), py::arg("labels"));
  m.def(
      "f1_mcc",
      [](const std::vector<double>& s, const std::vector<int>& y, double threshold) {
        const F1Mcc r = f1_mcc(s, y, threshold);
        return py::make_tuple(r.f1, r.mcc);
      },
      py::arg("scores"), py::arg("labels"), py::arg("threshold") = 0.5);

  m.def(
      "score_pair",
      [](const Graph& g, NodeId i, NodeId j, const std::string& scorer, std::size_t rank) {
        return make_scorer(scorer, g, rank)->score(i, j);
      },
      py::arg("graph"), py::arg("i"), py::arg("j"), py::arg("scorer") = "aa", py::arg("rank") = 0);
  m.def(
      "lift",
      [](const Graph& g, const NodeSet& s, const std::string& scorer, std::size_t rank) {
        return lift(*make_scorer(scorer, g, rank), s);
      },
      py::arg("graph"), py::arg("nodes"), py::arg("scorer") = "aa", py::arg("rank") = 0,
      "Mean pair score over all pairs of `nodes`.");

  m.def(
      "fit_mple",
      [](const Graph& g, double degree_decay, double esp_decay, bool edges_only) {
        const ErgmFit fit =
            fit_mple(g, edges_only ? ErgmSpec::edges_only() : ErgmSpec::standard(degree_decay, esp_decay));
        py::dict theta;
        for (std::size_t t = 0; t < fit.terms.size(); ++t)
          theta[py::str(std::string(term_name(fit.terms[t].kind)))] = fit.theta(static_cast<Eigen::Index>(t));
        py::dict d;
        d["theta"] = theta;
        d["converged"] = fit.converged;
        d["iterations"] = fit.iterations;
        d["gradient_norm"] = fit.gradient_norm;
        return d;
      },
      py::arg("graph"), py::arg("degree_decay") = 0.5, py::arg("esp_decay") = 0.5, py::arg("edges_only") = false);

  m.def(
      "run_trial",
      [](const Graph& g, const std::string& method, double rho, const std::string& mechanism, std::uint64_t seed,
         std::size_t cheshire_epochs, const std::string& name) {
        MethodOptions opt;
        if (cheshire_epochs) opt.cheshire.epochs = cheshire_epochs;
        return result_dict(run_trial(make_dataset(name, g), parse_method(method), parse_mechanism(mechanism), rho,
                                     seed, opt));
      },
      py::arg("graph"), py::arg("method"), py::arg("rho") = 0.2, py::arg("mechanism") = "MCAR", py::arg("seed") = 0,
      py::arg("cheshire_epochs") = 0, py::arg("name") = "graph");

  m.def(
      "registry_load", [](const std::string& key) { return registry_load(key).graph; }, py::arg("key_or_path"),
      "Loads a registered covert network or an edgelist/message-log path.");
  m.def("registry_keys", [] {
    std::vector<std::string> keys;
    for (const auto& e : registry()) keys.push_back(e.key);
    return keys;
  });

  m.def(
      "run_experiment",
      [](const std::string& config_text) {
        std::istringstream in(config_text);
        const ExperimentOutput out = run_experiment(parse_config(in));
        py::list rows;
        for (const auto& r : out.results) rows.append(result_dict(r));
        return rows;
      },
      py::arg("config_text"), "Runs an INI experiment manifest, writes its CSVs and returns the raw rows.");
}

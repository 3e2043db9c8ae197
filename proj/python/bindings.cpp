#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "idtkit/batch.hpp"
#include "idtkit/corpus.hpp"
#include "idtkit/eval.hpp"
#include "idtkit/idt.hpp"
#include "idtkit/io.hpp"
#include "idtkit/metrics.hpp"
#include "idtkit/synth.hpp"

namespace py = pybind11;
using namespace idtkit;

namespace {

using EdgeTuple = std::pair<std::string, std::string>;
using PaperTuple = std::tuple<std::string, int, std::string>;

TiePolicy make_ties(const std::string& tie, std::uint64_t seed) { return {parse_tie_kind(tie), seed}; }

int cutoff_or_all(std::optional<int> cutoff) { return cutoff.value_or(CorpusView::kNoCutoff); }

py::dict report_dict(const MetricsReport& r) {
  py::dict d;
  d["paper_id"] = r.paper_id;
  d["n"] = r.n;
  d["d"] = r.depth;
  d["b"] = r.breadth;
  d["idi"] = r.idi;
  d["idi_min"] = r.idi_min;
  d["idi_max"] = r.idi_max;
  d["ideal_idi"] = r.ideal_idi;
  d["id"] = r.influence_divergence;
  d["nid"] = r.nid;
  return d;
}

py::dict ingest_dict(const IngestReport& r) {
  py::dict d;
  d["papers_in"] = r.papers_in;
  d["papers_kept"] = r.papers_kept;
  d["edges_in"] = r.edges_in;
  d["edges_kept"] = r.edges_kept;
  d["dropped_self"] = r.dropped_self;
  d["dropped_dup"] = r.dropped_dup;
  d["dropped_forward"] = r.dropped_forward;
  d["dropped_cycle"] = r.dropped_cycle;
  d["dropped_isolated"] = r.dropped_isolated;
  d["dropped_unknown"] = r.dropped_unknown;
  d["dropped_with_papers"] = r.dropped_with_papers;
  d["malformed_edges"] = r.malformed_edges;
  d["malformed_papers"] = r.malformed_papers;
  return d;
}

std::pair<std::vector<EdgeTuple>, std::vector<PaperTuple>> raw_tuples(const RawCorpus& raw) {
  std::vector<EdgeTuple> edges;
  for (const auto& e : raw.edges) edges.emplace_back(e.citing, e.cited);
  std::vector<PaperTuple> papers;
  for (const auto& p : raw.papers) papers.emplace_back(p.id, p.year, p.venue);
  return {edges, papers};
}

std::pair<CitationCorpus, py::dict> ingest_tuples(const std::vector<EdgeTuple>& edge_tuples,
                                                  const std::vector<PaperTuple>& paper_tuples,
                                                  const std::string& isolation) {
  std::vector<CitationEdge> edges;
  edges.reserve(edge_tuples.size());
  for (const auto& [a, b] : edge_tuples) edges.push_back({a, b});
  std::vector<PaperRecord> papers;
  papers.reserve(paper_tuples.size());
  for (const auto& [id, year, venue] : paper_tuples) papers.push_back({id, year, venue});
  IngestOptions options;
  if (isolation == "or") options.isolation = IsolationRule::kNoCitationsOrNoReferences;
  IngestReport report;
  auto corpus = ingest(edges, papers, options, &report);
  return {std::move(corpus), ingest_dict(report)};
}

std::vector<std::int32_t> parents_of(const InfluenceDispersionTree& t) { return t.parent; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Influence dispersion trees and citation influence metrics";

  py::register_exception<UnknownPaperError>(m, "UnknownPaperError", PyExc_KeyError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);

  py::class_<CitationCorpus>(m, "Corpus")
      .def_property_readonly("paper_count", &CitationCorpus::paper_count)
      .def_property_readonly("edge_count", &CitationCorpus::edge_count)
      .def_property_readonly("min_year", &CitationCorpus::min_year)
      .def_property_readonly("max_year", &CitationCorpus::max_year)
      .def("ids", [](const CitationCorpus& c) {
        std::vector<std::string> ids;
        for (const auto& p : c.papers()) ids.push_back(p.id);
        return ids;
      })
      .def("year", [](const CitationCorpus& c, const std::string& id) { return c.year(c.index_of(id)); })
      .def("venue", [](const CitationCorpus& c, const std::string& id) { return c.paper(c.index_of(id)).venue; })
      .def(
          "citations_of",
          [](const CitationCorpus& c, const std::string& id, std::optional<int> cutoff) {
            std::vector<std::string> out;
            for (auto q : CorpusView(c, cutoff_or_all(cutoff)).citations_of(id)) out.push_back(c.id(q));
            return out;
          },
          py::arg("paper_id"), py::arg("cutoff") = py::none())
      .def("references_of",
           [](const CitationCorpus& c, const std::string& id) {
             std::vector<std::string> out;
             for (auto q : c.references(c.index_of(id))) out.push_back(c.id(q));
             return out;
           })
      .def("edges",
           [](const CitationCorpus& c) {
             std::vector<EdgeTuple> out;
             for (const auto& [u, v] : c.edges()) out.emplace_back(c.id(u), c.id(v));
             return out;
           })
      .def("is_acyclic", [](const CitationCorpus& c) { return is_acyclic(c); })
      .def("save", [](const CitationCorpus& c, const std::string& path) { CorpusCodec::save(path, c, 0); })
      .def_static("load", [](const std::string& path) { return CorpusCodec::load(path); });

  m.def("ingest", &ingest_tuples, py::arg("edges"), py::arg("papers"), py::arg("isolation") = "and",
        "Clean (citing, cited) edges and (id, year, venue) papers; returns (corpus, report).");
  m.def(
      "ingest_files",
      [](const std::string& edges_path, const std::string& meta_path, const std::string& isolation) {
        IngestReport report;
        const auto edges = read_edge_file(edges_path, &report);
        const auto papers = read_metadata_file(meta_path, &report);
        IngestOptions options;
        if (isolation == "or") options.isolation = IsolationRule::kNoCitationsOrNoReferences;
        auto corpus = ingest(edges, papers, options, &report);
        return std::make_pair(std::move(corpus), ingest_dict(report));
      },
      py::arg("edges_path"), py::arg("meta_path"), py::arg("isolation") = "and");

  m.def(
      "metrics",
      [](const CitationCorpus& c, const std::string& id, std::optional<int> cutoff, const std::string& tie,
         std::uint64_t seed) -> std::optional<py::dict> {
        const CorpusView view(c, cutoff_or_all(cutoff));
        const auto p = c.index_of(id);
        if (!view.contains(p)) throw UnknownPaperError(id);
        const auto r = paper_metrics(view, p, make_ties(tie, seed));
        if (!r) return std::nullopt;
        return report_dict(*r);
      },
      py::arg("corpus"), py::arg("paper_id"), py::arg("cutoff") = py::none(), py::arg("tie") = "min-id",
      py::arg("seed") = 0);

  m.def(
      "all_metrics",
      [](const CitationCorpus& c, std::optional<int> cutoff, const std::string& tie, std::uint64_t seed,
         unsigned jobs) {
        const CorpusView view(c, cutoff_or_all(cutoff));
        const auto papers = view.papers();
        std::vector<std::optional<MetricsReport>> reports;
        {
          py::gil_scoped_release release;
          reports = batch_metrics(view, papers, make_ties(tie, seed), jobs);
        }
        py::list out;
        for (const auto& r : reports)
          if (r) out.append(report_dict(*r));
        return out;
      },
      py::arg("corpus"), py::arg("cutoff") = py::none(), py::arg("tie") = "min-id", py::arg("seed") = 0,
      py::arg("jobs") = 1);

  m.def(
      "idt",
      [](const CitationCorpus& c, const std::string& id, std::optional<int> cutoff, const std::string& tie,
         std::uint64_t seed) {
        const CorpusView view(c, cutoff_or_all(cutoff));
        const auto p = c.index_of(id);
        if (!view.contains(p)) throw UnknownPaperError(id);
        const auto tree = build_idt(build_idg(view, p), make_ties(tie, seed));
        py::dict parents;
        py::dict depths;
        for (std::size_t v = 1; v < tree.size(); ++v) {
          parents[py::str(c.id(tree.keys[v]))] = c.id(tree.keys[static_cast<std::size_t>(tree.parent[v])]);
          depths[py::str(c.id(tree.keys[v]))] = tree.depth[v];
        }
        py::dict d;
        d["root"] = id;
        d["parent"] = parents;
        d["depth"] = depths;
        d["json"] = idt_to_json(tree, &c);
        return d;
      },
      py::arg("corpus"), py::arg("paper_id"), py::arg("cutoff") = py::none(), py::arg("tie") = "min-id",
      py::arg("seed") = 0);

  m.def(
      "tree_stats",
      [](std::vector<std::int32_t> parents) {
        const auto tree = InfluenceDispersionTree::from_parents(std::move(parents));
        const auto s = tree_stats(tree);
        py::dict d;
        d["n"] = s.n;
        d["d"] = s.depth;
        d["b"] = s.breadth;
        d["level_sizes"] = s.level_sizes;
        d["leaves"] = s.leaves;
        d["unified_branches"] = s.unified_branch_count();
        d["idi"] = idi(tree);
        if (s.n > 0) d["nid"] = nid(tree);
        return d;
      },
      py::arg("parents"), "Statistics of a tree given as a parent vector (parents[0] == -1).");

  m.def("idi_max", &idi_max, py::arg("n"));
  m.def("idi_min", &idi_min, py::arg("n"));
  m.def("ideal_idi", &ideal_idi, py::arg("n"));
  m.def(
      "optimal_shape",
      [](std::int64_t n) {
        const auto s = optimal_shape(n);
        return std::make_pair(s.depth, s.breadth);
      },
      py::arg("n"));

  m.def(
      "kendall_tau_distance",
      [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        auto ranked = [](const std::vector<std::string>& ids) {
          std::vector<RankedEntry> entries;
          for (std::size_t i = 0; i < ids.size(); ++i) entries.push_back({ids[i], static_cast<double>(i)});
          return RankedList(std::move(entries), RankDirection::kAscending);
        };
        return kendall_tau_distance(ranked(a), ranked(b));
      },
      py::arg("a"), py::arg("b"), "Kendall tau distance between two orderings of the same ids.");

  m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); });
  m.def("mean_reciprocal_rank", [](const std::vector<std::size_t>& ranks) { return mean_reciprocal_rank(ranks); });

  m.def(
      "z_experiment",
      [](const CitationCorpus& c, std::pair<int, int> years, int t1, int t2, const std::string& tie,
         std::uint64_t seed, unsigned jobs) {
        ZExperimentOptions o;
        o.first_year = years.first;
        o.last_year = years.second;
        o.t1 = t1;
        o.t2 = t2;
        o.ties = make_ties(tie, seed);
        o.jobs = jobs;
        ZExperimentResult r;
        {
          py::gil_scoped_release release;
          r = z_experiment(c, o);
        }
        py::list venues;
        for (const auto& v : r.venues) {
          py::dict d;
          d["venue"] = v.venue;
          d["year"] = v.year;
          d["n_papers"] = v.members.size();
          d["z_nid"] = v.z_nid;
          d["z_cite"] = v.z_cite;
          d["z_diff"] = v.z_diff();
          venues.append(d);
        }
        py::dict d;
        d["venues"] = venues;
        d["mean_z_nid"] = r.mean_z_nid;
        d["mean_z_cite"] = r.mean_z_cite;
        d["skipped"] = r.skipped.size();
        return d;
      },
      py::arg("corpus"), py::arg("years") = std::make_pair(1995, 2000), py::arg("t1") = 5, py::arg("t2") = 10,
      py::arg("tie") = "min-id", py::arg("seed") = 0, py::arg("jobs") = 1);

  m.def(
      "tot_experiment",
      [](const CitationCorpus& c, const std::vector<std::tuple<std::string, std::string, int>>& awardees,
         double pct, const std::string& tie, std::uint64_t seed) {
        std::vector<Awardee> list;
        for (const auto& [id, venue, year] : awardees) list.push_back({id, venue, year});
        ToTOptions o;
        o.pct = pct;
        o.ties = make_ties(tie, seed);
        const auto r = tot_experiment(c, list, o);
        py::list cases;
        for (const auto& t : r.cases) {
          py::dict d;
          d["paper_id"] = t.paper_id;
          d["venue"] = t.venue;
          d["year"] = t.year;
          d["cohort_size"] = t.competitors.size();
          d["rank_cite"] = t.rank_cite;
          d["rank_nid"] = t.rank_nid;
          cases.append(d);
        }
        py::dict d;
        d["cases"] = cases;
        d["mrr_cite"] = r.mrr_cite;
        d["mrr_nid"] = r.mrr_nid;
        d["skipped"] = r.skipped.size();
        return d;
      },
      py::arg("corpus"), py::arg("awardees"), py::arg("pct") = 0.05, py::arg("tie") = "min-id",
      py::arg("seed") = 0);

  m.def(
      "corpus_stats",
      [](const CitationCorpus& c, std::optional<int> cutoff, const std::string& tie, std::uint64_t seed) {
        const auto s = corpus_stats(CorpusView(c, cutoff_or_all(cutoff)), make_ties(tie, seed));
        py::dict d;
        d["depth_histogram"] = s.depth_histogram;
        d["breadth_histogram"] = s.breadth_histogram;
        d["rho_breadth_citations"] = s.rho_breadth_citations;
        d["rho_depth_citations"] = s.rho_depth_citations;
        d["rho_depth_breadth"] = s.rho_depth_breadth;
        d["rho_idi_citations"] = s.rho_idi_citations;
        d["rho_nid_citations"] = s.rho_nid_citations;
        std::vector<std::int64_t> n, depth, breadth;
        for (const auto& row : s.rows) {
          n.push_back(row.n);
          depth.push_back(row.depth);
          breadth.push_back(row.breadth);
        }
        d["n"] = n;
        d["depth"] = depth;
        d["breadth"] = breadth;
        return d;
      },
      py::arg("corpus"), py::arg("cutoff") = py::none(), py::arg("tie") = "min-id", py::arg("seed") = 0);

  m.def(
      "enumerate_trees",
      [](int n) {
        std::vector<std::vector<std::int32_t>> out;
        for (const auto& t : enumerate_trees(n)) out.push_back(parents_of(t));
        return out;
      },
      py::arg("n"), "Parent vectors of every rooted tree with n non-root nodes (n <= 9).");

  m.def(
      "shape",
      [](const std::string& kind, std::int64_t n, std::int64_t k, std::int64_t r, std::uint64_t seed) {
        ShapeSpec spec{parse_shape_kind(kind), n, k, r, seed};
        const auto s = gen_shape(spec);
        RawCorpus raw{s.papers, s.edges, {}};
        auto [edges, papers] = raw_tuples(raw);
        return py::make_tuple(parents_of(s.tree), edges, papers);
      },
      py::arg("kind"), py::arg("n"), py::arg("k") = 0, py::arg("r") = 0, py::arg("seed") = 0,
      "Returns (parents, edges, papers) for a tree shape rooted at paper 'P'.");

  m.def(
      "synth_random",
      [](std::size_t n_papers, std::pair<int, int> years, double refs, double bias, double closure,
         std::size_t venues, std::uint64_t seed) {
        RandomCorpusParams p;
        p.n_papers = n_papers;
        p.first_year = years.first;
        p.last_year = years.second;
        p.mean_references = refs;
        p.attachment_bias = bias;
        p.closure = closure;
        p.venues_per_year = venues;
        p.seed = seed;
        return raw_tuples(gen_random_records(p));
      },
      py::arg("n_papers") = 1000, py::arg("years") = std::make_pair(1990, 2010), py::arg("refs") = 5.0,
      py::arg("bias") = 1.0, py::arg("closure") = 0.5, py::arg("venues") = 10, py::arg("seed") = 1);

  m.def(
      "synth_planted_tot",
      [](std::uint64_t seed) {
        PlantedToTParams p;
        p.seed = seed;
        const auto raw = gen_planted_tot(p);
        auto [edges, papers] = raw_tuples(raw);
        std::vector<std::tuple<std::string, std::string, int>> awardees;
        for (const auto& a : raw.awardees) awardees.emplace_back(a.paper_id, a.venue, a.year);
        return py::make_tuple(edges, papers, awardees);
      },
      py::arg("seed") = 1);
}

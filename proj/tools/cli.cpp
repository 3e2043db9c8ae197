#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "idtkit/batch.hpp"
#include "idtkit/corpus.hpp"
#include "idtkit/eval.hpp"
#include "idtkit/idt.hpp"
#include "idtkit/io.hpp"
#include "idtkit/synth.hpp"
#include "json.hpp"

namespace idtkit::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::string edges;
  std::string meta;
  std::string corpus;
  std::string awardees;
  std::string out = ".";
  std::string ids;
  std::string ids_file;
  std::string id;
  int t1 = 5;
  int t2 = 10;
  std::string years = "1995:2000";
  double pct = 0.05;
  int horizon = 10;
  std::string tie = "min-id";
  std::string tie_handling = "resolve";
  std::string gain = "fractional";
  std::string isolation = "and";
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  int cutoff = CorpusView::kNoCutoff;
  bool export_text = false;
  bool json = false;

  // synth
  std::string kind = "random";
  std::size_t papers = 1000;
  double bias = 1.0;
  double closure = 0.5;
  double refs = 5.0;
  std::size_t venues = 10;
  std::int64_t n = 10;
  std::int64_t k = 1;
  std::int64_t r = 1;
};

std::pair<int, int> parse_years(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const int y = std::stoi(text);
      return {y, y};
    }
    const int a = std::stoi(text.substr(0, colon));
    const int b = std::stoi(text.substr(colon + 1));
    if (b < a) throw UsageError("year range " + text + " is empty");
    return {a, b};
  } catch (const std::logic_error&) {
    throw UsageError("bad year range: " + text);
  }
}

TiePolicy tie_policy(const RunConfig& c) {
  try {
    return {parse_tie_kind(c.tie), c.seed};
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

IngestOptions ingest_options(const RunConfig& c) {
  IngestOptions o;
  if (c.isolation == "or") o.isolation = IsolationRule::kNoCitationsOrNoReferences;
  return o;
}

fs::path output_dir(const RunConfig& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir.string());
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void write_file(const fs::path& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
}

// Everything that changes results; jobs is left out because it never does.
void write_run_metadata(const fs::path& dir, const RunConfig& c, std::uint64_t corpus_hash) {
  nlohmann::ordered_json j;
  j["subcommand"] = c.subcommand;
  j["seed"] = c.seed;
  j["tie"] = c.tie;
  j["isolation"] = c.isolation;
  j["corpus_hash"] = corpus_hash;
  if (c.subcommand == "eval-z") {
    j["years"] = c.years;
    j["t1"] = c.t1;
    j["t2"] = c.t2;
    j["tie_handling"] = c.tie_handling;
    j["gain"] = c.gain;
  }
  if (c.subcommand == "eval-tot") {
    j["pct"] = c.pct;
    j["horizon"] = c.horizon;
  }
  if (c.cutoff != CorpusView::kNoCutoff) j["cutoff"] = c.cutoff;
  write_file(dir / ("run_" + c.subcommand + ".json"), j.dump(2) + "\n");
}

struct LoadedCorpus {
  CitationCorpus corpus;
  std::uint64_t hash = 0;
};

void require_file(const std::string& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string(flag) + " is required");
  if (!fs::is_regular_file(path)) throw DataError("file not found: " + path);
}

// --corpus cache, or --edges/--meta with a content-hashed cache under --out.
LoadedCorpus load_corpus(const RunConfig& c, std::ostream& err) {
  LoadedCorpus loaded;
  if (!c.corpus.empty()) {
    require_file(c.corpus, "--corpus");
    loaded.corpus = CorpusCodec::load(c.corpus, &loaded.hash);
    return loaded;
  }
  require_file(c.edges, "--edges");
  require_file(c.meta, "--meta");
  const std::uint64_t salt = c.isolation == "or" ? 1 : 0;
  loaded.hash = content_hash({c.edges, c.meta}, salt);
  const fs::path cache = fs::path(c.out) / "corpus.bin";
  std::uint64_t cached = 0;
  if (CorpusCodec::peek_hash(cache, cached) && cached == loaded.hash) {
    loaded.corpus = CorpusCodec::load(cache);
    return loaded;
  }
  IngestReport report;
  const auto edges = read_edge_file(c.edges, &report);
  const auto papers = read_metadata_file(c.meta, &report);
  loaded.corpus = ingest(edges, papers, ingest_options(c), &report);
  if (loaded.corpus.paper_count() == 0) throw DataError("ingest produced an empty corpus");
  const auto dir = output_dir(c);
  CorpusCodec::save(dir / "corpus.bin", loaded.corpus, loaded.hash);
  err << "ingested " << report.papers_kept << " papers, " << report.edges_kept << " edges\n";
  return loaded;
}

int cmd_ingest(const RunConfig& c, std::ostream& out, std::ostream&) {
  require_file(c.edges, "--edges");
  require_file(c.meta, "--meta");
  IngestReport report;
  const auto edges = read_edge_file(c.edges, &report);
  const auto papers = read_metadata_file(c.meta, &report);
  const auto corpus = ingest(edges, papers, ingest_options(c), &report);
  const auto dir = output_dir(c);
  write_file(dir / "ingest_report.json", report.to_json() + "\n");
  if (corpus.paper_count() == 0) throw DataError("ingest produced an empty corpus");
  const std::uint64_t hash = content_hash({c.edges, c.meta}, c.isolation == "or" ? 1 : 0);
  CorpusCodec::save(dir / "corpus.bin", corpus, hash);
  if (c.export_text) {
    auto e = open_output(dir / "edges.tsv");
    write_corpus_edges(e, corpus);
    auto m = open_output(dir / "meta.jsonl");
    write_corpus_metadata(m, corpus);
  }
  write_run_metadata(dir, c, hash);
  out << report.to_json() << "\n";
  return kSuccess;
}

std::vector<std::string> requested_ids(const RunConfig& c) {
  std::vector<std::string> ids;
  if (!c.ids.empty()) {
    std::stringstream ss(c.ids);
    std::string id;
    while (std::getline(ss, id, ','))
      if (!id.empty()) ids.push_back(id);
  }
  if (!c.ids_file.empty()) {
    require_file(c.ids_file, "--ids-file");
    std::ifstream in(c.ids_file);
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      if (!line.empty() && line.front() != '#') ids.push_back(line);
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

int cmd_metrics(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto loaded = load_corpus(c, err);
  const CorpusView view(loaded.corpus, c.cutoff);
  const auto ids = requested_ids(c);
  const bool all = ids.empty() && c.ids_file.empty();

  std::vector<PaperIndex> papers;
  std::vector<std::pair<std::string, std::string>> errors;
  if (all) {
    papers = view.papers();
  } else {
    for (const auto& id : ids) {
      const auto p = loaded.corpus.find(id);
      if (!p || !view.contains(*p))
        errors.emplace_back(id, "unknown paper");
      else
        papers.push_back(*p);
    }
  }
  const auto reports = batch_metrics(view, papers, tie_policy(c), c.jobs);
  if (!all)
    for (std::size_t i = 0; i < papers.size(); ++i)
      if (!reports[i]) errors.emplace_back(loaded.corpus.id(papers[i]), "no citations");
  std::sort(errors.begin(), errors.end());

  const auto dir = output_dir(c);
  {
    auto csv = open_output(dir / "metrics.csv");
    write_metrics_csv(csv, reports);
  }
  if (c.json) {
    auto jl = open_output(dir / "metrics.jsonl");
    for (const auto& r : reports)
      if (r) jl << r->to_json() << '\n';
  }
  if (!errors.empty()) {
    auto e = open_output(dir / "metrics_errors.csv");
    e << "paper_id,error\n";
    for (const auto& [id, what] : errors) e << id << ',' << what << '\n';
  }
  write_run_metadata(dir, c, loaded.hash);
  const auto rows = std::count_if(reports.begin(), reports.end(), [](const auto& r) { return r.has_value(); });
  out << "metrics: " << rows << " rows, " << errors.size() << " errors -> " << (dir / "metrics.csv").string() << "\n";
  return kSuccess;
}

int cmd_stats(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto loaded = load_corpus(c, err);
  const CorpusView view(loaded.corpus, c.cutoff);
  const auto stats = corpus_stats(view, tie_policy(c), c.jobs);
  const auto dir = output_dir(c);
  {
    auto f = open_output(dir / "depth_hist.csv");
    write_histogram_csv(f, "depth", stats.depth_histogram);
  }
  {
    auto f = open_output(dir / "breadth_hist.csv");
    write_histogram_csv(f, "breadth", stats.breadth_histogram);
  }
  {
    auto f = open_output(dir / "scatter.csv");
    write_scatter_csv(f, stats);
  }
  write_file(dir / "correlations.json", stats.correlations_json() + "\n");
  write_run_metadata(dir, c, loaded.hash);
  out << stats.correlations_json() << "\n";
  return kSuccess;
}

int cmd_eval_z(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.t1 >= c.t2) throw UsageError("--t1 must be smaller than --t2");
  const auto [first, last] = parse_years(c.years);
  const auto loaded = load_corpus(c, err);
  ZExperimentOptions o;
  o.first_year = first;
  o.last_year = last;
  o.t1 = c.t1;
  o.t2 = c.t2;
  o.ties = tie_policy(c);
  o.jobs = c.jobs;
  if (c.tie_handling == "discard") o.tie_handling = TieHandling::kDiscardTies;
  if (c.gain == "absolute") o.gain = GainMode::kAbsolute;
  const auto result = z_experiment(loaded.corpus, o);
  const auto dir = output_dir(c);
  {
    auto f = open_output(dir / "venues.csv");
    write_venue_csv(f, result);
  }
  write_file(dir / "summary_z.json", eval_summary_json(&result, nullptr) + "\n");
  write_run_metadata(dir, c, loaded.hash);
  out << "venues: " << result.venues.size() << " (skipped " << result.skipped.size() << ")\n"
      << "mean z (nid):       " << format_real(result.mean_z_nid) << "\n"
      << "mean z (citations): " << format_real(result.mean_z_cite) << "\n";
  return kSuccess;
}

int cmd_eval_tot(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_file(c.awardees, "--awardees");
  std::ifstream in(c.awardees);
  const auto awardees = read_awardees(in);
  const auto loaded = load_corpus(c, err);
  ToTOptions o;
  o.pct = c.pct;
  o.horizon = c.horizon;
  o.ties = tie_policy(c);
  o.jobs = c.jobs;
  const auto result = tot_experiment(loaded.corpus, awardees, o);
  const auto dir = output_dir(c);
  {
    auto f = open_output(dir / "tot.csv");
    write_tot_csv(f, result);
  }
  write_file(dir / "summary_tot.json", eval_summary_json(nullptr, &result) + "\n");
  write_run_metadata(dir, c, loaded.hash);
  out << "cases: " << result.cases.size() << " (skipped " << result.skipped.size() << ")\n"
      << "MRR (nid):       " << format_real(result.mrr_nid) << "\n"
      << "MRR (citations): " << format_real(result.mrr_cite) << "\n";
  return kSuccess;
}

int cmd_idt(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.id.empty()) throw UsageError("--id is required");
  const auto loaded = load_corpus(c, err);
  const CorpusView view(loaded.corpus, c.cutoff);
  const auto paper = loaded.corpus.find(c.id);
  if (!paper || !view.contains(*paper)) throw DataError("unknown paper: " + c.id);
  const auto tree = build_idt(build_idg(view, *paper), tie_policy(c));
  const auto dir = output_dir(c);
  const std::string json = idt_to_json(tree, &loaded.corpus);
  write_file(dir / "idt.json", json + "\n");
  {
    auto f = open_output(dir / "idt_edges.tsv");
    write_idt_edges(f, tree, &loaded.corpus);
  }
  out << json << "\n";
  return kSuccess;
}

int cmd_synth(const RunConfig& c, std::ostream& out, std::ostream&) {
  RawCorpus raw;
  if (c.kind == "random") {
    RandomCorpusParams p;
    const auto [first, last] = parse_years(c.years);
    p.n_papers = c.papers;
    p.first_year = first;
    p.last_year = last;
    p.mean_references = c.refs;
    p.attachment_bias = c.bias;
    p.closure = c.closure;
    p.venues_per_year = c.venues;
    p.seed = c.seed;
    raw = gen_random_records(p);
  } else if (c.kind == "planted-z") {
    PlantedZParams p;
    const auto [first, last] = parse_years(c.years);
    p.first_year = first;
    p.last_year = last;
    p.t1 = c.t1;
    p.t2 = c.t2;
    p.seed = c.seed;
    raw = gen_planted_z(p);
  } else if (c.kind == "planted-tot") {
    PlantedToTParams p;
    p.seed = c.seed;
    raw = gen_planted_tot(p);
  } else {
    ShapeSpec spec;
    try {
      spec.kind = parse_shape_kind(c.kind);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    spec.n = c.n;
    spec.k = c.k;
    spec.r = c.r;
    spec.seed = c.seed;
    try {
      auto shape = gen_shape(spec);
      raw.papers = std::move(shape.papers);
      raw.edges = std::move(shape.edges);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  const auto dir = output_dir(c);
  {
    auto f = open_output(dir / "edges.tsv");
    write_edges(f, raw.edges);
  }
  {
    auto f = open_output(dir / "meta.jsonl");
    write_metadata(f, raw.papers);
  }
  if (!raw.awardees.empty()) {
    auto f = open_output(dir / "awardees.csv");
    f << "paper_id,venue,year\n";
    for (const auto& a : raw.awardees) f << a.paper_id << ',' << a.venue << ',' << a.year << '\n';
  }
  out << "synth " << c.kind << ": " << raw.papers.size() << " papers, " << raw.edges.size()
      << " edges -> " << dir.string() << "\n";
  return kSuccess;
}

void add_corpus_flags(CLI::App* sub, RunConfig& c) {
  sub->add_option("--edges", c.edges, "edge file (citing<TAB>cited)");
  sub->add_option("--meta", c.meta, "metadata file (JSON lines)");
  sub->add_option("--corpus", c.corpus, "binary corpus cache written by ingest");
  sub->add_option("--isolation", c.isolation, "isolated-paper rule")->check(CLI::IsMember({"and", "or"}));
}

void add_run_flags(CLI::App* sub, RunConfig& c) {
  sub->add_option("--tie", c.tie, "tie policy for equally deep parents")
      ->check(CLI::IsMember({"min-id", "max-id", "random"}));
  sub->add_option("--seed", c.seed, "seed for the random tie policy");
  sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::Range(1u, 1024u));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Influence dispersion trees and citation influence metrics"};
  app.require_subcommand(1, 1);

  auto* ingest_cmd = app.add_subcommand("ingest", "clean raw citation data and write a corpus cache");
  add_corpus_flags(ingest_cmd, c);
  ingest_cmd->add_option("--out", c.out, "output directory");
  ingest_cmd->add_flag("--export-text", c.export_text, "also write cleaned edges.tsv / meta.jsonl");

  auto* metrics_cmd = app.add_subcommand("metrics", "per-paper depth, breadth, IDI, NID");
  add_corpus_flags(metrics_cmd, c);
  add_run_flags(metrics_cmd, c);
  metrics_cmd->add_option("--out", c.out, "output directory");
  metrics_cmd->add_option("--ids", c.ids, "comma-separated paper ids (default: all)");
  metrics_cmd->add_option("--ids-file", c.ids_file, "file with one paper id per line");
  metrics_cmd->add_option("--cutoff", c.cutoff, "only use papers published up to this year");
  metrics_cmd->add_flag("--json", c.json, "also write metrics.jsonl");

  auto* stats_cmd = app.add_subcommand("stats", "depth/breadth distributions and correlations");
  add_corpus_flags(stats_cmd, c);
  add_run_flags(stats_cmd, c);
  stats_cmd->add_option("--out", c.out, "output directory");
  stats_cmd->add_option("--cutoff", c.cutoff, "only use papers published up to this year");

  auto* z_cmd = app.add_subcommand("eval-z", "venue z-score experiment");
  add_corpus_flags(z_cmd, c);
  add_run_flags(z_cmd, c);
  z_cmd->add_option("--out", c.out, "output directory");
  z_cmd->add_option("--years", c.years, "venue publication years, FIRST:LAST");
  z_cmd->add_option("--t1", c.t1, "years after publication for the influence ranking");
  z_cmd->add_option("--t2", c.t2, "years after publication for the citation gain");
  z_cmd->add_option("--ties", c.tie_handling, "Kendall tie handling")
      ->check(CLI::IsMember({"resolve", "discard"}));
  z_cmd->add_option("--gain", c.gain, "citation gain")->check(CLI::IsMember({"fractional", "absolute"}));

  auto* tot_cmd = app.add_subcommand("eval-tot", "Test-of-Time ranking experiment");
  add_corpus_flags(tot_cmd, c);
  add_run_flags(tot_cmd, c);
  tot_cmd->add_option("--out", c.out, "output directory");
  tot_cmd->add_option("--awardees", c.awardees, "CSV paper_id,venue,year");
  tot_cmd->add_option("--pct", c.pct, "share of the venue kept as competitors")
      ->check(CLI::Range(0.0, 1.0));
  tot_cmd->add_option("--horizon", c.horizon, "years after publication for ranking");

  auto* idt_cmd = app.add_subcommand("idt", "dump the IDT of one paper");
  add_corpus_flags(idt_cmd, c);
  add_run_flags(idt_cmd, c);
  idt_cmd->add_option("--out", c.out, "output directory");
  idt_cmd->add_option("--id", c.id, "paper id");
  idt_cmd->add_option("--cutoff", c.cutoff, "only use papers published up to this year");

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus");
  synth_cmd->add_option("--kind", c.kind,
                        "random | planted-z | planted-tot | star | chain | broom | optimal | "
                        "balanced | random-attachment");
  synth_cmd->add_option("--out", c.out, "output directory");
  synth_cmd->add_option("--papers", c.papers, "paper count (random)");
  synth_cmd->add_option("--years", c.years, "year range FIRST:LAST (random, planted-z)");
  synth_cmd->add_option("--bias", c.bias, "preferential attachment strength (random)");
  synth_cmd->add_option("--closure", c.closure, "chance of citing a target's reference (random)");
  synth_cmd->add_option("--refs", c.refs, "mean references per paper (random)");
  synth_cmd->add_option("--venues", c.venues, "venues per year (random)");
  synth_cmd->add_option("--t1", c.t1, "planted-z early window");
  synth_cmd->add_option("--t2", c.t2, "planted-z late window");
  synth_cmd->add_option("--n", c.n, "citation count (shapes)");
  synth_cmd->add_option("--k", c.k, "chain length (broom) or branch length (optimal)");
  synth_cmd->add_option("--r", c.r, "branch count (optimal)");
  synth_cmd->add_option("--seed", c.seed, "generator seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }
  c.subcommand = app.get_subcommands().front()->get_name();

  try {
    if (c.subcommand == "ingest") return cmd_ingest(c, out, err);
    if (c.subcommand == "metrics") return cmd_metrics(c, out, err);
    if (c.subcommand == "stats") return cmd_stats(c, out, err);
    if (c.subcommand == "eval-z") return cmd_eval_z(c, out, err);
    if (c.subcommand == "eval-tot") return cmd_eval_tot(c, out, err);
    if (c.subcommand == "idt") return cmd_idt(c, out, err);
    if (c.subcommand == "synth") return cmd_synth(c, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const UnknownPaperError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}

}  // namespace idtkit::cli

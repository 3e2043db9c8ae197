#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = idtkit::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("idtkit_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("missing input file exits nonzero and names the path") {
  const auto dir = scratch("missing");
  const auto r = run({"ingest", "--edges", "/no/such/edges.tsv", "--meta", "/no/such/meta.jsonl", "--out",
                      dir.string()});
  CHECK(r.code == idtkit::cli::kDataError);
  CHECK(r.err.find("/no/such/edges.tsv") != std::string::npos);
}

TEST_CASE("unknown subcommand or option is a usage error") {
  CHECK(run({"frobnicate"}).code == idtkit::cli::kUsage);
  CHECK(run({"metrics", "--tie", "sideways"}).code == idtkit::cli::kUsage);
  CHECK(run({"--help"}).code == idtkit::cli::kSuccess);
}

TEST_CASE("ingest reports planted forward citations") {
  const auto dir = scratch("forward");
  std::ofstream(dir / "edges.tsv") << "B\tA\nC\tA\nC\tB\nA\tB\nA\tC\nB\tC\n";
  std::ofstream(dir / "meta.jsonl") << "{\"id\":\"A\",\"year\":2000}\n{\"id\":\"B\",\"year\":2001}\n"
                                       "{\"id\":\"C\",\"year\":2002}\n";
  const auto r = run({"ingest", "--edges", (dir / "edges.tsv").string(), "--meta",
                      (dir / "meta.jsonl").string(), "--out", dir.string(), "--export-text"});
  REQUIRE(r.code == 0);
  const auto report = nlohmann::json::parse(slurp(dir / "ingest_report.json"));
  CHECK(report["dropped_forward"] == 3);
  CHECK(report["edges_kept"] == 3);
  CHECK(fs::exists(dir / "corpus.bin"));
  CHECK(slurp(dir / "edges.tsv").find("A\tB") == std::string::npos);
}

TEST_CASE("star shape through the whole pipeline") {
  const auto dir = scratch("star");
  REQUIRE(run({"synth", "--kind", "star", "--n", "100", "--out", dir.string()}).code == 0);
  const auto r = run({"metrics", "--edges", (dir / "edges.tsv").string(), "--meta",
                      (dir / "meta.jsonl").string(), "--ids", "P", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto csv = slurp(dir / "metrics.csv");
  CHECK(csv == "paper_id,n,d,b,idi,idi_min,idi_max,id,nid\nP,100,1,100,100,100,2550,0,0\n");

  const auto idt = run({"idt", "--corpus", (dir / "corpus.bin").string(), "--id", "P", "--out", dir.string()});
  REQUIRE(idt.code == 0);
  const auto tree = nlohmann::json::parse(slurp(dir / "idt.json"));
  CHECK(tree["nodes"].size() == 100);
}

TEST_CASE("stats on an all-star corpus") {
  const auto dir = scratch("stars");
  std::ofstream edges(dir / "edges.tsv"), meta(dir / "meta.jsonl");
  for (int p = 0; p < 5; ++p) {
    meta << "{\"id\":\"R" << p << "\",\"year\":2000}\n";
    for (int i = 0; i <= p; ++i) {
      meta << "{\"id\":\"R" << p << "c" << i << "\",\"year\":2001}\n";
      edges << "R" << p << "c" << i << "\tR" << p << "\n";
    }
  }
  edges.close();
  meta.close();
  const auto r = run({"stats", "--edges", (dir / "edges.tsv").string(), "--meta", (dir / "meta.jsonl").string(),
                      "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "depth_hist.csv") == "depth,count\n1,5\n");
  CHECK(slurp(dir / "breadth_hist.csv") == "breadth,count\n1,1\n2,1\n3,1\n4,1\n5,1\n");
}

TEST_CASE("metrics are byte-identical across runs and thread counts") {
  const auto dir = scratch("determinism");
  REQUIRE(run({"synth", "--kind", "random", "--papers", "3000", "--seed", "5", "--out", dir.string()}).code == 0);
  const auto edges = (dir / "edges.tsv").string(), meta = (dir / "meta.jsonl").string();
  std::string first;
  for (const char* jobs : {"1", "4", "1"}) {
    const auto out = dir / (std::string("run") + jobs);
    REQUIRE(run({"metrics", "--edges", edges, "--meta", meta, "--jobs", jobs, "--out", out.string()}).code == 0);
    const auto csv = slurp(out / "metrics.csv");
    if (first.empty()) first = csv;
    CHECK(csv == first);
  }
}

TEST_CASE("evaluation commands on planted data") {
  const auto dir = scratch("eval");
  REQUIRE(run({"synth", "--kind", "planted-tot", "--out", dir.string()}).code == 0);
  const auto tot = run({"eval-tot", "--edges", (dir / "edges.tsv").string(), "--meta",
                        (dir / "meta.jsonl").string(), "--awardees", (dir / "awardees.csv").string(),
                        "--out", dir.string()});
  REQUIRE(tot.code == 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "summary_tot.json"));
  CHECK(summary["tot"]["mrr_nid"] == 1.0);
  CHECK(summary["tot"]["mrr_cite"] == 0.75);

  const auto zdir = scratch("evalz");
  REQUIRE(run({"synth", "--kind", "planted-z", "--out", zdir.string()}).code == 0);
  const auto z = run({"eval-z", "--edges", (zdir / "edges.tsv").string(), "--meta",
                      (zdir / "meta.jsonl").string(), "--years", "1995:2000", "--out", zdir.string()});
  REQUIRE(z.code == 0);
  CHECK(fs::exists(zdir / "venues.csv"));
  CHECK(fs::exists(zdir / "summary_z.json"));
  CHECK(fs::exists(zdir / "run_eval-z.json"));
}

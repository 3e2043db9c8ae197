#include "idtkit/io.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace idtkit {

namespace {

std::string_view trim_line_end(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  return line;
}

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

constexpr std::array<char, 8> kMagic{'I', 'D', 'T', 'K', 'C', 'R', 'P', 'S'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b;
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

void put_string(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint64_t get_bytes(std::istream& in, int count) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), count);
  if (!in) throw DataError("truncated corpus cache");
  std::uint64_t v = 0;
  for (int i = 0; i < count; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

std::uint32_t get_u32(std::istream& in) { return static_cast<std::uint32_t>(get_bytes(in, 4)); }
std::uint64_t get_u64(std::istream& in) { return get_bytes(in, 8); }

std::string get_string(std::istream& in) {
  const auto size = get_u32(in);
  std::string s(size, '\0');
  in.read(s.data(), size);
  if (!in) throw DataError("truncated corpus cache");
  return s;
}

bool read_header(std::istream& in, std::uint64_t& hash) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) return false;
  if (get_u32(in) != kVersion) return false;
  hash = get_u64(in);
  return true;
}

}  // namespace

std::vector<CitationEdge> read_edges(std::istream& in, IngestReport* report) {
  std::vector<CitationEdge> edges;
  std::string raw;
  while (std::getline(in, raw)) {
    const std::string_view line = trim_line_end(raw);
    if (line.empty() || line.front() == '#' || blank(line)) continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string_view::npos) {
      if (report) ++report->malformed_edges;
      continue;
    }
    edges.push_back({std::string(line.substr(0, tab)), std::string(line.substr(tab + 1))});
  }
  return edges;
}

std::vector<CitationEdge> read_edge_file(const std::filesystem::path& path, IngestReport* report) {
  auto in = open_input(path);
  return read_edges(in, report);
}

std::vector<PaperRecord> read_metadata(std::istream& in, IngestReport* report) {
  std::vector<PaperRecord> papers;
  std::string raw;
  while (std::getline(in, raw)) {
    const std::string_view line = trim_line_end(raw);
    if (blank(line)) continue;
    const auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    const bool ok = j.is_object() && j.contains("id") && j["id"].is_string() &&
                    !j["id"].get_ref<const std::string&>().empty() && j.contains("year") &&
                    j["year"].is_number_integer() &&
                    (!j.contains("venue") || j["venue"].is_string() || j["venue"].is_null());
    if (!ok) {
      if (report) ++report->malformed_papers;
      continue;
    }
    PaperRecord p;
    p.id = j["id"].get<std::string>();
    p.year = j["year"].get<int>();
    if (j.contains("venue") && j["venue"].is_string()) p.venue = j["venue"].get<std::string>();
    papers.push_back(std::move(p));
  }
  return papers;
}

std::vector<PaperRecord> read_metadata_file(const std::filesystem::path& path,
                                            IngestReport* report) {
  auto in = open_input(path);
  return read_metadata(in, report);
}

void write_edges(std::ostream& out, std::span<const CitationEdge> edges) {
  for (const auto& e : edges) out << e.citing << '\t' << e.cited << '\n';
}

void write_metadata(std::ostream& out, std::span<const PaperRecord> papers) {
  for (const auto& p : papers) {
    nlohmann::ordered_json j;
    j["id"] = p.id;
    j["year"] = p.year;
    if (!p.venue.empty()) j["venue"] = p.venue;
    out << j.dump() << '\n';
  }
}

void write_corpus_edges(std::ostream& out, const CitationCorpus& corpus) {
  for (PaperIndex p = 0; p < corpus.paper_count(); ++p)
    for (PaperIndex q : corpus.references(p)) out << corpus.id(p) << '\t' << corpus.id(q) << '\n';
}

void write_corpus_metadata(std::ostream& out, const CitationCorpus& corpus) {
  write_metadata(out, corpus.papers());
}

std::uint64_t content_hash(const std::vector<std::filesystem::path>& files, std::uint64_t salt) {
  constexpr std::uint64_t kPrime = 0x100000001b3ULL;
  std::uint64_t h = 0xcbf29ce484222325ULL ^ salt;
  auto mix = [&](unsigned char byte) {
    h ^= byte;
    h *= kPrime;
  };
  std::array<char, 1 << 16> buffer;
  for (const auto& path : files) {
    auto in = open_input(path);
    std::uint64_t size = 0;
    while (in) {
      in.read(buffer.data(), buffer.size());
      const auto got = static_cast<std::size_t>(in.gcount());
      for (std::size_t i = 0; i < got; ++i) mix(static_cast<unsigned char>(buffer[i]));
      size += got;
    }
    for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>((size >> (8 * i)) & 0xff));
  }
  return h;
}

void CorpusCodec::write(std::ostream& out, const CitationCorpus& corpus, std::uint64_t source_hash) {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kVersion);
  put_u64(out, source_hash);
  put_u64(out, corpus.paper_count());
  put_u64(out, corpus.edge_count());
  for (const auto& p : corpus.papers()) {
    put_string(out, p.id);
    put_u32(out, static_cast<std::uint32_t>(p.year));
    put_string(out, p.venue);
  }
  for (PaperIndex p = 0; p < corpus.paper_count(); ++p)
    for (PaperIndex q : corpus.references(p)) {
      put_u32(out, p);
      put_u32(out, q);
    }
}

void CorpusCodec::save(const std::filesystem::path& path, const CitationCorpus& corpus,
                       std::uint64_t source_hash) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  write(out, corpus, source_hash);
  if (!out) throw DataError("failed writing " + path.string());
}

CitationCorpus CorpusCodec::read(std::istream& in, std::uint64_t* source_hash) {
  std::uint64_t hash = 0;
  if (!read_header(in, hash)) throw DataError("not a corpus cache (bad magic or version)");
  if (source_hash) *source_hash = hash;
  const auto paper_count = get_u64(in);
  const auto edge_count = get_u64(in);
  std::vector<PaperRecord> papers;
  papers.reserve(paper_count);
  for (std::uint64_t i = 0; i < paper_count; ++i) {
    PaperRecord p;
    p.id = get_string(in);
    p.year = static_cast<int>(get_u32(in));
    p.venue = get_string(in);
    if (!papers.empty() && !(papers.back().id < p.id))
      throw DataError("corrupt corpus cache: ids out of order");
    papers.push_back(std::move(p));
  }
  std::vector<std::pair<PaperIndex, PaperIndex>> edges;
  edges.reserve(edge_count);
  for (std::uint64_t i = 0; i < edge_count; ++i) {
    const auto u = get_u32(in);
    const auto v = get_u32(in);
    if (u >= paper_count || v >= paper_count) throw DataError("corrupt corpus cache: bad edge");
    edges.emplace_back(u, v);
  }
  return CitationCorpus::assemble(std::move(papers), std::move(edges));
}

CitationCorpus CorpusCodec::load(const std::filesystem::path& path, std::uint64_t* source_hash) {
  auto in = open_input(path);
  return read(in, source_hash);
}

bool CorpusCodec::peek_hash(const std::filesystem::path& path, std::uint64_t& source_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  try {
    return read_header(in, source_hash);
  } catch (const DataError&) {
    return false;
  }
}

}  // namespace idtkit

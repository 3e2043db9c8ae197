#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "idtkit/corpus.hpp"

namespace idtkit {

// Unreadable or unusable input data (missing file, bad cache, empty corpus).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Edge file: one `citing<TAB>cited` per line, '#' lines and blank lines
// skipped. Malformed lines are counted in report->malformed_edges.
std::vector<CitationEdge> read_edges(std::istream& in, IngestReport* report = nullptr);
std::vector<CitationEdge> read_edge_file(const std::filesystem::path& path,
                                         IngestReport* report = nullptr);

// Metadata file: one JSON object per line, {"id": str, "year": int,
// "venue": str (optional)}.
std::vector<PaperRecord> read_metadata(std::istream& in, IngestReport* report = nullptr);
std::vector<PaperRecord> read_metadata_file(const std::filesystem::path& path,
                                            IngestReport* report = nullptr);

void write_edges(std::ostream& out, std::span<const CitationEdge> edges);
void write_metadata(std::ostream& out, std::span<const PaperRecord> papers);
// Re-serializes a corpus in the ingest formats (edges by citing then cited id).
void write_corpus_edges(std::ostream& out, const CitationCorpus& corpus);
void write_corpus_metadata(std::ostream& out, const CitationCorpus& corpus);

// 64-bit FNV-1a over the bytes of each file in turn, with the file sizes mixed
// in so that boundaries matter.
std::uint64_t content_hash(const std::vector<std::filesystem::path>& files,
                           std::uint64_t salt = 0);

// Binary corpus cache. Little-endian, versioned; stores the content hash of
// the inputs it was built from.
class CorpusCodec {
 public:
  static void save(const std::filesystem::path& path, const CitationCorpus& corpus,
                   std::uint64_t source_hash);
  static void write(std::ostream& out, const CitationCorpus& corpus,
                    std::uint64_t source_hash);
  // Throws DataError on a truncated or foreign file.
  static CitationCorpus load(const std::filesystem::path& path,
                             std::uint64_t* source_hash = nullptr);
  static CitationCorpus read(std::istream& in, std::uint64_t* source_hash = nullptr);
  // Reads only the header. Returns false when the file is not a cache.
  static bool peek_hash(const std::filesystem::path& path, std::uint64_t& source_hash);
};

}  // namespace idtkit

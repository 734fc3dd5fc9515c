#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace semdiff::corpus {

enum class Kind { Journal, Conference, BookChapter, Other };

std::string kind_to_string(Kind k);
Kind kind_from_string(std::string_view s);  // unknown strings map to Other

/// One publication. Immutable value once parsed; author names are stored in
/// normalized form.
struct PublicationRecord {
  std::string record_id;
  std::string title;
  std::vector<std::string> authors;
  int year = 0;
  std::string venue;
  Kind kind = Kind::Other;
  std::string layer;

  bool operator==(const PublicationRecord&) const = default;
};

struct CorpusStats {
  uint64_t n_papers = 0;
  uint64_t n_distinct_authors = 0;
  std::map<int, uint64_t> year_histogram;
};

struct ParseFilters {
  int year_min = std::numeric_limits<int>::min();
  int year_max = std::numeric_limits<int>::max();
  std::optional<std::vector<Kind>> kinds;  // nullopt = all kinds
};

struct ParseResult {
  uint64_t n_yielded = 0;
  uint64_t n_filtered = 0;
  uint64_t n_malformed = 0;
};

/// Element/attribute mapping for the generic publication-per-element XML
/// layout. `record_elements` maps element name to the Kind it implies.
struct XmlMapping {
  std::map<std::string, Kind> record_elements = {
      {"article", Kind::Journal},
      {"inproceedings", Kind::Conference},
      {"incollection", Kind::BookChapter},
      {"proceedings", Kind::Other},
      {"book", Kind::Other},
      {"phdthesis", Kind::Other},
      {"mastersthesis", Kind::Other},
  };
  std::string id_attribute = "key";     // empty = synthesize from position
  std::string title_element = "title";
  std::string author_element = "author";
  std::string year_element = "year";
  std::vector<std::string> venue_elements = {"journal", "booktitle"};
};

// Whitespace collapse + trim + Unicode compatibility normalization.
// Throws Error on all-whitespace input.
std::string normalize_name(std::string_view raw);

using RecordSink = std::function<void(PublicationRecord&&)>;

// Streaming parsers. Records failing `filters` are dropped and counted as
// filtered; structurally unusable records (no year, no authors) are counted
// as malformed. Both parse with memory bounded by one record.
ParseResult parse_jsonl(std::istream& in, const ParseFilters& filters,
                        std::string_view layer, const RecordSink& sink);
ParseResult parse_xml(std::istream& in, const XmlMapping& mapping, const ParseFilters& filters,
                      std::string_view layer, const RecordSink& sink);

// Canonical interchange format: one JSON object per line, fixed key order.
std::string to_canonical_line(const PublicationRecord& rec);
void write_canonical(std::ostream& out, const PublicationRecord& rec);

class StatsAccumulator {
 public:
  void add(const PublicationRecord& rec);
  CorpusStats finish() const;

 private:
  CorpusStats stats_;
  std::set<std::string> authors_;
};

}  // namespace semdiff::corpus

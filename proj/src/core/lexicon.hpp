#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace semdiff::lexicon {

using TokenSeq = std::vector<std::string>;

struct Topic {
  std::string topic_id;
  TokenSeq canonical;
  std::vector<TokenSeq> synonyms;
};

enum class ConflictSeverity { Hard, Warning };

struct Conflict {
  ConflictSeverity severity;
  std::string topic_a;
  std::string topic_b;
  std::string detail;
};

/// The topic basis. Immutable after load; indexing against it is pure.
class TopicSet {
 public:
  TopicSet(std::vector<Topic> topics, std::set<std::string> stoplist);

  static TopicSet load(const std::string& topics_json_path, const std::string& stoplist_path);
  static TopicSet from_json_text(std::string_view json_text, std::set<std::string> stoplist = {});

  const std::vector<Topic>& topics() const { return topics_; }
  const std::set<std::string>& stoplist() const { return stoplist_; }
  size_t size() const { return topics_.size(); }
  bool has_topic(const std::string& id) const;

  // Token sequence -> owning topic_id (smallest id wins on duplicates).
  const std::map<TokenSeq, std::string>& dictionary() const { return dict_; }
  size_t max_lexeme_len() const { return max_len_; }

 private:
  std::vector<Topic> topics_;
  std::set<std::string> stoplist_;
  std::map<TokenSeq, std::string> dict_;
  size_t max_len_ = 0;
};

struct IndexedPaper {
  std::string record_id;
  int year = 0;
  std::set<std::string> topic_ids;
};

// Lowercases, strips punctuation, drops stoplist tokens.
TokenSeq tokenize(std::string_view text, const std::set<std::string>& stoplist);

// Greedy longest-match, left to right; each token joins at most one match.
std::set<std::string> index_title(std::string_view title, const TopicSet& topics);

std::vector<Conflict> validate_disjointness(const TopicSet& topics);

struct Coverage {
  std::map<int, double> per_year;
  double overall = 0.0;
  uint64_t n_papers = 0;
  uint64_t n_indexed = 0;
};

Coverage coverage(const std::vector<IndexedPaper>& indexed);

/// Per-year topic counts and the trend distribution L_s.
struct TrendSeries {
  // counts[year][topic] = number of papers in `year` containing `topic`
  std::map<int, std::map<std::string, uint64_t>> counts;
  // trend[year][topic] = share, each paper splitting unit weight over its topics
  std::map<int, std::map<std::string, double>> trend;
  std::map<int, uint64_t> totals;  // indexed papers per year

  // L_s(c_k, t); 0 when absent
  double share(const std::string& topic_id, int year) const;
  const std::map<std::string, double>* year_row(int year) const;
};

TrendSeries compute_trend(const std::vector<IndexedPaper>& indexed);

}  // namespace semdiff::lexicon

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "core/lexicon.hpp"
#include "core/util.hpp"

using namespace semdiff;
using lexicon::IndexedPaper;
using lexicon::TokenSeq;
using lexicon::Topic;
using lexicon::TopicSet;

namespace {

TopicSet two_topics() {
  return TopicSet(
      {
          {"T1", {"neural", "network"}, {{"neural", "networks"}}},
          {"T2", {"image", "segmentation"}, {}},
      },
      {});
}

// Reference oracle: enumerates every way of laying non-overlapping dictionary
// matches over the token stream and returns the matches of the left-greedy
// longest assignment, to check the production longest-match rule.
std::set<std::string> greedy_oracle(const TokenSeq& toks, const TopicSet& ts) {
  std::set<std::string> out;
  size_t i = 0;
  while (i < toks.size()) {
    size_t best_len = 0;
    std::string best;
    for (size_t len = toks.size() - i; len >= 1; --len) {
      TokenSeq cand(toks.begin() + i, toks.begin() + i + len);
      auto it = ts.dictionary().find(cand);
      if (it != ts.dictionary().end()) {
        best_len = len;
        best = it->second;
        break;
      }
    }
    if (best_len) {
      out.insert(best);
      i += best_len;
    } else {
      ++i;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("two-topic title indexes both topics") {
  auto ts = two_topics();
  auto got = lexicon::index_title("A survey of neural networks for image segmentation", ts);
  CHECK(got == std::set<std::string>{"T1", "T2"});
}

TEST_CASE("title without matches yields the empty set") {
  auto ts = two_topics();
  CHECK(lexicon::index_title("Completely unrelated words here", ts).empty());
}

TEST_CASE("longest match wins over a contained lexeme") {
  TopicSet ts({{"T1", {"neural", "network"}, {}}, {"T2", {"deep", "neural", "network"}, {}}}, {});
  auto got = lexicon::index_title("deep neural network pruning", ts);
  CHECK(got == std::set<std::string>{"T2"});
  CHECK(got == greedy_oracle(lexicon::tokenize("deep neural network pruning", {}), ts));
}

TEST_CASE("indexing is invariant to case and punctuation") {
  auto ts = two_topics();
  auto a = lexicon::index_title("Neural Networks: Image Segmentation!", ts);
  auto b = lexicon::index_title("neural networks -- image segmentation", ts);
  auto c = lexicon::index_title("NEURAL NETWORKS, IMAGE SEGMENTATION", ts);
  CHECK(a == b);
  CHECK(b == c);
  CHECK(a == std::set<std::string>{"T1", "T2"});
}

TEST_CASE("topic list order does not change indexing") {
  std::vector<Topic> topics = {
      {"T1", {"neural", "network"}, {}},
      {"T2", {"deep", "neural", "network"}, {}},
      {"T3", {"network", "pruning"}, {}},
  };
  std::mt19937 rng(7);
  const std::string title = "deep neural network pruning with neural network tricks";
  auto baseline = lexicon::index_title(title, TopicSet(topics, {}));
  for (int i = 0; i < 10; ++i) {
    std::shuffle(topics.begin(), topics.end(), rng);
    CHECK(lexicon::index_title(title, TopicSet(topics, {})) == baseline);
  }
}

TEST_CASE("equal-length ties break to the smaller topic_id") {
  // same lexeme owned by two topics: dict keeps the smaller id
  TopicSet ts({{"TB", {"markov", "chain"}, {}}, {"TA", {"markov", "chain"}, {}}}, {});
  CHECK(lexicon::index_title("a markov chain", ts) == std::set<std::string>{"TA"});
}

TEST_CASE("stoplist tokens are dropped before matching") {
  TopicSet ts({{"T1", {"graph", "theory"}, {}}}, {"of", "the"});
  CHECK(lexicon::index_title("graph of the theory", ts) == std::set<std::string>{"T1"});
}

TEST_CASE("disjointness validation") {
  SUBCASE("duplicate lexeme is a hard conflict") {
    TopicSet ts({{"TA", {"markov", "chain"}, {}}, {"TB", {"markov", "chain"}, {}}}, {});
    auto conflicts = lexicon::validate_disjointness(ts);
    REQUIRE(conflicts.size() == 1);
    CHECK(conflicts[0].severity == lexicon::ConflictSeverity::Hard);
  }
  SUBCASE("disjoint lexemes have no conflicts") {
    auto conflicts = lexicon::validate_disjointness(two_topics());
    CHECK(conflicts.empty());
  }
  SUBCASE("containment is a warning") {
    TopicSet ts({{"T1", {"neural", "network"}, {}}, {"T2", {"deep", "neural", "network"}, {}}}, {});
    auto conflicts = lexicon::validate_disjointness(ts);
    REQUIRE(conflicts.size() == 1);
    CHECK(conflicts[0].severity == lexicon::ConflictSeverity::Warning);
    // brute-force subsequence scan agrees
    TokenSeq small{"neural", "network"}, big{"deep", "neural", "network"};
    bool found = false;
    for (size_t i = 0; i + small.size() <= big.size(); ++i)
      found |= std::equal(small.begin(), small.end(), big.begin() + i);
    CHECK(found);
  }
}

TEST_CASE("coverage fractions") {
  auto paper = [](const char* id, int year, std::set<std::string> topics) {
    return IndexedPaper{id, year, std::move(topics)};
  };
  SUBCASE("all indexed") {
    auto cov = lexicon::coverage({paper("a", 2000, {"T1"}), paper("b", 2001, {"T2"})});
    CHECK(cov.overall == doctest::Approx(1.0));
  }
  SUBCASE("none indexed") {
    auto cov = lexicon::coverage({paper("a", 2000, {}), paper("b", 2001, {})});
    CHECK(cov.overall == doctest::Approx(0.0));
  }
  SUBCASE("3 of 4 indexed") {
    auto cov = lexicon::coverage({paper("a", 2000, {"T1"}), paper("b", 2000, {"T1"}),
                                  paper("c", 2000, {}), paper("d", 2001, {"T2"})});
    CHECK(cov.overall == doctest::Approx(0.75));
    CHECK(cov.per_year[2000] == doctest::Approx(2.0 / 3.0));
    CHECK(cov.per_year[2001] == doctest::Approx(1.0));
  }
}

TEST_CASE("trend series counts and shares") {
  SUBCASE("single paper, single topic") {
    auto ts = lexicon::compute_trend({{"a", 2000, {"T1"}}});
    CHECK(ts.counts[2000]["T1"] == 1);
    CHECK(ts.share("T1", 2000) == doctest::Approx(1.0));
  }
  SUBCASE("split weighting") {
    auto ts = lexicon::compute_trend({{"a", 2000, {"T1"}}, {"b", 2000, {"T1", "T2"}}});
    CHECK(ts.counts[2000]["T1"] == 2);
    CHECK(ts.counts[2000]["T2"] == 1);
    CHECK(ts.share("T1", 2000) == doctest::Approx(0.75));
    CHECK(ts.share("T2", 2000) == doctest::Approx(0.25));
  }
  SUBCASE("unindexable papers contribute nothing") {
    auto ts = lexicon::compute_trend({{"a", 2000, {}}});
    CHECK(ts.totals.empty());
    CHECK(ts.trend.empty());
  }
}

TEST_CASE("trend shares sum to one for every populated year") {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> year(1990, 2000);
  std::uniform_int_distribution<int> ntop(0, 4);
  std::vector<IndexedPaper> papers;
  const char* topic_names[] = {"T1", "T2", "T3", "T4", "T5", "T6"};
  for (int i = 0; i < 500; ++i) {
    IndexedPaper p;
    p.record_id = "p" + std::to_string(i);
    p.year = year(rng);
    int n = ntop(rng);
    while (int(p.topic_ids.size()) < n)
      p.topic_ids.insert(topic_names[std::uniform_int_distribution<int>(0, 5)(rng)]);
    papers.push_back(std::move(p));
  }
  auto ts = lexicon::compute_trend(papers);
  for (const auto& [y, row] : ts.trend) {
    double sum = 0;
    for (const auto& [t, v] : row) {
      sum += v;
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("topic set loads from JSON text") {
  auto ts = TopicSet::from_json_text(R"([
    {"topic_id":"T1","lexeme":"Neural Network","synonyms":["neural networks"]},
    {"topic_id":"T2","lexeme":"image segmentation"}
  ])");
  CHECK(ts.size() == 2);
  CHECK(lexicon::index_title("neural networks everywhere", ts) == std::set<std::string>{"T1"});
}

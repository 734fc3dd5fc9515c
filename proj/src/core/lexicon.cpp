#include "lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "unicode.hpp"
#include "util.hpp"

namespace semdiff::lexicon {

using json = nlohmann::json;

TokenSeq tokenize(std::string_view text, const std::set<std::string>& stoplist) {
  std::u32string cps = uni::decode_utf8(uni::to_lower(text));
  TokenSeq out;
  std::u32string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    std::string tok = uni::encode_utf8(cur);
    cur.clear();
    if (!stoplist.count(tok)) out.push_back(std::move(tok));
  };
  for (char32_t cp : cps) {
    if (uni::is_alnum(cp)) cur.push_back(cp);
    else flush();
  }
  flush();
  return out;
}

TopicSet::TopicSet(std::vector<Topic> topics, std::set<std::string> stoplist)
    : topics_(std::move(topics)), stoplist_(std::move(stoplist)) {
  std::sort(topics_.begin(), topics_.end(),
            [](const Topic& a, const Topic& b) { return a.topic_id < b.topic_id; });
  for (const Topic& t : topics_) {
    if (t.topic_id.empty()) throw Error("topic with empty topic_id");
    if (t.canonical.empty()) throw Error("topic " + t.topic_id + " has an empty lexeme");
    auto add = [&](const TokenSeq& seq) {
      if (seq.empty()) throw Error("topic " + t.topic_id + " has an empty synonym");
      auto [it, inserted] = dict_.emplace(seq, t.topic_id);
      if (!inserted && t.topic_id < it->second) it->second = t.topic_id;
      max_len_ = std::max(max_len_, seq.size());
    };
    add(t.canonical);
    for (const TokenSeq& s : t.synonyms) add(s);
  }
}

bool TopicSet::has_topic(const std::string& id) const {
  return std::binary_search(topics_.begin(), topics_.end(), id,
                            [](const auto& a, const auto& b) {
                              if constexpr (std::is_same_v<std::decay_t<decltype(a)>, Topic>)
                                return a.topic_id < b;
                              else
                                return a < b.topic_id;
                            });
}

TopicSet TopicSet::from_json_text(std::string_view json_text, std::set<std::string> stoplist) {
  json j = json::parse(json_text);
  std::vector<Topic> topics;
  const json& arr = j.is_array() ? j : j.at("topics");
  for (const auto& e : arr) {
    Topic t;
    t.topic_id = e.at("topic_id").get<std::string>();
    t.canonical = tokenize(e.at("lexeme").get<std::string>(), {});
    if (e.contains("synonyms"))
      for (const auto& s : e["synonyms"]) t.synonyms.push_back(tokenize(s.get<std::string>(), {}));
    topics.push_back(std::move(t));
  }
  return TopicSet(std::move(topics), std::move(stoplist));
}

TopicSet TopicSet::load(const std::string& topics_json_path, const std::string& stoplist_path) {
  std::set<std::string> stop;
  if (!stoplist_path.empty()) {
    std::ifstream in(stoplist_path);
    if (!in) throw Error("cannot open stoplist: " + stoplist_path);
    std::string line;
    while (std::getline(in, line)) {
      std::string tok = util::trim(line);
      if (!tok.empty()) stop.insert(uni::to_lower(tok));
    }
  }
  return from_json_text(util::read_file(topics_json_path), std::move(stop));
}

std::set<std::string> index_title(std::string_view title, const TopicSet& topics) {
  TokenSeq toks = tokenize(title, topics.stoplist());
  const auto& dict = topics.dictionary();
  std::set<std::string> out;
  size_t i = 0;
  while (i < toks.size()) {
    size_t best = 0;
    const std::string* best_topic = nullptr;
    size_t max_len = std::min(topics.max_lexeme_len(), toks.size() - i);
    TokenSeq probe;
    probe.reserve(max_len);
    for (size_t len = 1; len <= max_len; ++len) {
      probe.push_back(toks[i + len - 1]);
      auto it = dict.find(probe);
      if (it != dict.end()) {
        best = len;
        best_topic = &it->second;
      }
    }
    if (best_topic) {
      out.insert(*best_topic);
      i += best;
    } else {
      ++i;
    }
  }
  return out;
}

namespace {

bool contains_subseq(const TokenSeq& big, const TokenSeq& small) {
  if (small.size() > big.size()) return false;
  for (size_t i = 0; i + small.size() <= big.size(); ++i) {
    if (std::equal(small.begin(), small.end(), big.begin() + i)) return true;
  }
  return false;
}

std::string join(const TokenSeq& seq) {
  std::string out;
  for (size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ' ';
    out += seq[i];
  }
  return out;
}

}  // namespace

std::vector<Conflict> validate_disjointness(const TopicSet& topics) {
  std::vector<Conflict> out;
  // collect every (sequence, owner) including duplicates hidden by the dict
  std::vector<std::pair<TokenSeq, std::string>> all;
  for (const Topic& t : topics.topics()) {
    all.emplace_back(t.canonical, t.topic_id);
    for (const TokenSeq& s : t.synonyms) all.emplace_back(s, t.topic_id);
  }
  std::sort(all.begin(), all.end());
  for (size_t i = 1; i < all.size(); ++i) {
    if (all[i].first == all[i - 1].first && all[i].second != all[i - 1].second) {
      out.push_back({ConflictSeverity::Hard, all[i - 1].second, all[i].second,
                     "lexeme \"" + join(all[i].first) + "\" owned by two topics"});
    }
  }
  for (size_t a = 0; a < all.size(); ++a) {
    for (size_t b = 0; b < all.size(); ++b) {
      if (a == b || all[a].second == all[b].second) continue;
      if (all[a].first.size() < all[b].first.size() &&
          contains_subseq(all[b].first, all[a].first)) {
        out.push_back({ConflictSeverity::Warning, all[a].second, all[b].second,
                       "\"" + join(all[a].first) + "\" is contained in \"" + join(all[b].first) +
                           "\" (longest-match resolves)"});
      }
    }
  }
  return out;
}

Coverage coverage(const std::vector<IndexedPaper>& indexed) {
  Coverage cov;
  std::map<int, std::pair<uint64_t, uint64_t>> per_year;  // total, indexed
  for (const auto& p : indexed) {
    auto& [total, idx] = per_year[p.year];
    ++total;
    ++cov.n_papers;
    if (!p.topic_ids.empty()) {
      ++idx;
      ++cov.n_indexed;
    }
  }
  for (const auto& [year, counts] : per_year)
    cov.per_year[year] = counts.first ? double(counts.second) / double(counts.first) : 0.0;
  cov.overall = cov.n_papers ? double(cov.n_indexed) / double(cov.n_papers) : 0.0;
  return cov;
}

double TrendSeries::share(const std::string& topic_id, int year) const {
  auto yit = trend.find(year);
  if (yit == trend.end()) return 0.0;
  auto tit = yit->second.find(topic_id);
  return tit == yit->second.end() ? 0.0 : tit->second;
}

const std::map<std::string, double>* TrendSeries::year_row(int year) const {
  auto yit = trend.find(year);
  return yit == trend.end() ? nullptr : &yit->second;
}

TrendSeries compute_trend(const std::vector<IndexedPaper>& indexed) {
  TrendSeries ts;
  for (const auto& p : indexed) {
    if (p.topic_ids.empty()) continue;
    ++ts.totals[p.year];
    double w = 1.0 / double(p.topic_ids.size());
    for (const auto& t : p.topic_ids) {
      ++ts.counts[p.year][t];
      ts.trend[p.year][t] += w;
    }
  }
  for (auto& [year, row] : ts.trend) {
    double total = double(ts.totals[year]);
    for (auto& [topic, v] : row) v /= total;
  }
  return ts;
}

}  // namespace semdiff::lexicon

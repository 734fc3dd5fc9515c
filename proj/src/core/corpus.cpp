#include "corpus.hpp"

#include <cstdlib>

#include <nlohmann/json.hpp>

#include "unicode.hpp"
#include "util.hpp"
#include "xml.hpp"

namespace semdiff::corpus {

using json = nlohmann::json;

std::string kind_to_string(Kind k) {
  switch (k) {
    case Kind::Journal: return "journal";
    case Kind::Conference: return "conference";
    case Kind::BookChapter: return "book_chapter";
    case Kind::Other: return "other";
  }
  return "other";
}

Kind kind_from_string(std::string_view s) {
  if (s == "journal") return Kind::Journal;
  if (s == "conference") return Kind::Conference;
  if (s == "book_chapter") return Kind::BookChapter;
  return Kind::Other;
}

std::string normalize_name(std::string_view raw) {
  std::u32string cps = uni::decode_utf8(uni::nfkc(raw));
  std::u32string out;
  out.reserve(cps.size());
  bool pending_space = false;
  for (char32_t cp : cps) {
    if (uni::is_space(cp)) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(U' ');
      pending_space = false;
    }
    out.push_back(cp);
  }
  if (out.empty()) throw Error("author name is empty after normalization");
  return uni::encode_utf8(out);
}

namespace {

bool passes(const PublicationRecord& rec, const ParseFilters& f) {
  if (rec.year < f.year_min || rec.year > f.year_max) return false;
  if (f.kinds) {
    bool found = false;
    for (Kind k : *f.kinds) found |= (k == rec.kind);
    if (!found) return false;
  }
  return true;
}

// Normalizes authors in place; false when the record is unusable.
bool finalize_record(PublicationRecord& rec) {
  if (rec.year == 0 || rec.authors.empty()) return false;
  std::vector<std::string> norm;
  norm.reserve(rec.authors.size());
  for (const auto& a : rec.authors) {
    try {
      norm.push_back(normalize_name(a));
    } catch (const Error&) {
      return false;
    }
  }
  rec.authors = std::move(norm);
  return true;
}

}  // namespace

ParseResult parse_jsonl(std::istream& in, const ParseFilters& f, std::string_view layer,
                        const RecordSink& sink) {
  if (!in) throw Error("unreadable record source");
  ParseResult res;
  std::string line;
  while (std::getline(in, line)) {
    if (util::trim(line).empty()) continue;
    PublicationRecord rec;
    try {
      json j = json::parse(line);
      rec.record_id = j.at("record_id").get<std::string>();
      rec.title = j.value("title", "");
      for (const auto& a : j.at("authors")) rec.authors.push_back(a.get<std::string>());
      rec.year = j.at("year").get<int>();
      rec.venue = j.value("venue", "");
      rec.kind = kind_from_string(j.value("kind", "other"));
      rec.layer = j.value("layer", std::string(layer));
      if (!layer.empty()) rec.layer = std::string(layer);
    } catch (const json::exception&) {
      ++res.n_malformed;
      continue;
    }
    if (!finalize_record(rec)) {
      ++res.n_malformed;
      continue;
    }
    if (!passes(rec, f)) {
      ++res.n_filtered;
      continue;
    }
    ++res.n_yielded;
    sink(std::move(rec));
  }
  return res;
}

ParseResult parse_xml(std::istream& in, const XmlMapping& m, const ParseFilters& f,
                      std::string_view layer, const RecordSink& sink) {
  if (!in) throw Error("unreadable record source");
  ParseResult res;
  xml::PullParser parser(in);

  PublicationRecord rec;
  bool in_record = false;
  std::string record_element;
  std::string field;  // which mapped field the current text belongs to
  std::string field_element;
  std::string text;
  uint64_t position = 0;

  auto field_for = [&](const std::string& name) -> std::string {
    if (name == m.title_element) return "title";
    if (name == m.author_element) return "author";
    if (name == m.year_element) return "year";
    for (const auto& v : m.venue_elements)
      if (name == v) return "venue";
    return {};
  };

  for (;;) {
    xml::Event ev = parser.next();
    if (ev.type == xml::EventType::Eof) break;
    switch (ev.type) {
      case xml::EventType::StartElement: {
        if (!in_record) {
          auto it = m.record_elements.find(ev.name);
          if (it == m.record_elements.end()) break;
          in_record = true;
          record_element = ev.name;
          rec = {};
          rec.kind = it->second;
          rec.layer = std::string(layer);
          ++position;
          if (!m.id_attribute.empty()) {
            for (const auto& [k, v] : ev.attrs)
              if (k == m.id_attribute) rec.record_id = v;
          }
          if (rec.record_id.empty()) rec.record_id = record_element + "#" + std::to_string(position);
        } else {
          std::string nf = field_for(ev.name);
          if (!nf.empty()) {
            // inline markup (e.g. <i> inside a title) keeps the outer field open
            field = nf;
            field_element = ev.name;
            text.clear();
          }
        }
        break;
      }
      case xml::EventType::Text:
        if (in_record && !field.empty()) text += ev.text;
        break;
      case xml::EventType::EndElement: {
        if (!in_record) break;
        if (ev.name == record_element) {
          in_record = false;
          if (!finalize_record(rec)) {
            ++res.n_malformed;
          } else if (!passes(rec, f)) {
            ++res.n_filtered;
          } else {
            ++res.n_yielded;
            sink(std::move(rec));
          }
        } else if (!field.empty() && ev.name == field_element) {
          std::string value = util::trim(text);
          if (field == "title") rec.title = value;
          else if (field == "author") { if (!value.empty()) rec.authors.push_back(value); }
          else if (field == "year") rec.year = std::atoi(value.c_str());
          else if (field == "venue" && rec.venue.empty()) rec.venue = value;
          field.clear();
        }
        break;
      }
      case xml::EventType::Eof:
        break;
    }
  }
  return res;
}

std::string to_canonical_line(const PublicationRecord& rec) {
  json j = json::object();
  // nlohmann::json orders keys alphabetically, which keeps output canonical
  j["record_id"] = rec.record_id;
  j["title"] = rec.title;
  j["authors"] = rec.authors;
  j["year"] = rec.year;
  j["venue"] = rec.venue;
  j["kind"] = kind_to_string(rec.kind);
  j["layer"] = rec.layer;
  return j.dump();
}

void write_canonical(std::ostream& out, const PublicationRecord& rec) {
  out << to_canonical_line(rec) << '\n';
}

void StatsAccumulator::add(const PublicationRecord& rec) {
  ++stats_.n_papers;
  ++stats_.year_histogram[rec.year];
  for (const auto& a : rec.authors) authors_.insert(a);
}

CorpusStats StatsAccumulator::finish() const {
  CorpusStats s = stats_;
  s.n_distinct_authors = authors_.size();
  return s;
}

}  // namespace semdiff::corpus

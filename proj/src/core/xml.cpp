#include "xml.hpp"

#include <cctype>
#include <cstdlib>

#include "unicode.hpp"
#include "util.hpp"

namespace semdiff::xml {

int PullParser::get() { return in_.get(); }
int PullParser::peek() { return in_.peek(); }

void PullParser::skip_ws() {
  while (std::isspace(peek())) get();
}

bool PullParser::skip_until(std::string_view terminator) {
  size_t matched = 0;
  int c;
  while ((c = get()) != EOF) {
    if (static_cast<char>(c) == terminator[matched]) {
      if (++matched == terminator.size()) return true;
    } else {
      matched = (static_cast<char>(c) == terminator[0]) ? 1 : 0;
    }
  }
  return false;
}

std::string PullParser::read_name() {
  std::string name;
  int c;
  while ((c = peek()) != EOF) {
    if (std::isspace(c) || c == '>' || c == '/' || c == '=') break;
    name.push_back(static_cast<char>(get()));
  }
  return name;
}

void PullParser::decode_entities(std::string& s) {
  if (s.find('&') == std::string::npos) return;
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size();) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    size_t semi = s.find(';', i);
    if (semi == std::string::npos || semi - i > 12) {
      out.push_back(s[i++]);
      continue;
    }
    std::string ent = s.substr(i + 1, semi - i - 1);
    if (ent == "amp") out += '&';
    else if (ent == "lt") out += '<';
    else if (ent == "gt") out += '>';
    else if (ent == "apos") out += '\'';
    else if (ent == "quot") out += '"';
    else if (!ent.empty() && ent[0] == '#') {
      long cp = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                    ? std::strtol(ent.c_str() + 2, nullptr, 16)
                    : std::strtol(ent.c_str() + 1, nullptr, 10);
      if (cp > 0 && cp <= 0x10FFFF)
        out += uni::encode_utf8(std::u32string(1, static_cast<char32_t>(cp)));
    } else {
      // unknown entity, keep verbatim
      out += '&';
      out += ent;
      out += ';';
    }
    i = semi + 1;
  }
  s.swap(out);
}

Event PullParser::next() {
  if (pending_selfclose_) {
    pending_selfclose_ = false;
    Event ev;
    ev.type = EventType::EndElement;
    ev.name = selfclose_name_;
    return ev;
  }
  for (;;) {
    int c = peek();
    if (c == EOF) return {};
    if (c != '<') {
      std::string text;
      while ((c = peek()) != EOF && c != '<') text.push_back(static_cast<char>(get()));
      decode_entities(text);
      if (util::trim(text).empty()) continue;  // inter-element whitespace
      Event ev;
      ev.type = EventType::Text;
      ev.text = std::move(text);
      return ev;
    }
    get();  // '<'
    c = peek();
    if (c == '?') {
      skip_until("?>");
      continue;
    }
    if (c == '!') {
      get();
      if (peek() == '-') {  // comment
        skip_until("-->");
        continue;
      }
      if (peek() == '[') {  // CDATA
        std::string intro;
        for (int i = 0; i < 7 && peek() != EOF; ++i) intro.push_back(static_cast<char>(get()));
        if (intro == "[CDATA[") {
          std::string text;
          size_t matched = 0;
          const char* term = "]]>";
          int ch;
          while ((ch = get()) != EOF) {
            text.push_back(static_cast<char>(ch));
            if (static_cast<char>(ch) == term[matched]) {
              if (++matched == 3) {
                text.resize(text.size() - 3);
                break;
              }
            } else {
              matched = (ch == ']') ? 1 : 0;
            }
          }
          Event ev;
          ev.type = EventType::Text;
          ev.text = std::move(text);
          return ev;
        }
        continue;
      }
      // DOCTYPE; internal subsets with nested brackets are not supported
      int depth = 1;
      int ch;
      while (depth > 0 && (ch = get()) != EOF) {
        if (ch == '<') ++depth;
        else if (ch == '>') --depth;
      }
      continue;
    }
    if (c == '/') {
      get();
      Event ev;
      ev.type = EventType::EndElement;
      ev.name = read_name();
      skip_until(">");
      if (!open_.empty()) open_.pop_back();
      return ev;
    }
    Event ev;
    ev.type = EventType::StartElement;
    ev.name = read_name();
    for (;;) {
      skip_ws();
      int p = peek();
      if (p == EOF) break;
      if (p == '>') {
        get();
        open_.push_back(ev.name);
        break;
      }
      if (p == '/') {
        get();
        skip_until(">");
        pending_selfclose_ = true;
        selfclose_name_ = ev.name;
        break;
      }
      std::string attr_name = read_name();
      skip_ws();
      std::string value;
      if (peek() == '=') {
        get();
        skip_ws();
        int q = peek();
        if (q == '"' || q == '\'') {
          get();
          int ch;
          while ((ch = get()) != EOF && ch != q) value.push_back(static_cast<char>(ch));
        } else {
          while (peek() != EOF && !std::isspace(peek()) && peek() != '>')
            value.push_back(static_cast<char>(get()));
        }
        decode_entities(value);
      }
      if (!attr_name.empty()) ev.attrs.emplace_back(std::move(attr_name), std::move(value));
    }
    return ev;
  }
}

}  // namespace semdiff::xml

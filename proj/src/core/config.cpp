#include "config.hpp"

#include <cctype>
#include <charconv>

#include "util.hpp"

namespace semdiff::config {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(size_t line, const std::string& msg) {
  throw Error("config line " + std::to_string(line) + ": " + msg);
}

std::string strip_comment(std::string_view line) {
  bool in_str = false;
  char quote = 0;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_str) {
      if (c == quote) in_str = false;
    } else if (c == '"' || c == '\'') {
      in_str = true;
      quote = c;
    } else if (c == '#') {
      return std::string(line.substr(0, i));
    }
  }
  return std::string(line);
}

json parse_scalar(std::string_view raw, size_t line) {
  std::string s = util::trim(raw);
  if (s.empty()) fail(line, "missing value");
  if (s.front() == '"' || s.front() == '\'') {
    if (s.size() < 2 || s.back() != s.front()) fail(line, "unterminated string");
    std::string_view body(s.data() + 1, s.size() - 2);
    if (s.front() == '\'') return std::string(body);
    std::string out;
    for (size_t i = 0; i < body.size(); ++i) {
      if (body[i] != '\\') {
        out += body[i];
        continue;
      }
      if (++i >= body.size()) fail(line, "dangling escape");
      switch (body[i]) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(line, "unsupported escape");
      }
    }
    return out;
  }
  if (s == "true") return true;
  if (s == "false") return false;
  // integer, then float
  {
    long long v;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size()) return v;
  }
  {
    double v;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size()) return v;
  }
  fail(line, "cannot parse value: " + s);
}

json parse_value(std::string_view raw, size_t line) {
  std::string s = util::trim(raw);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') fail(line, "unterminated array");
    json arr = json::array();
    std::string_view body(s.data() + 1, s.size() - 2);
    // split on commas outside strings
    size_t start = 0;
    bool in_str = false;
    char quote = 0;
    for (size_t i = 0; i <= body.size(); ++i) {
      if (i < body.size() && in_str) {
        if (body[i] == quote) in_str = false;
        continue;
      }
      if (i < body.size() && (body[i] == '"' || body[i] == '\'')) {
        in_str = true;
        quote = body[i];
        continue;
      }
      if (i == body.size() || body[i] == ',') {
        std::string item = util::trim(body.substr(start, i - start));
        if (!item.empty()) arr.push_back(parse_scalar(item, line));
        start = i + 1;
      }
    }
    return arr;
  }
  return parse_scalar(s, line);
}

json* descend(json& root, const std::string& dotted, size_t line) {
  json* cur = &root;
  for (const std::string& part : util::split(dotted, '.')) {
    std::string key = util::trim(part);
    if (key.empty()) fail(line, "empty key component");
    if (!cur->contains(key)) (*cur)[key] = json::object();
    cur = &(*cur)[key];
  }
  return cur;
}

}  // namespace

json parse_toml(std::string_view text) {
  json root = json::object();
  json* table = &root;
  size_t lineno = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    std::string line = util::trim(strip_comment(text.substr(start, end - start)));
    start = end + 1;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "unterminated table header");
      std::string name = util::trim(std::string_view(line).substr(1, line.size() - 2));
      if (name.empty()) fail(lineno, "empty table name");
      table = descend(root, name, lineno);
      continue;
    }
    size_t eq = std::string::npos;
    {
      bool in_str = false;
      char quote = 0;
      for (size_t i = 0; i < line.size(); ++i) {
        if (in_str) {
          if (line[i] == quote) in_str = false;
        } else if (line[i] == '"' || line[i] == '\'') {
          in_str = true;
          quote = line[i];
        } else if (line[i] == '=') {
          eq = i;
          break;
        }
      }
    }
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    std::string key = util::trim(std::string_view(line).substr(0, eq));
    if (key.size() >= 2 && (key.front() == '"' || key.front() == '\''))
      key = key.substr(1, key.size() - 2);
    if (key.empty()) fail(lineno, "empty key");
    json value = parse_value(std::string_view(line).substr(eq + 1), lineno);
    if (key.find('.') != std::string::npos) {
      size_t dot = key.rfind('.');
      json* t = descend(*table, key.substr(0, dot), lineno);
      (*t)[util::trim(key.substr(dot + 1))] = std::move(value);
    } else {
      (*table)[key] = std::move(value);
    }
  }
  return root;
}

json load_toml_file(const std::string& path) { return parse_toml(util::read_file(path)); }

json merge(json base, const json& overrides) {
  if (!base.is_object() || !overrides.is_object()) return overrides;
  for (const auto& [k, v] : overrides.items()) {
    if (base.contains(k) && base[k].is_object() && v.is_object())
      base[k] = merge(base[k], v);
    else
      base[k] = v;
  }
  return base;
}

}  // namespace semdiff::config

#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace semdiff::xml {

enum class EventType { StartElement, EndElement, Text, Eof };

struct Event {
  EventType type = EventType::Eof;
  std::string name;                                       // element name
  std::vector<std::pair<std::string, std::string>> attrs; // start elements only
  std::string text;                                       // text events only
};

/// Pull parser over a byte stream. Holds no more state than the current
/// event, so arbitrarily large documents can be scanned front to back.
/// Comments, processing instructions, DOCTYPE and CDATA are handled;
/// namespaces are not (names are kept verbatim).
class PullParser {
 public:
  explicit PullParser(std::istream& in) : in_(in) {}

  // Returns the next event; Eof forever once the stream ends.
  Event next();

 private:
  int get();
  int peek();
  bool skip_until(std::string_view terminator);
  std::string read_name();
  void skip_ws();
  static void decode_entities(std::string& s);

  std::istream& in_;
  std::vector<std::string> open_;  // element stack, for implicit end events
  bool pending_selfclose_ = false;
  std::string selfclose_name_;
};

}  // namespace semdiff::xml

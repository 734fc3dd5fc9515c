#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace semdiff::uni {

// Decodes UTF-8, replacing invalid sequences with U+FFFD.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(const std::u32string& s);

// Compatibility normalization (NFKC). Case and diacritics are preserved.
std::string nfkc(std::string_view s);

// Simple per-codepoint lowercase.
std::string to_lower(std::string_view s);

bool is_alnum(char32_t cp);
bool is_space(char32_t cp);

}  // namespace semdiff::uni

#include "unicode.hpp"

#include <algorithm>
#include <cstdint>

namespace semdiff::uni {

namespace {

struct DecompEntry {
  char32_t cp;
  uint16_t offset;
  uint8_t len;
};
struct ComposeEntry {
  char32_t first;
  char32_t second;
  char32_t composed;
};
struct CccEntry {
  char32_t cp;
  uint8_t ccc;
};
struct CaseEntry {
  char32_t cp;
  char32_t lower;
};
struct RangeEntry {
  char32_t lo;
  char32_t hi;
};

#include "unicode_data.inc"

constexpr char32_t kHangulSBase = 0xAC00;
constexpr char32_t kHangulLBase = 0x1100;
constexpr char32_t kHangulVBase = 0x1161;
constexpr char32_t kHangulTBase = 0x11A7;
constexpr int kHangulVCount = 21, kHangulTCount = 28;
constexpr int kHangulNCount = kHangulVCount * kHangulTCount;
constexpr int kHangulSCount = 11172;

const DecompEntry* find_decomp(char32_t cp) {
  auto it = std::lower_bound(std::begin(kDecompIndex), std::end(kDecompIndex), cp,
                             [](const DecompEntry& e, char32_t c) { return e.cp < c; });
  return (it != std::end(kDecompIndex) && it->cp == cp) ? &*it : nullptr;
}

uint8_t combining_class(char32_t cp) {
  auto it = std::lower_bound(std::begin(kCombiningClass), std::end(kCombiningClass), cp,
                             [](const CccEntry& e, char32_t c) { return e.cp < c; });
  return (it != std::end(kCombiningClass) && it->cp == cp) ? it->ccc : 0;
}

char32_t compose_pair(char32_t a, char32_t b) {
  if (a >= kHangulLBase && a < kHangulLBase + 19 && b >= kHangulVBase &&
      b < kHangulVBase + kHangulVCount) {
    return kHangulSBase + ((a - kHangulLBase) * kHangulVCount + (b - kHangulVBase)) * kHangulTCount;
  }
  if (a >= kHangulSBase && a < kHangulSBase + kHangulSCount && (a - kHangulSBase) % kHangulTCount == 0 &&
      b > kHangulTBase && b < kHangulTBase + kHangulTCount) {
    return a + (b - kHangulTBase);
  }
  auto it = std::lower_bound(std::begin(kComposePairs), std::end(kComposePairs),
                             std::pair<char32_t, char32_t>{a, b},
                             [](const ComposeEntry& e, const std::pair<char32_t, char32_t>& k) {
                               return e.first != k.first ? e.first < k.first : e.second < k.second;
                             });
  return (it != std::end(kComposePairs) && it->first == a && it->second == b) ? it->composed : 0;
}

void decompose_into(char32_t cp, std::u32string& out) {
  if (cp >= kHangulSBase && cp < kHangulSBase + kHangulSCount) {
    char32_t s = cp - kHangulSBase;
    out.push_back(kHangulLBase + s / kHangulNCount);
    out.push_back(kHangulVBase + (s % kHangulNCount) / kHangulTCount);
    if (s % kHangulTCount) out.push_back(kHangulTBase + s % kHangulTCount);
    return;
  }
  if (const DecompEntry* e = find_decomp(cp)) {
    // the table stores fully recursive NFKD expansions
    for (int i = 0; i < e->len; ++i) out.push_back(kDecompFlat[e->offset + i]);
    return;
  }
  out.push_back(cp);
}

}  // namespace

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    uint8_t b0 = static_cast<uint8_t>(s[i]);
    char32_t cp = 0xFFFD;
    size_t len = 1;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 >> 5) == 0x6 && i + 1 < s.size()) {
      len = 2;
      cp = (b0 & 0x1F) << 6 | (s[i + 1] & 0x3F);
      if (cp < 0x80 || (s[i + 1] & 0xC0) != 0x80) cp = 0xFFFD;
    } else if ((b0 >> 4) == 0xE && i + 2 < s.size()) {
      len = 3;
      cp = (b0 & 0x0F) << 12 | (s[i + 1] & 0x3F) << 6 | (s[i + 2] & 0x3F);
      if (cp < 0x800 || (s[i + 1] & 0xC0) != 0x80 || (s[i + 2] & 0xC0) != 0x80) cp = 0xFFFD;
    } else if ((b0 >> 3) == 0x1E && i + 3 < s.size()) {
      len = 4;
      cp = (b0 & 0x07) << 18 | (s[i + 1] & 0x3F) << 12 | (s[i + 2] & 0x3F) << 6 | (s[i + 3] & 0x3F);
      if (cp < 0x10000 || cp > 0x10FFFF || (s[i + 1] & 0xC0) != 0x80 ||
          (s[i + 2] & 0xC0) != 0x80 || (s[i + 3] & 0xC0) != 0x80)
        cp = 0xFFFD;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string encode_utf8(const std::u32string& s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

std::string nfkc(std::string_view s) {
  std::u32string cps = decode_utf8(s);

  std::u32string dec;
  dec.reserve(cps.size());
  for (char32_t cp : cps) decompose_into(cp, dec);

  // canonical ordering of combining marks (stable bubble over nonzero-ccc runs)
  for (size_t i = 1; i < dec.size(); ++i) {
    uint8_t cc = combining_class(dec[i]);
    if (cc == 0) continue;
    size_t j = i;
    while (j > 0 && combining_class(dec[j - 1]) > cc) {
      std::swap(dec[j - 1], dec[j]);
      --j;
    }
  }

  // canonical composition
  std::u32string out;
  out.reserve(dec.size());
  ptrdiff_t last_starter = -1;
  uint8_t prev_cc = 0;
  for (char32_t cp : dec) {
    uint8_t cc = combining_class(cp);
    if (last_starter >= 0 && (prev_cc < cc || prev_cc == 0)) {
      if (char32_t comp = compose_pair(out[last_starter], cp); comp != 0) {
        out[last_starter] = comp;
        continue;
      }
    }
    if (cc == 0) {
      last_starter = static_cast<ptrdiff_t>(out.size());
      prev_cc = 0;
    } else {
      prev_cc = cc;
    }
    out.push_back(cp);
  }
  return encode_utf8(out);
}

std::string to_lower(std::string_view s) {
  std::u32string cps = decode_utf8(s);
  for (char32_t& cp : cps) {
    auto it = std::lower_bound(std::begin(kLowercase), std::end(kLowercase), cp,
                               [](const CaseEntry& e, char32_t c) { return e.cp < c; });
    if (it != std::end(kLowercase) && it->cp == cp) cp = it->lower;
  }
  return encode_utf8(cps);
}

bool is_alnum(char32_t cp) {
  auto it = std::upper_bound(std::begin(kAlnumRanges), std::end(kAlnumRanges), cp,
                             [](char32_t c, const RangeEntry& e) { return c < e.lo; });
  return it != std::begin(kAlnumRanges) && cp <= (it - 1)->hi;
}

bool is_space(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

}  // namespace semdiff::uni

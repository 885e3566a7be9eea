#include "korpus/corpus_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace korpus {

bool geo_point_valid(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon >= -180.0 && p.lon <= 180.0;
}

std::string_view to_string(CascadeLabel label) {
  switch (label) {
    case CascadeLabel::Foreign: return "foreign";
    case CascadeLabel::FormalIndonesian: return "formal";
    case CascadeLabel::Informal: return "informal";
  }
  return "informal";
}

std::optional<CascadeLabel> cascade_label_from_string(std::string_view s) {
  if (s == "foreign") return CascadeLabel::Foreign;
  if (s == "formal") return CascadeLabel::FormalIndonesian;
  if (s == "informal") return CascadeLabel::Informal;
  return std::nullopt;
}

const std::vector<std::string>& language_registry() {
  static const std::vector<std::string> registry = {
      // Indonesian and the ten most widely spoken local languages
      "ind", "jav", "sun", "mad", "min", "bug", "bew", "ace", "bjn", "ban", "mus",
      // the filtered foreign languages
      "eng", "jpn", "kor", "ara",
      // catch-all
      "other"};
  return registry;
}

bool is_registered_language(std::string_view code) {
  const auto& reg = language_registry();
  return std::find(reg.begin(), reg.end(), code) != reg.end();
}

bool is_foreign_language(std::string_view code) {
  return code == "eng" || code == "jpn" || code == "kor" || code == "ara";
}

// ---------------------------------------------------------------------------
// UTF-8

namespace {

char32_t decode_cp(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = b0 >= 0xF0 ? 4 : b0 >= 0xE0 ? 3 : b0 >= 0xC0 ? 2 : 0;
  if (len == 0 || i + static_cast<std::size_t>(len) > s.size()) {
    ++i;
    return 0xFFFD;
  }
  char32_t cp = b0 & (0xFFu >> (len + 1));
  for (int k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += static_cast<std::size_t>(len);
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0xFFFD;
  // overlong encodings
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) return 0xFFFD;
  return cp;
}

bool is_space_cp(char32_t c) {
  switch (c) {
    case U' ':
    case U'\t':
    case U'\n':
    case U'\r':
    case 0x0B:
    case 0x0C:
    case 0x00A0:  // no-break space
    case 0x2028:
    case 0x2029:
    case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

// Simple lowercase over ASCII, Latin-1 Supplement and Latin Extended-A.
char32_t to_lower_cp(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  if (c == 0x0130) return U'i';   // dotted capital I
  if (c == 0x0178) return 0xFF;   // Y with diaeresis
  if (c >= 0x0100 && c <= 0x0137 && c % 2 == 0) return c + 1;
  if (c >= 0x0139 && c <= 0x0148 && c % 2 == 1) return c + 1;
  if (c >= 0x014A && c <= 0x0177 && c % 2 == 0) return c + 1;
  if (c >= 0x0179 && c <= 0x017E && c % 2 == 1) return c + 1;
  return c;
}

// Canonical composition of a lowercase Latin base with a combining mark;
// returns 0 when no precomposed form is covered.
char32_t compose_latin(char32_t base, char32_t mark) {
  switch (mark) {
    case 0x0300:  // grave
      switch (base) {
        case U'a': return 0xE0;
        case U'e': return 0xE8;
        case U'i': return 0xEC;
        case U'o': return 0xF2;
        case U'u': return 0xF9;
      }
      break;
    case 0x0301:  // acute
      switch (base) {
        case U'a': return 0xE1;
        case U'c': return 0x107;
        case U'e': return 0xE9;
        case U'i': return 0xED;
        case U'o': return 0xF3;
        case U'u': return 0xFA;
        case U'y': return 0xFD;
      }
      break;
    case 0x0302:  // circumflex
      switch (base) {
        case U'a': return 0xE2;
        case U'e': return 0xEA;
        case U'i': return 0xEE;
        case U'o': return 0xF4;
        case U'u': return 0xFB;
      }
      break;
    case 0x0303:  // tilde
      switch (base) {
        case U'a': return 0xE3;
        case U'n': return 0xF1;
        case U'o': return 0xF5;
      }
      break;
    case 0x0308:  // diaeresis
      switch (base) {
        case U'a': return 0xE4;
        case U'e': return 0xEB;
        case U'i': return 0xEF;
        case U'o': return 0xF6;
        case U'u': return 0xFC;
        case U'y': return 0xFF;
      }
      break;
    case 0x030A:  // ring above
      if (base == U'a') return 0xE5;
      break;
    case 0x0327:  // cedilla
      if (base == U'c') return 0xE7;
      break;
  }
  return 0;
}

void fold_cps(const char32_t* cps, std::size_t n, std::string& out) {
  std::size_t k = 0;
  while (k < n) {
    char32_t c = to_lower_cp(cps[k]);
    if (k + 1 < n) {
      if (char32_t composed = compose_latin(c, cps[k + 1]); composed != 0) {
        utf8_encode(composed, out);
        k += 2;
        continue;
      }
    }
    utf8_encode(c, out);
    ++k;
  }
}

bool is_word_cp(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9') || c == U'_';
}

bool ascii_iequal(char32_t a, char b) {
  char32_t lb = static_cast<char32_t>(b);
  return a == lb || to_lower_cp(a) == lb;
}

bool token_has_url_scheme(const char32_t* tok, std::size_t n) {
  static constexpr std::string_view kHttp = "http://";
  static constexpr std::string_view kHttps = "https://";
  for (std::string_view scheme : {kHttps, kHttp}) {
    if (n < scheme.size()) continue;
    bool match = true;
    for (std::size_t k = 0; k < scheme.size(); ++k) {
      if (!ascii_iequal(tok[k], scheme[k])) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

constexpr std::string_view kUrlToken = "HTTPURL";
constexpr std::string_view kMentionToken = "@USER";

bool is_url_sentinel(const char32_t* tok, std::size_t n) {
  if (n != kUrlToken.size()) return false;
  for (std::size_t k = 0; k < n; ++k) {
    if (tok[k] != static_cast<char32_t>(kUrlToken[k])) return false;
  }
  return true;
}

void append_token(const char32_t* tok, std::size_t n, std::string& out) {
  if (is_url_sentinel(tok, n) || token_has_url_scheme(tok, n)) {
    out += kUrlToken;
    return;
  }
  if (n >= 2 && tok[0] == U'@') {
    bool mention = true;
    for (std::size_t k = 1; k < n; ++k) {
      if (!is_word_cp(tok[k])) {
        mention = false;
        break;
      }
    }
    if (mention) {
      out += kMentionToken;
      return;
    }
  }
  fold_cps(tok, n, out);
}

}  // namespace

std::vector<char32_t> utf8_decode(std::string_view s) {
  std::vector<char32_t> cps;
  cps.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) cps.push_back(decode_cp(s, i));
  return cps;
}

void utf8_encode(char32_t cp, std::string& out) {
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

std::string utf8_fold_lower(std::string_view s) {
  const std::vector<char32_t> cps = utf8_decode(s);
  std::string out;
  out.reserve(s.size());
  fold_cps(cps.data(), cps.size(), out);
  return out;
}

std::string normalize_text(std::string_view raw) {
  const std::vector<char32_t> cps = utf8_decode(raw);
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  bool first = true;
  while (i < cps.size()) {
    while (i < cps.size() && is_space_cp(cps[i])) ++i;
    if (i >= cps.size()) break;
    std::size_t j = i;
    while (j < cps.size() && !is_space_cp(cps[j])) ++j;
    if (!first) out.push_back(' ');
    first = false;
    append_token(cps.data() + i, j - i, out);
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Timestamps

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date (Hinnant's algorithm).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

bool parse_uint(std::string_view s, std::size_t& i, int digits, int& out) {
  if (i + static_cast<std::size_t>(digits) > s.size()) return false;
  int v = 0;
  for (int k = 0; k < digits; ++k) {
    char c = s[i + static_cast<std::size_t>(k)];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  i += static_cast<std::size_t>(digits);
  out = v;
  return true;
}

unsigned days_in_month(std::int64_t y, int m) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2) {
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
  }
  return kDays[m - 1];
}

}  // namespace

std::optional<std::int64_t> parse_iso8601_utc(std::string_view s) {
  std::size_t i = 0;
  int year, month, day, hour, minute, second;
  if (!parse_uint(s, i, 4, year)) return std::nullopt;
  if (i >= s.size() || s[i] != '-') return std::nullopt;
  ++i;
  if (!parse_uint(s, i, 2, month)) return std::nullopt;
  if (i >= s.size() || s[i] != '-') return std::nullopt;
  ++i;
  if (!parse_uint(s, i, 2, day)) return std::nullopt;
  if (i >= s.size() || (s[i] != 'T' && s[i] != 't' && s[i] != ' ')) return std::nullopt;
  ++i;
  if (!parse_uint(s, i, 2, hour)) return std::nullopt;
  if (i >= s.size() || s[i] != ':') return std::nullopt;
  ++i;
  if (!parse_uint(s, i, 2, minute)) return std::nullopt;
  if (i >= s.size() || s[i] != ':') return std::nullopt;
  ++i;
  if (!parse_uint(s, i, 2, second)) return std::nullopt;
  if (month < 1 || month > 12 || day < 1 ||
      static_cast<unsigned>(day) > days_in_month(year, month) || hour > 23 || minute > 59 ||
      second > 59) {
    return std::nullopt;
  }
  // fractional seconds are accepted and truncated
  if (i < s.size() && s[i] == '.') {
    ++i;
    std::size_t start = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (i == start) return std::nullopt;
  }
  std::int64_t offset = 0;
  if (i < s.size()) {
    char c = s[i];
    if (c == 'Z' || c == 'z') {
      ++i;
    } else if (c == '+' || c == '-') {
      ++i;
      int oh, om = 0;
      if (!parse_uint(s, i, 2, oh)) return std::nullopt;
      if (i < s.size() && s[i] == ':') ++i;
      if (i < s.size() && s[i] >= '0' && s[i] <= '9' && !parse_uint(s, i, 2, om)) return std::nullopt;
      if (oh > 23 || om > 59) return std::nullopt;
      offset = static_cast<std::int64_t>(oh) * 3600 + om * 60;
      if (c == '-') offset = -offset;
    } else {
      return std::nullopt;
    }
  }
  if (i != s.size()) return std::nullopt;
  const std::int64_t days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

std::string format_iso8601_utc(std::int64_t epoch_seconds) {
  std::int64_t days = epoch_seconds / 86400;
  std::int64_t rem = epoch_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60), static_cast<long long>(rem % 60));
  return buf;
}

}  // namespace korpus

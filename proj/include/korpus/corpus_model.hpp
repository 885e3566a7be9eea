#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace korpus {

struct GeoPoint {
  double lat = 0.0;  // decimal degrees, [-90, 90]
  double lon = 0.0;  // decimal degrees, [-180, 180]
};

bool geo_point_valid(const GeoPoint& p);

/// The three-way partition every record ends up in: foreign language,
/// formal Indonesian, or the informal remainder (negative detection).
enum class CascadeLabel { Foreign, FormalIndonesian, Informal };

std::string_view to_string(CascadeLabel label);
std::optional<CascadeLabel> cascade_label_from_string(std::string_view s);

/// Closed ISO 639-3 registry: Indonesian plus the ten most widely spoken
/// local languages, the four filtered foreign languages, and a catch-all.
const std::vector<std::string>& language_registry();
bool is_registered_language(std::string_view code);
bool is_foreign_language(std::string_view code);  // eng, jpn, kor, ara

/// One ingested post. Immutable by convention after construction;
/// text_norm is always normalize_text(text_raw), and city is only
/// ever set on records that carry geo coordinates.
struct TweetRecord {
  std::string id;
  std::string text_raw;
  std::string text_norm;
  std::optional<std::int64_t> created_at;  // seconds since Unix epoch, UTC
  std::optional<GeoPoint> geo;
  std::optional<std::string> city;
};

/// Deterministic tweet-text normalization:
///   - whitespace runs collapse to single spaces, ends trimmed
///   - tokens starting with http:// or https:// become HTTPURL
///   - @mention tokens (@ followed by word characters) become @USER
///   - everything else is lowercased and canonically composed
///
/// The two substitution tokens are case-sensitive sentinels exempt from
/// lowercasing, which makes the function idempotent. Case mapping and
/// composition cover the Latin range (ASCII, Latin-1, Latin Extended-A);
/// other scripts pass through untouched. Total: never throws.
std::string normalize_text(std::string_view raw);

/// Lowercase + compose a UTF-8 string without any token handling.
/// Shared by normalize_text and the wordlist variant folding.
std::string utf8_fold_lower(std::string_view s);

/// Decoded code points; invalid bytes become U+FFFD.
std::vector<char32_t> utf8_decode(std::string_view s);
void utf8_encode(char32_t cp, std::string& out);

/// ISO-8601 timestamp ("2019-01-01T00:00:00Z", space separator, optional
/// fractional seconds, Z or numeric offset). nullopt if unparseable.
std::optional<std::int64_t> parse_iso8601_utc(std::string_view s);
std::string format_iso8601_utc(std::int64_t epoch_seconds);

}  // namespace korpus

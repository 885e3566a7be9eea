#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "korpus/corpus_model.hpp"

namespace korpus {

enum class RejectReason { MalformedJson, MissingField, GeoOutOfRange };

std::string_view to_string(RejectReason reason);

struct IngestReport {
  std::uint64_t lines_read = 0;
  std::uint64_t records_ok = 0;
  std::uint64_t records_rejected = 0;
  std::map<std::string, std::uint64_t> rejection_reasons;

  void count_rejection(RejectReason reason);
};

/// Parse one JSONL line into a record. Accepted fields: id (string or
/// integer), text, created_at, lat, lon, city. geo is set only when both
/// coordinates are present and in range; a coordinate pair outside the
/// valid intervals rejects the whole line. city is kept only alongside geo.
std::variant<TweetRecord, RejectReason> parse_tweet_line(std::string_view line);

/// Stream a JSONL file through `sink` in file order. Bad lines are counted
/// per reason and skipped, never fatal; blank lines are ignored entirely.
/// Throws Error(IoError) if the file cannot be opened.
IngestReport ingest_file(const std::string& path, const std::function<void(TweetRecord&&)>& sink);

std::pair<std::vector<TweetRecord>, IngestReport> read_records(const std::string& path);

/// Canonical serialized form. Re-ingesting this line reproduces the record.
std::string record_to_json_line(const TweetRecord& record);

std::string report_to_json(const IngestReport& report);

}  // namespace korpus

#include "korpus/ingest.hpp"

#include <fstream>

#include "json.hpp"
#include "korpus/error.hpp"

namespace korpus {

namespace {
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
}  // namespace

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::MalformedJson: return "MalformedJson";
    case RejectReason::MissingField: return "MissingField";
    case RejectReason::GeoOutOfRange: return "GeoOutOfRange";
  }
  return "MalformedJson";
}

void IngestReport::count_rejection(RejectReason reason) {
  ++records_rejected;
  ++rejection_reasons[std::string(to_string(reason))];
}

std::variant<TweetRecord, RejectReason> parse_tweet_line(std::string_view line) {
  const json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return RejectReason::MalformedJson;

  std::string id;
  if (auto it = j.find("id"); it != j.end()) {
    if (it->is_string()) {
      id = it->get<std::string>();
    } else if (it->is_number_unsigned()) {
      id = std::to_string(it->get<std::uint64_t>());
    } else if (it->is_number_integer()) {
      id = std::to_string(it->get<std::int64_t>());
    }
  }
  if (id.empty()) return RejectReason::MissingField;

  const auto text_it = j.find("text");
  if (text_it == j.end() || !text_it->is_string()) return RejectReason::MissingField;

  TweetRecord record;
  record.id = std::move(id);
  record.text_raw = text_it->get<std::string>();
  record.text_norm = normalize_text(record.text_raw);

  if (auto it = j.find("created_at"); it != j.end() && it->is_string()) {
    record.created_at = parse_iso8601_utc(it->get<std::string>());
  }

  const auto lat_it = j.find("lat");
  const auto lon_it = j.find("lon");
  const bool has_lat = lat_it != j.end() && lat_it->is_number();
  const bool has_lon = lon_it != j.end() && lon_it->is_number();
  if (has_lat && has_lon) {
    GeoPoint p{lat_it->get<double>(), lon_it->get<double>()};
    if (!geo_point_valid(p)) return RejectReason::GeoOutOfRange;
    record.geo = p;
    if (auto it = j.find("city"); it != j.end() && it->is_string()) {
      std::string city = it->get<std::string>();
      if (!city.empty()) record.city = std::move(city);
    }
  }
  return record;
}

IngestReport ingest_file(const std::string& path, const std::function<void(TweetRecord&&)>& sink) {
  std::ifstream in(path);
  if (!in) raise(Errc::IoError, "cannot open " + path);
  IngestReport report;
  std::string line;
  while (std::getline(in, line)) {
    bool blank = true;
    for (char c : line) {
      if (c != ' ' && c != '\t' && c != '\r') {
        blank = false;
        break;
      }
    }
    if (blank) continue;
    ++report.lines_read;
    auto parsed = parse_tweet_line(line);
    if (std::holds_alternative<TweetRecord>(parsed)) {
      ++report.records_ok;
      sink(std::move(std::get<TweetRecord>(parsed)));
    } else {
      report.count_rejection(std::get<RejectReason>(parsed));
    }
  }
  return report;
}

std::pair<std::vector<TweetRecord>, IngestReport> read_records(const std::string& path) {
  std::vector<TweetRecord> records;
  IngestReport report = ingest_file(path, [&](TweetRecord&& r) { records.push_back(std::move(r)); });
  return {std::move(records), report};
}

std::string record_to_json_line(const TweetRecord& record) {
  ordered_json j;
  j["id"] = record.id;
  j["text"] = record.text_raw;
  if (record.created_at) j["created_at"] = format_iso8601_utc(*record.created_at);
  if (record.geo) {
    j["lat"] = record.geo->lat;
    j["lon"] = record.geo->lon;
  }
  if (record.city) j["city"] = *record.city;
  return j.dump();
}

std::string report_to_json(const IngestReport& report) {
  ordered_json j;
  j["lines_read"] = report.lines_read;
  j["records_ok"] = report.records_ok;
  j["records_rejected"] = report.records_rejected;
  j["rejection_reasons"] = ordered_json::object();
  for (const auto& [reason, count] : report.rejection_reasons) {
    j["rejection_reasons"][reason] = count;
  }
  return j.dump();
}

}  // namespace korpus

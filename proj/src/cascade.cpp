#include "korpus/cascade.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <thread>

#include "json.hpp"
#include "korpus/csv.hpp"
#include "korpus/error.hpp"
#include "korpus/eval_metrics.hpp"

namespace korpus {

CascadeOutcome run_cascade(std::span<const TweetRecord> records, const ForeignFn& foreign_fn,
                           const FormalFn& formal_fn, const EmbeddingLookupFn& embedding_of,
                           int jobs) {
  CascadeOutcome outcome;
  outcome.labels.resize(records.size());

  const auto label_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const TweetRecord& record = records[i];
      if (foreign_fn(record)) {
        outcome.labels[i] = CascadeLabel::Foreign;
        continue;
      }
      const auto embedding = embedding_of(record.id);
      if (!embedding) {
        outcome.labels[i] = std::nullopt;  // quarantined
        continue;
      }
      outcome.labels[i] = formal_fn(record, *embedding) ? CascadeLabel::FormalIndonesian
                                                        : CascadeLabel::Informal;
    }
  };

  const std::size_t n = records.size();
  if (jobs <= 1 || n < 2) {
    label_range(0, n);
  } else {
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(lo + chunk, n);
      if (lo >= hi) break;
      threads.emplace_back(label_range, lo, hi);
    }
    for (auto& t : threads) t.join();
  }

  for (const auto& label : outcome.labels) {
    if (!label) {
      ++outcome.quarantined;
    } else if (*label == CascadeLabel::Foreign) {
      ++outcome.foreign;
    } else if (*label == CascadeLabel::FormalIndonesian) {
      ++outcome.formal;
    } else {
      ++outcome.informal;
    }
  }
  return outcome;
}

CascadeOutcome run_cascade(std::span<const TweetRecord> records, const NgramLinearModel& langid_model,
                           double foreign_threshold, const FormalityHead& head,
                           const EmbeddingLookupFn& embedding_of, int jobs) {
  const ForeignFn foreign_fn = [&](const TweetRecord& record) {
    return is_foreign(langid_model, record.text_norm, foreign_threshold);
  };
  const FormalFn formal_fn = [&](const TweetRecord&, std::span<const float> embedding) {
    return classify_formality(head, embedding).label == FormalityLabel::Formal;
  };
  return run_cascade(records, foreign_fn, formal_fn, embedding_of, jobs);
}

bool tabulation_identities_hold(const CityTabulation& row) {
  return row.raw == row.foreign + row.indonesian && row.indonesian == row.formal + row.colloquial_local;
}

void CityTabulator::add(const std::optional<std::string>& city, CascadeLabel label) {
  Counts& counts = by_city_[city ? *city : std::string(kUnassignedCity)];
  ++counts.raw;
  switch (label) {
    case CascadeLabel::Foreign: ++counts.foreign; break;
    case CascadeLabel::FormalIndonesian: ++counts.formal; break;
    case CascadeLabel::Informal: ++counts.colloquial; break;
  }
}

void CityTabulator::merge(const CityTabulator& other) {
  for (const auto& [city, counts] : other.by_city_) {
    Counts& mine = by_city_[city];
    mine.raw += counts.raw;
    mine.foreign += counts.foreign;
    mine.formal += counts.formal;
    mine.colloquial += counts.colloquial;
  }
}

std::vector<CityTabulation> CityTabulator::rows(const CityRegistry* registry) const {
  std::vector<CityTabulation> rows;
  rows.reserve(by_city_.size());
  for (const auto& [city, counts] : by_city_) {
    CityTabulation row;
    row.city = city;
    row.raw = counts.raw;
    row.foreign = counts.foreign;
    row.indonesian = counts.raw - counts.foreign;
    row.formal = counts.formal;
    row.colloquial_local = counts.colloquial;
    if (registry != nullptr) {
      if (const CityRegion* region = find_city(*registry, city)) row.anchor = region->anchor;
    }
    rows.push_back(std::move(row));
  }
  // map order is already lexicographic; UNASSIGNED goes last
  std::stable_partition(rows.begin(), rows.end(),
                        [](const CityTabulation& r) { return r.city != kUnassignedCity; });
  return rows;
}

std::vector<CityTabulation> tabulate_by_city(std::span<const TweetRecord> records,
                                             std::span<const CascadeLabel> labels,
                                             const CityRegistry* registry) {
  if (records.size() != labels.size()) {
    raise(Errc::DimensionMismatch, "records and labels differ in length");
  }
  CityTabulator tabulator;
  for (std::size_t i = 0; i < records.size(); ++i) tabulator.add(records[i].city, labels[i]);
  return tabulator.rows(registry);
}

CityTabulation tabulation_totals(std::span<const CityTabulation> rows) {
  CityTabulation total;
  total.city = kTotalsCity;
  for (const CityTabulation& row : rows) {
    total.raw += row.raw;
    total.foreign += row.foreign;
    total.indonesian += row.indonesian;
    total.formal += row.formal;
    total.colloquial_local += row.colloquial_local;
  }
  return total;
}

CorpusStatistics summarize_statistics(std::uint64_t total, std::uint64_t foreign,
                                      std::uint64_t formal, std::uint64_t informal) {
  if (total == 0) raise(Errc::EmptyInput, "cannot summarize an empty corpus");
  CorpusStatistics stats;
  stats.total = total;
  const double denom = static_cast<double>(total);
  stats.foreign_pct = 100.0 * static_cast<double>(foreign) / denom;
  stats.formal_pct = 100.0 * static_cast<double>(formal) / denom;
  stats.informal_pct = 100.0 * static_cast<double>(informal) / denom;
  stats.filtered_pct = stats.foreign_pct + stats.formal_pct;
  return stats;
}

CorpusStatistics summarize_statistics(std::span<const CityTabulation> tabulations) {
  if (tabulations.empty()) raise(Errc::EmptyInput, "no tabulation rows");
  const CityTabulation totals = tabulation_totals(tabulations);
  return summarize_statistics(totals.raw, totals.foreign, totals.formal, totals.colloquial_local);
}

std::string statistics_to_json(const CorpusStatistics& stats) {
  nlohmann::ordered_json j;
  j["total"] = stats.total;
  j["foreign_pct"] = round_half_up(stats.foreign_pct, 1);
  j["formal_pct"] = round_half_up(stats.formal_pct, 1);
  j["informal_pct"] = round_half_up(stats.informal_pct, 1);
  j["filtered_pct"] = round_half_up(stats.filtered_pct, 1);
  return j.dump();
}

namespace {

std::string format_coord(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

void write_tabulation_csv(std::ostream& out, std::span<const CityTabulation> rows, bool totals_row) {
  out << "city,lat,lon,raw,foreign,indonesian,formal,colloquial_local\n";
  const auto write_row = [&out](const CityTabulation& row) {
    out << csv_escape(row.city) << ',';
    if (row.anchor) out << format_coord(row.anchor->lat) << ',' << format_coord(row.anchor->lon);
    else out << ',';
    out << ',' << row.raw << ',' << row.foreign << ',' << row.indonesian << ',' << row.formal << ','
        << row.colloquial_local << '\n';
  };
  for (const CityTabulation& row : rows) write_row(row);
  if (totals_row) write_row(tabulation_totals(rows));
}

std::vector<CityTabulation> read_tabulation_csv(const std::string& path) {
  const auto rows = read_csv(path);
  if (rows.empty()) raise(Errc::FormatError, path + ": empty tabulation file");
  const auto& header = rows.front();
  if (header.size() < 8 || trim(header[0]) != "city" || trim(header[3]) != "raw") {
    raise(Errc::FormatError,
          path + ": expected header city,lat,lon,raw,foreign,indonesian,formal,colloquial_local");
  }
  std::vector<CityTabulation> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() < 8) raise(Errc::FormatError, path + ": short row " + std::to_string(r + 1));
    CityTabulation tab;
    tab.city = trim(row[0]);
    if (tab.city == kTotalsCity) continue;  // presentation row, not data
    try {
      const std::string lat = trim(row[1]), lon = trim(row[2]);
      if (!lat.empty() && !lon.empty()) tab.anchor = GeoPoint{std::stod(lat), std::stod(lon)};
      tab.raw = std::stoull(trim(row[3]));
      tab.foreign = std::stoull(trim(row[4]));
      tab.indonesian = std::stoull(trim(row[5]));
      tab.formal = std::stoull(trim(row[6]));
      tab.colloquial_local = std::stoull(trim(row[7]));
    } catch (const std::exception&) {
      raise(Errc::FormatError, path + ": bad numeric field in row " + std::to_string(r + 1));
    }
    out.push_back(std::move(tab));
  }
  return out;
}

}  // namespace korpus

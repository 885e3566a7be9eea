#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "korpus/corpus_model.hpp"
#include "korpus/formality.hpp"
#include "korpus/geotag.hpp"
#include "korpus/langid.hpp"

namespace korpus {

using ForeignFn = std::function<bool(const TweetRecord&)>;
using FormalFn = std::function<bool(const TweetRecord&, std::span<const float>)>;
using EmbeddingLookupFn = std::function<std::optional<std::vector<float>>(const std::string& id)>;

/// Labels aligned with the input records; nullopt marks a record that
/// passed the foreign filter but had no embedding (quarantined, counted,
/// never fatal). foreign + formal + informal + quarantined = input size.
struct CascadeOutcome {
  std::vector<std::optional<CascadeLabel>> labels;
  std::uint64_t foreign = 0;
  std::uint64_t formal = 0;
  std::uint64_t informal = 0;
  std::uint64_t quarantined = 0;
};

/// Negative detection over the stream: Foreign short-circuits (the
/// formality stage is never consulted), then FormalIndonesian, and the
/// remainder is Informal. Order-preserving; records are independent, so
/// jobs > 1 splits the input into contiguous chunks with identical
/// results. The callbacks are invoked concurrently when jobs > 1 and
/// must be reentrant.
CascadeOutcome run_cascade(std::span<const TweetRecord> records, const ForeignFn& foreign_fn,
                           const FormalFn& formal_fn, const EmbeddingLookupFn& embedding_of,
                           int jobs = 1);

/// Same, wired to trained models.
CascadeOutcome run_cascade(std::span<const TweetRecord> records, const NgramLinearModel& langid_model,
                           double foreign_threshold, const FormalityHead& head,
                           const EmbeddingLookupFn& embedding_of, int jobs = 1);

inline constexpr const char* kUnassignedCity = "UNASSIGNED";
inline constexpr const char* kTotalsCity = "TOTAL";

struct CityTabulation {
  std::string city;
  std::optional<GeoPoint> anchor;
  std::uint64_t raw = 0;
  std::uint64_t foreign = 0;
  std::uint64_t indonesian = 0;
  std::uint64_t formal = 0;
  std::uint64_t colloquial_local = 0;
};

/// raw = foreign + indonesian and indonesian = formal + colloquial_local.
bool tabulation_identities_hold(const CityTabulation& row);

/// Associative per-city counter; workers can tabulate chunks and merge.
class CityTabulator {
 public:
  void add(const std::optional<std::string>& city, CascadeLabel label);
  void merge(const CityTabulator& other);

  /// Rows sorted by city name, UNASSIGNED last. Anchors joined from the
  /// registry when one is given.
  std::vector<CityTabulation> rows(const CityRegistry* registry = nullptr) const;

 private:
  struct Counts {
    std::uint64_t raw = 0, foreign = 0, formal = 0, colloquial = 0;
  };
  std::map<std::string, Counts> by_city_;
};

std::vector<CityTabulation> tabulate_by_city(std::span<const TweetRecord> records,
                                             std::span<const CascadeLabel> labels,
                                             const CityRegistry* registry = nullptr);

CityTabulation tabulation_totals(std::span<const CityTabulation> rows);

struct CorpusStatistics {
  std::uint64_t total = 0;
  // Exact percentages; presentation rounds half-up to one decimal,
  // and filtered_pct = foreign_pct + formal_pct by construction.
  double foreign_pct = 0.0;
  double formal_pct = 0.0;
  double informal_pct = 0.0;
  double filtered_pct = 0.0;
};

CorpusStatistics summarize_statistics(std::uint64_t total, std::uint64_t foreign,
                                      std::uint64_t formal, std::uint64_t informal);
CorpusStatistics summarize_statistics(std::span<const CityTabulation> tabulations);

std::string statistics_to_json(const CorpusStatistics& stats);

// Tabulation CSV, header `city,lat,lon,raw,foreign,indonesian,formal,
// colloquial_local`, column order matching the bundled fixture. Reading
// skips any TOTAL presentation row so emitted files round-trip as data.
void write_tabulation_csv(std::ostream& out, std::span<const CityTabulation> rows,
                          bool totals_row = false);
std::vector<CityTabulation> read_tabulation_csv(const std::string& path);

}  // namespace korpus

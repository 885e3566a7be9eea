#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "korpus/corpus_model.hpp"
#include "korpus/eval_metrics.hpp"
#include "korpus/langid.hpp"

namespace korpus {

/// The n-gram classifier with city names as its label set.
struct RegionModel {
  NgramLinearModel model;
};

struct RegionTrainOptions {
  NgramConfig config;
  int epochs = 5;
  double lr = 2.0;
  std::uint64_t seed = 42;
  /// Weight each city's samples by total/(cities * count). Off by default:
  /// imbalance is reported, never silently rebalanced.
  bool inverse_frequency_weights = false;
};

struct RegionTrainResult {
  RegionModel model;
  std::vector<double> epoch_loss;
  std::map<std::string, std::uint64_t> city_counts;  // training-set imbalance, as observed
};

/// Trains on informal records only, supervised by their geotag-derived
/// city. Throws Error(NonInformalInput) on any non-Informal label,
/// Error(MissingCity) on a record without a city, and
/// Error(InsufficientCities) with fewer than two distinct cities.
RegionTrainResult train_region_model(std::span<const TweetRecord> records,
                                     std::span<const CascadeLabel> labels,
                                     const RegionTrainOptions& options);

LanguagePrediction predict_region(const RegionModel& model, std::string_view text);

/// Rows = true city (the record's city field), columns = predicted.
/// Throws Error(UnknownLabel) for a true city outside the model's labels.
ConfusionMatrix confusion_by_city(const RegionModel& model, std::span<const TweetRecord> test);

}  // namespace korpus

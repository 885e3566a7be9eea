#include "korpus/region_clf.hpp"

#include <utility>

#include "korpus/error.hpp"

namespace korpus {

RegionTrainResult train_region_model(std::span<const TweetRecord> records,
                                     std::span<const CascadeLabel> labels,
                                     const RegionTrainOptions& options) {
  if (records.size() != labels.size()) {
    raise(Errc::DimensionMismatch, "records and labels differ in length");
  }
  RegionTrainResult result;
  std::vector<TrainSample> corpus;
  corpus.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (labels[i] != CascadeLabel::Informal) {
      raise(Errc::NonInformalInput,
            "record " + records[i].id + " is not Informal; region training accepts informal text only");
    }
    if (!records[i].city) {
      raise(Errc::MissingCity, "record " + records[i].id + " has no city assignment");
    }
    corpus.push_back({records[i].text_norm, *records[i].city});
    ++result.city_counts[*records[i].city];
  }
  if (result.city_counts.size() < 2) {
    raise(Errc::InsufficientCities, "region training needs at least two distinct cities, got " +
                                        std::to_string(result.city_counts.size()));
  }

  NgramTrainOptions train_options;
  train_options.epochs = options.epochs;
  train_options.lr = options.lr;
  train_options.seed = options.seed;
  if (options.inverse_frequency_weights) {
    // weight_k = total / (classes * count_k); keyed like the sorted label list,
    // which matches city_counts' map order
    const double total = static_cast<double>(corpus.size());
    const double classes = static_cast<double>(result.city_counts.size());
    for (const auto& [city, count] : result.city_counts) {
      train_options.class_weights.push_back(total / (classes * static_cast<double>(count)));
    }
  }

  NgramTrainResult trained = train_ngram_model(corpus, options.config, train_options);
  result.model.model = std::move(trained.model);
  result.epoch_loss = std::move(trained.epoch_loss);
  return result;
}

LanguagePrediction predict_region(const RegionModel& model, std::string_view text) {
  return predict_language(model.model, text);
}

ConfusionMatrix confusion_by_city(const RegionModel& model, std::span<const TweetRecord> test) {
  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(test.size());
  for (const TweetRecord& record : test) {
    if (!record.city) raise(Errc::MissingCity, "record " + record.id + " has no city assignment");
    pairs.emplace_back(*record.city, predict_region(model, record.text_norm).label);
  }
  return confusion_matrix(pairs, model.model.labels);
}

}  // namespace korpus

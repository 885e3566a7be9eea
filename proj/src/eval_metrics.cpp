#include "korpus/eval_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "json.hpp"
#include "korpus/error.hpp"
#include "korpus/rng.hpp"

namespace korpus {

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::uint64_t sum = 0;
  for (std::size_t p = 0; p < labels.size(); ++p) sum += at(truth, p);
  return sum;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t predicted) const {
  std::uint64_t sum = 0;
  for (std::size_t t = 0; t < labels.size(); ++t) sum += at(t, predicted);
  return sum;
}

ConfusionMatrix confusion_matrix(std::span<const std::pair<std::string, std::string>> pairs,
                                 std::vector<std::string> labels) {
  ConfusionMatrix cm;
  cm.labels = std::move(labels);
  cm.counts.assign(cm.labels.size() * cm.labels.size(), 0);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < cm.labels.size(); ++i) index[cm.labels[i]] = i;
  for (const auto& [truth, predicted] : pairs) {
    const auto t = index.find(truth);
    const auto p = index.find(predicted);
    if (t == index.end()) raise(Errc::UnknownLabel, "unknown true label: " + truth);
    if (p == index.end()) raise(Errc::UnknownLabel, "unknown predicted label: " + predicted);
    ++cm.at(t->second, p->second);
  }
  return cm;
}

ClassMetrics compute_metrics(const ConfusionMatrix& cm) {
  const std::uint64_t total = cm.total();
  if (cm.labels.empty() || total == 0) raise(Errc::EmptyMatrix, "confusion matrix has no observations");
  ClassMetrics metrics;
  std::uint64_t trace = 0;
  for (std::size_t k = 0; k < cm.labels.size(); ++k) {
    const std::uint64_t tp = cm.at(k, k);
    const std::uint64_t col = cm.col_sum(k);
    const std::uint64_t row = cm.row_sum(k);
    LabelMetrics m;
    m.precision = col > 0 ? static_cast<double>(tp) / static_cast<double>(col) : 0.0;
    m.recall = row > 0 ? static_cast<double>(tp) / static_cast<double>(row) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                          : 0.0;
    metrics.per_label.push_back(m);
    trace += tp;
  }
  metrics.accuracy = static_cast<double>(trace) / static_cast<double>(total);
  return metrics;
}

SplitIndices stratified_split(std::span<const std::string> item_labels,
                              const std::array<double, 3>& fractions, std::uint64_t seed) {
  double sum = 0.0;
  for (double f : fractions) {
    if (f < 0.0) raise(Errc::BadFractions, "negative split fraction");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) raise(Errc::BadFractions, "split fractions must sum to 1");

  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < item_labels.size(); ++i) by_class[item_labels[i]].push_back(i);
  for (const auto& [label, items] : by_class) {
    if (items.size() < 3) raise(Errc::ClassTooSmall, "class " + label + " has fewer than 3 items");
  }

  // largest-fraction-first remainder order; ties keep split order (train first)
  std::array<std::size_t, 3> remainder_order = {0, 1, 2};
  std::stable_sort(remainder_order.begin(), remainder_order.end(),
                   [&](std::size_t a, std::size_t b) { return fractions[a] > fractions[b]; });

  Rng rng(seed);
  SplitIndices split;
  for (auto& [label, items] : by_class) {
    rng.shuffle(items);
    const auto n = items.size();
    std::array<std::size_t, 3> quota;
    std::size_t assigned = 0;
    for (std::size_t s = 0; s < 3; ++s) {
      quota[s] = static_cast<std::size_t>(std::floor(static_cast<double>(n) * fractions[s] + 1e-9));
      assigned += quota[s];
    }
    for (std::size_t k = 0; assigned < n; ++k, ++assigned) quota[remainder_order[k % 3]] += 1;

    std::size_t pos = 0;
    for (std::size_t k = 0; k < quota[0]; ++k) split.train.push_back(items[pos++]);
    for (std::size_t k = 0; k < quota[1]; ++k) split.test.push_back(items[pos++]);
    for (std::size_t k = 0; k < quota[2]; ++k) split.validation.push_back(items[pos++]);
  }
  return split;
}

double round_half_up(double x, int decimals) {
  double scale = 1.0;
  for (int i = 0; i < decimals; ++i) scale *= 10.0;
  return std::floor(x * scale + 0.5) / scale;
}

std::string metrics_table(const ClassMetrics& metrics, std::span<const std::string> labels) {
  std::size_t width = 8;
  for (const auto& label : labels) width = std::max(width, label.size());
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-*s  %9s  %9s  %9s\n", static_cast<int>(width), "label",
                "Precision", "Recall", "F1-Score");
  out += buf;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const LabelMetrics& m = metrics.per_label[k];
    std::snprintf(buf, sizeof(buf), "%-*s  %9.2f  %9.2f  %9.2f\n", static_cast<int>(width),
                  labels[k].c_str(), round_half_up(m.precision, 2), round_half_up(m.recall, 2),
                  round_half_up(m.f1, 2));
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "%-*s  %9s  %9s  %9.2f\n", static_cast<int>(width), "accuracy", "",
                "", round_half_up(metrics.accuracy, 2));
  out += buf;
  return out;
}

std::string metrics_to_json(const ClassMetrics& metrics, std::span<const std::string> labels) {
  nlohmann::ordered_json j;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const LabelMetrics& m = metrics.per_label[k];
    j[labels[k]] = {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
  }
  j["accuracy"] = metrics.accuracy;
  return j.dump();
}

}  // namespace korpus

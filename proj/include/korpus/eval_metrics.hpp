#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace korpus {

struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::uint64_t> counts;  // row-major; rows = true, cols = predicted

  std::size_t size() const { return labels.size(); }
  std::uint64_t at(std::size_t truth, std::size_t predicted) const {
    return counts[truth * labels.size() + predicted];
  }
  std::uint64_t& at(std::size_t truth, std::size_t predicted) {
    return counts[truth * labels.size() + predicted];
  }
  std::uint64_t total() const;
  std::uint64_t row_sum(std::size_t truth) const;
  std::uint64_t col_sum(std::size_t predicted) const;
};

/// Throws Error(UnknownLabel) if a pair names a label outside the list.
ConfusionMatrix confusion_matrix(std::span<const std::pair<std::string, std::string>> pairs,
                                 std::vector<std::string> labels);

struct LabelMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ClassMetrics {
  std::vector<LabelMetrics> per_label;
  double accuracy = 0.0;
};

/// precision_k = cm[k][k] / column k, recall_k = cm[k][k] / row k,
/// f1 = 2pr/(p+r); zero denominators yield 0. accuracy = trace/total.
/// Throws Error(EmptyMatrix) when the matrix holds no observations.
ClassMetrics compute_metrics(const ConfusionMatrix& cm);

struct SplitIndices {
  std::vector<std::size_t> train, test, validation;
};

/// Seeded per-class shuffle, then per-class quotas by fraction with
/// remainder items assigned largest-fraction-first (train first on ties).
/// Partitions are disjoint and cover the input. Throws
/// Error(BadFractions / ClassTooSmall).
SplitIndices stratified_split(std::span<const std::string> item_labels,
                              const std::array<double, 3>& fractions, std::uint64_t seed);

double round_half_up(double x, int decimals);

/// Aligned text table in the report's column order
/// (Precision, Recall, F1-Score, then the accuracy line), two decimals.
std::string metrics_table(const ClassMetrics& metrics, std::span<const std::string> labels);

/// JSON object keyed by label, plus "accuracy".
std::string metrics_to_json(const ClassMetrics& metrics, std::span<const std::string> labels);

}  // namespace korpus

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace korpus {

/// Hashed character-n-gram bag over a linear softmax classifier, trained
/// with SGD. One architecture serves language ID, region ID, and the
/// n-gram formality baseline; only the label set changes.
struct NgramConfig {
  int n_min = 2;
  int n_max = 5;
  std::uint64_t bucket_count = std::uint64_t{1} << 18;  // power of two
  int embedding_dim = 16;
};

void validate_config(const NgramConfig& cfg);  // throws Error(FormatError)

struct NgramLinearModel {
  NgramConfig config;
  std::vector<std::string> labels;       // sorted, unique
  std::vector<float> input_embeddings;   // bucket_count x embedding_dim
  std::vector<float> output_weights;     // embedding_dim x labels
};

/// FNV-1a 64-bit with the standard offset basis and prime. Stable across
/// runs and platforms; every hashed feature in the project goes through it.
std::uint64_t fnv1a64(std::string_view bytes);

/// Bucket indices (a multiset) for every n-character window, n in
/// [n_min, n_max], over the text wrapped in boundary markers U+27E8/U+27E9.
/// Windows are counted in code points; the hash runs over their UTF-8 bytes.
std::vector<std::uint32_t> extract_char_ngrams(std::string_view text, const NgramConfig& cfg);

struct TrainSample {
  std::string text;   // normalized
  std::string label;
};

struct NgramTrainOptions {
  int epochs = 5;
  double lr = 2.0;  // mean-of-embeddings features start tiny; small rates stall at desk scale
  std::uint64_t seed = 42;
  /// Per-label loss weights keyed like the model's sorted label list;
  /// empty means uniform. Used by the region classifier's optional
  /// inverse-frequency weighting.
  std::vector<double> class_weights;
};

struct NgramTrainResult {
  NgramLinearModel model;
  std::vector<double> epoch_loss;  // mean NLL per epoch, one entry per epoch
};

/// Single-threaded SGD with a linearly decaying learning rate, bit-exact
/// for a given seed. Throws Error(EmptyCorpus / SingleLabelCorpus).
NgramTrainResult train_ngram_model(std::span<const TrainSample> corpus, const NgramConfig& cfg,
                                   const NgramTrainOptions& options);

struct LanguagePrediction {
  std::size_t label_index = 0;  // argmax; ties go to the lowest index
  std::string label;
  std::vector<double> probabilities;  // softmax, sums to 1
};

LanguagePrediction predict_language(const NgramLinearModel& model, std::string_view text);

/// True iff the argmax label is one of {eng, jpn, kor, ara} and its
/// probability clears the threshold. Throws Error(LabelSetMismatch) when
/// the model was not trained with all four foreign labels.
bool is_foreign(const NgramLinearModel& model, std::string_view text, double threshold = 0.5);

// Model container, magic "KORPUS-NGLM v1": config, labels, then both
// matrices as little-endian 32-bit floats.
void save_ngram_model(const NgramLinearModel& model, const std::string& path);
NgramLinearModel load_ngram_model(const std::string& path);

}  // namespace korpus

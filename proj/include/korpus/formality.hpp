#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace korpus {

/// The fine-tuning head: Linear(768,512) + ReLU + dropout(0.1) into
/// Linear(512,2) + softmax, over externally produced sentence embeddings.
/// Dimensions are configurable so tiny instances can be checked by hand;
/// the defaults are the real architecture.
struct FormalityHeadConfig {
  int input_dim = 768;
  int hidden_dim = 512;
  int output_dim = 2;
  double dropout_rate = 0.1;  // [0, 1)
  int epochs = 50;
};

void validate_config(const FormalityHeadConfig& cfg);

std::int64_t parameter_count(const FormalityHeadConfig& cfg);

/// Parameters are double precision so analytic gradients can be checked
/// against finite differences, and so save/load round-trips bit-exactly.
struct FormalityHead {
  FormalityHeadConfig config;
  std::vector<double> w1;  // input_dim x hidden_dim, row-major
  std::vector<double> b1;  // hidden_dim
  std::vector<double> w2;  // hidden_dim x output_dim, row-major
  std::vector<double> b2;  // output_dim
};

FormalityHead make_zero_head(const FormalityHeadConfig& cfg);

enum class FormalityLabel { Formal, Informal };
std::string_view to_string(FormalityLabel label);
std::optional<FormalityLabel> formality_label_from_string(std::string_view s);

struct EmbeddingRecord {
  std::string id;
  std::vector<float> vector;            // length = config.input_dim
  std::optional<FormalityLabel> label;  // required for training data
};

using EmbeddingDataset = std::vector<EmbeddingRecord>;

/// Class probabilities (Formal, Informal), summing to 1. In train mode the
/// hidden layer gets inverted dropout driven by the seed; eval mode is
/// deterministic and ignores it. Throws Error(DimensionMismatch).
std::vector<double> head_forward(const FormalityHead& head, std::span<const float> x,
                                 bool train_mode, std::uint64_t seed);

/// Hidden activations after ReLU (and after dropout in train mode),
/// exposed for the dropout-expectation and hand-computation checks.
std::vector<double> head_hidden(const FormalityHead& head, std::span<const float> x,
                                bool train_mode, std::uint64_t seed);

struct ClassifyResult {
  FormalityLabel label;
  double probability;
};

/// Eval-mode argmax; an exact 0.5/0.5 tie resolves to Informal.
ClassifyResult classify_formality(const FormalityHead& head, std::span<const float> x);

/// Mean cross-entropy over the batch, dropout off.
double head_batch_loss(const FormalityHead& head, std::span<const EmbeddingRecord> batch);

struct HeadGradients {
  std::vector<double> w1, b1, w2, b2;
  double loss = 0.0;
};

/// Analytic gradients of head_batch_loss, dropout off. The finite-difference
/// side of the gradient check lives in the tests, independent of this path.
HeadGradients head_batch_gradients(const FormalityHead& head, std::span<const EmbeddingRecord> batch);

struct HeadTrainResult {
  FormalityHead head;
  std::vector<double> epoch_loss;  // exactly config.epochs entries
};

/// Mini-batch SGD for exactly cfg.epochs epochs with He-uniform W1 init,
/// zero biases and W2, seeded shuffling and dropout. Deterministic given
/// the seed. Throws Error(EmptyDataset / SingleLabelDataset /
/// UnlabeledData / DimensionMismatch).
HeadTrainResult train_head(const EmbeddingDataset& data, const FormalityHeadConfig& cfg,
                           double lr, std::uint64_t seed, int batch_size = 32);

// Head container, magic "KORPUS-HEAD v1": config then all four parameter
// blocks as little-endian 64-bit floats.
void save_head(const FormalityHead& head, const std::string& path);
FormalityHead load_head(const std::string& path);

// Embedding files. `.emb` is the binary container, magic "KORPUS-EMB v1"
// (count, dim, little-endian 32-bit floats) with a `<path>.ids` sidecar of
// one `id[\tlabel]` line per vector. Anything else is JSONL with fields
// id, vector, and optional label.
EmbeddingDataset load_embeddings(const std::string& path);
void save_embeddings_jsonl(const EmbeddingDataset& data, const std::string& path);
void save_embeddings_binary(const EmbeddingDataset& data, const std::string& path);

}  // namespace korpus

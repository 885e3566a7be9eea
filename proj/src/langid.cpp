#include "korpus/langid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "binio.hpp"
#include "korpus/corpus_model.hpp"
#include "korpus/error.hpp"
#include "korpus/rng.hpp"

namespace korpus {

namespace {
constexpr char32_t kBeginMarker = 0x27E8;  // ⟨
constexpr char32_t kEndMarker = 0x27E9;    // ⟩
constexpr std::string_view kModelMagic = "KORPUS-NGLM v1\n";
}  // namespace

void validate_config(const NgramConfig& cfg) {
  if (cfg.n_min < 1) raise(Errc::FormatError, "n_min must be >= 1");
  if (cfg.n_max < cfg.n_min) raise(Errc::FormatError, "n_max must be >= n_min");
  if (cfg.bucket_count == 0 || (cfg.bucket_count & (cfg.bucket_count - 1)) != 0) {
    raise(Errc::FormatError, "bucket_count must be a power of two");
  }
  if (cfg.embedding_dim < 1) raise(Errc::FormatError, "embedding_dim must be positive");
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::vector<std::uint32_t> extract_char_ngrams(std::string_view text, const NgramConfig& cfg) {
  std::vector<char32_t> cps;
  cps.reserve(text.size() + 2);
  cps.push_back(kBeginMarker);
  for (char32_t c : utf8_decode(text)) cps.push_back(c);
  cps.push_back(kEndMarker);

  // Encode once; windows hash byte slices between code-point offsets.
  std::string bytes;
  bytes.reserve(text.size() + 8);
  std::vector<std::uint32_t> offsets;
  offsets.reserve(cps.size() + 1);
  for (char32_t c : cps) {
    offsets.push_back(static_cast<std::uint32_t>(bytes.size()));
    utf8_encode(c, bytes);
  }
  offsets.push_back(static_cast<std::uint32_t>(bytes.size()));

  const std::uint64_t mask = cfg.bucket_count - 1;
  std::vector<std::uint32_t> out;
  const std::size_t count = cps.size();
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    const auto un = static_cast<std::size_t>(n);
    if (count < un) break;
    for (std::size_t s = 0; s + un <= count; ++s) {
      const std::string_view window(bytes.data() + offsets[s], offsets[s + un] - offsets[s]);
      out.push_back(static_cast<std::uint32_t>(fnv1a64(window) & mask));
    }
  }
  return out;
}

namespace {

void softmax_inplace(std::vector<double>& scores) {
  const double m = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double& s : scores) {
    s = std::exp(s - m);
    sum += s;
  }
  for (double& s : scores) s /= sum;
}

std::vector<double> score_features(const NgramLinearModel& model,
                                   const std::vector<std::uint32_t>& features,
                                   std::vector<double>& hidden) {
  const auto dim = static_cast<std::size_t>(model.config.embedding_dim);
  const std::size_t label_count = model.labels.size();
  hidden.assign(dim, 0.0);
  if (!features.empty()) {
    for (std::uint32_t bucket : features) {
      const float* row = model.input_embeddings.data() + static_cast<std::size_t>(bucket) * dim;
      for (std::size_t d = 0; d < dim; ++d) hidden[d] += row[d];
    }
    const double inv = 1.0 / static_cast<double>(features.size());
    for (double& h : hidden) h *= inv;
  }
  std::vector<double> scores(label_count, 0.0);
  for (std::size_t d = 0; d < dim; ++d) {
    const float* wrow = model.output_weights.data() + d * label_count;
    const double h = hidden[d];
    for (std::size_t l = 0; l < label_count; ++l) scores[l] += h * wrow[l];
  }
  return scores;
}

}  // namespace

NgramTrainResult train_ngram_model(std::span<const TrainSample> corpus, const NgramConfig& cfg,
                                   const NgramTrainOptions& options) {
  validate_config(cfg);
  if (corpus.empty()) raise(Errc::EmptyCorpus, "training corpus is empty");

  std::set<std::string> label_set;
  for (const TrainSample& sample : corpus) label_set.insert(sample.label);
  if (label_set.size() < 2) {
    raise(Errc::SingleLabelCorpus, "training corpus has a single label: " + *label_set.begin());
  }

  NgramLinearModel model;
  model.config = cfg;
  model.labels.assign(label_set.begin(), label_set.end());
  const std::size_t label_count = model.labels.size();
  const auto dim = static_cast<std::size_t>(cfg.embedding_dim);

  if (!options.class_weights.empty() && options.class_weights.size() != label_count) {
    raise(Errc::LabelSetMismatch, "class_weights size does not match label count");
  }

  std::map<std::string, std::size_t> label_index;
  for (std::size_t l = 0; l < label_count; ++l) label_index[model.labels[l]] = l;

  Rng rng(options.seed);
  const double bound = 1.0 / cfg.embedding_dim;
  model.input_embeddings.resize(cfg.bucket_count * dim);
  for (float& w : model.input_embeddings) w = static_cast<float>(rng.uniform(-bound, bound));
  model.output_weights.assign(dim * label_count, 0.0f);

  std::vector<std::vector<std::uint32_t>> features;
  features.reserve(corpus.size());
  std::vector<std::size_t> targets;
  targets.reserve(corpus.size());
  for (const TrainSample& sample : corpus) {
    features.push_back(extract_char_ngrams(sample.text, cfg));
    targets.push_back(label_index[sample.label]);
  }

  const std::size_t n = corpus.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  NgramTrainResult result;
  const double total_steps = static_cast<double>(options.epochs) * static_cast<double>(n);
  std::vector<double> hidden, grad_hidden(dim);
  std::size_t step = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t idx : order) {
      const auto& feats = features[idx];
      const std::size_t y = targets[idx];
      const double weight = options.class_weights.empty() ? 1.0 : options.class_weights[y];

      std::vector<double> probs = score_features(model, feats, hidden);
      softmax_inplace(probs);
      loss_sum += -std::log(std::max(probs[y], 1e-300)) * weight;

      const double lr = options.lr * (1.0 - static_cast<double>(step) / total_steps);
      ++step;

      for (std::size_t l = 0; l < label_count; ++l) {
        probs[l] = (probs[l] - (l == y ? 1.0 : 0.0)) * weight;  // now the score gradient
      }
      // gradient wrt the hidden mean uses the pre-update output weights
      for (std::size_t d = 0; d < dim; ++d) {
        const float* wrow = model.output_weights.data() + d * label_count;
        double g = 0.0;
        for (std::size_t l = 0; l < label_count; ++l) g += wrow[l] * probs[l];
        grad_hidden[d] = g;
      }
      for (std::size_t d = 0; d < dim; ++d) {
        float* wrow = model.output_weights.data() + d * label_count;
        const double h = hidden[d];
        for (std::size_t l = 0; l < label_count; ++l) {
          wrow[l] -= static_cast<float>(lr * probs[l] * h);
        }
      }
      if (!feats.empty()) {
        const double scale = lr / static_cast<double>(feats.size());
        for (std::uint32_t bucket : feats) {
          float* row = model.input_embeddings.data() + static_cast<std::size_t>(bucket) * dim;
          for (std::size_t d = 0; d < dim; ++d) {
            row[d] -= static_cast<float>(scale * grad_hidden[d]);
          }
        }
      }
    }
    result.epoch_loss.push_back(loss_sum / static_cast<double>(n));
  }
  result.model = std::move(model);
  return result;
}

LanguagePrediction predict_language(const NgramLinearModel& model, std::string_view text) {
  const auto features = extract_char_ngrams(text, model.config);
  std::vector<double> hidden;
  std::vector<double> probs = score_features(model, features, hidden);
  softmax_inplace(probs);
  std::size_t best = 0;
  for (std::size_t l = 1; l < probs.size(); ++l) {
    if (probs[l] > probs[best]) best = l;  // ties keep the lowest index
  }
  return {best, model.labels[best], std::move(probs)};
}

bool is_foreign(const NgramLinearModel& model, std::string_view text, double threshold) {
  for (std::string_view code : {"eng", "jpn", "kor", "ara"}) {
    if (std::find(model.labels.begin(), model.labels.end(), code) == model.labels.end()) {
      raise(Errc::LabelSetMismatch,
            std::string("model labels lack foreign language ") + std::string(code));
    }
  }
  const LanguagePrediction pred = predict_language(model, text);
  return is_foreign_language(pred.label) && pred.probabilities[pred.label_index] >= threshold;
}

void save_ngram_model(const NgramLinearModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::IoError, "cannot write " + path);
  out.write(kModelMagic.data(), static_cast<std::streamsize>(kModelMagic.size()));
  detail::write_u32(out, static_cast<std::uint32_t>(model.config.n_min));
  detail::write_u32(out, static_cast<std::uint32_t>(model.config.n_max));
  detail::write_u64(out, model.config.bucket_count);
  detail::write_u32(out, static_cast<std::uint32_t>(model.config.embedding_dim));
  detail::write_u32(out, static_cast<std::uint32_t>(model.labels.size()));
  for (const std::string& label : model.labels) detail::write_string(out, label);
  detail::write_f32_block(out, model.input_embeddings);
  detail::write_f32_block(out, model.output_weights);
  if (!out) raise(Errc::IoError, "write failed: " + path);
}

NgramLinearModel load_ngram_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::IoError, "cannot open " + path);
  detail::expect_magic(in, kModelMagic, path);
  NgramLinearModel model;
  model.config.n_min = static_cast<int>(detail::read_u32(in, path));
  model.config.n_max = static_cast<int>(detail::read_u32(in, path));
  model.config.bucket_count = detail::read_u64(in, path);
  model.config.embedding_dim = static_cast<int>(detail::read_u32(in, path));
  validate_config(model.config);
  const std::uint32_t label_count = detail::read_u32(in, path);
  if (label_count == 0) raise(Errc::FormatError, path + ": no labels");
  model.labels.reserve(label_count);
  for (std::uint32_t l = 0; l < label_count; ++l) model.labels.push_back(detail::read_string(in, path));
  const std::size_t dim = static_cast<std::size_t>(model.config.embedding_dim);
  model.input_embeddings.resize(model.config.bucket_count * dim);
  detail::read_f32_block(in, model.input_embeddings, path);
  model.output_weights.resize(dim * label_count);
  detail::read_f32_block(in, model.output_weights, path);
  return model;
}

}  // namespace korpus

#include "korpus/formality.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "binio.hpp"
#include "json.hpp"
#include "korpus/error.hpp"
#include "korpus/rng.hpp"

namespace korpus {

namespace {
constexpr std::string_view kHeadMagic = "KORPUS-HEAD v1\n";
constexpr std::string_view kEmbMagic = "KORPUS-EMB v1\n";
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
}  // namespace

void validate_config(const FormalityHeadConfig& cfg) {
  if (cfg.input_dim < 1 || cfg.hidden_dim < 1 || cfg.output_dim < 1) {
    raise(Errc::FormatError, "head dimensions must be positive");
  }
  if (!(cfg.dropout_rate >= 0.0 && cfg.dropout_rate < 1.0)) {
    raise(Errc::FormatError, "dropout_rate must be in [0, 1)");
  }
  if (cfg.epochs < 1) raise(Errc::FormatError, "epochs must be positive");
}

std::int64_t parameter_count(const FormalityHeadConfig& cfg) {
  return static_cast<std::int64_t>(cfg.input_dim) * cfg.hidden_dim + cfg.hidden_dim +
         static_cast<std::int64_t>(cfg.hidden_dim) * cfg.output_dim + cfg.output_dim;
}

FormalityHead make_zero_head(const FormalityHeadConfig& cfg) {
  validate_config(cfg);
  FormalityHead head;
  head.config = cfg;
  head.w1.assign(static_cast<std::size_t>(cfg.input_dim) * cfg.hidden_dim, 0.0);
  head.b1.assign(static_cast<std::size_t>(cfg.hidden_dim), 0.0);
  head.w2.assign(static_cast<std::size_t>(cfg.hidden_dim) * cfg.output_dim, 0.0);
  head.b2.assign(static_cast<std::size_t>(cfg.output_dim), 0.0);
  return head;
}

std::string_view to_string(FormalityLabel label) {
  return label == FormalityLabel::Formal ? "formal" : "informal";
}

std::optional<FormalityLabel> formality_label_from_string(std::string_view s) {
  std::string lower;
  lower.reserve(s.size());
  for (char c : s) lower.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c);
  if (lower == "formal") return FormalityLabel::Formal;
  if (lower == "informal") return FormalityLabel::Informal;
  return std::nullopt;
}

namespace {

void check_dims(const FormalityHead& head, std::size_t x_size) {
  const auto& cfg = head.config;
  if (x_size != static_cast<std::size_t>(cfg.input_dim)) {
    raise(Errc::DimensionMismatch, "input vector has " + std::to_string(x_size) +
                                       " components, head expects " + std::to_string(cfg.input_dim));
  }
  if (head.w1.size() != static_cast<std::size_t>(cfg.input_dim) * cfg.hidden_dim ||
      head.b1.size() != static_cast<std::size_t>(cfg.hidden_dim) ||
      head.w2.size() != static_cast<std::size_t>(cfg.hidden_dim) * cfg.output_dim ||
      head.b2.size() != static_cast<std::size_t>(cfg.output_dim)) {
    raise(Errc::DimensionMismatch, "head parameter shapes do not match its config");
  }
}

// z1 and the ReLU output; dropout handled by callers that need masks.
void hidden_preact(const FormalityHead& head, std::span<const float> x, std::vector<double>& z1) {
  const auto hid = static_cast<std::size_t>(head.config.hidden_dim);
  z1.assign(head.b1.begin(), head.b1.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* row = head.w1.data() + i * hid;
    for (std::size_t h = 0; h < hid; ++h) z1[h] += xi * row[h];
  }
}

void output_probs(const FormalityHead& head, const std::vector<double>& h1, std::vector<double>& p) {
  const auto hid = static_cast<std::size_t>(head.config.hidden_dim);
  const auto out = static_cast<std::size_t>(head.config.output_dim);
  p.assign(head.b2.begin(), head.b2.end());
  for (std::size_t h = 0; h < hid; ++h) {
    const double hv = h1[h];
    if (hv == 0.0) continue;
    const double* row = head.w2.data() + h * out;
    for (std::size_t o = 0; o < out; ++o) p[o] += hv * row[o];
  }
  const double m = *std::max_element(p.begin(), p.end());
  double sum = 0.0;
  for (double& v : p) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : p) v /= sum;
}

// Inverted dropout: kept units are scaled by 1/(1-rate) so the eval-mode
// activation equals the expectation over masks.
void apply_dropout(std::vector<double>& h1, double rate, Rng& rng, std::vector<double>* mask_out) {
  const double keep_scale = 1.0 / (1.0 - rate);
  for (std::size_t h = 0; h < h1.size(); ++h) {
    const double mask = rng.next_double() >= rate ? keep_scale : 0.0;
    h1[h] *= mask;
    if (mask_out) (*mask_out)[h] = mask;
  }
}

}  // namespace

std::vector<double> head_hidden(const FormalityHead& head, std::span<const float> x, bool train_mode,
                                std::uint64_t seed) {
  check_dims(head, x.size());
  std::vector<double> h1;
  hidden_preact(head, x, h1);
  for (double& v : h1) v = std::max(0.0, v);
  if (train_mode && head.config.dropout_rate > 0.0) {
    Rng rng(seed);
    apply_dropout(h1, head.config.dropout_rate, rng, nullptr);
  }
  return h1;
}

std::vector<double> head_forward(const FormalityHead& head, std::span<const float> x, bool train_mode,
                                 std::uint64_t seed) {
  const std::vector<double> h1 = head_hidden(head, x, train_mode, seed);
  std::vector<double> p;
  output_probs(head, h1, p);
  return p;
}

ClassifyResult classify_formality(const FormalityHead& head, std::span<const float> x) {
  const std::vector<double> p = head_forward(head, x, /*train_mode=*/false, 0);
  // index 0 = Formal, 1 = Informal; the exact tie goes to Informal
  if (p[0] > p[1]) return {FormalityLabel::Formal, p[0]};
  return {FormalityLabel::Informal, p[1]};
}

namespace {

std::size_t label_index_of(const EmbeddingRecord& rec) {
  if (!rec.label) raise(Errc::UnlabeledData, "embedding " + rec.id + " has no label");
  return *rec.label == FormalityLabel::Formal ? 0 : 1;
}

// Shared forward/backward pass. Gradients are accumulated (mean over the
// batch); per-sample dropout masks come from `rng` when it is non-null.
double batch_pass(const FormalityHead& head, std::span<const EmbeddingRecord> batch, Rng* rng,
                  HeadGradients* grads) {
  const auto& cfg = head.config;
  const auto hid = static_cast<std::size_t>(cfg.hidden_dim);
  const auto out = static_cast<std::size_t>(cfg.output_dim);
  const double inv_batch = 1.0 / static_cast<double>(batch.size());

  std::vector<double> z1, h1, p, mask(hid, 1.0), gz1(hid);
  double loss = 0.0;
  for (const EmbeddingRecord& rec : batch) {
    check_dims(head, rec.vector.size());
    const std::size_t y = label_index_of(rec);
    if (y >= out) raise(Errc::DimensionMismatch, "label index exceeds output_dim");

    hidden_preact(head, rec.vector, z1);
    h1 = z1;
    for (double& v : h1) v = std::max(0.0, v);
    const bool dropout = rng != nullptr && cfg.dropout_rate > 0.0;
    if (dropout) apply_dropout(h1, cfg.dropout_rate, *rng, &mask);
    output_probs(head, h1, p);
    loss += -std::log(std::max(p[y], 1e-300)) * inv_batch;

    if (!grads) continue;
    // dL/dz2 = p - onehot(y), scaled to the batch mean
    for (std::size_t o = 0; o < out; ++o) p[o] = (p[o] - (o == y ? 1.0 : 0.0)) * inv_batch;
    for (std::size_t o = 0; o < out; ++o) grads->b2[o] += p[o];
    for (std::size_t h = 0; h < hid; ++h) {
      const double hv = h1[h];
      double g = 0.0;
      const double* w2row = head.w2.data() + h * out;
      double* gw2row = grads->w2.data() + h * out;
      for (std::size_t o = 0; o < out; ++o) {
        gw2row[o] += hv * p[o];
        g += w2row[o] * p[o];
      }
      if (dropout) g *= mask[h];
      gz1[h] = z1[h] > 0.0 ? g : 0.0;
    }
    for (std::size_t h = 0; h < hid; ++h) grads->b1[h] += gz1[h];
    for (std::size_t i = 0; i < rec.vector.size(); ++i) {
      const double xi = rec.vector[i];
      if (xi == 0.0) continue;
      double* gw1row = grads->w1.data() + i * hid;
      for (std::size_t h = 0; h < hid; ++h) gw1row[h] += xi * gz1[h];
    }
  }
  return loss;
}

}  // namespace

double head_batch_loss(const FormalityHead& head, std::span<const EmbeddingRecord> batch) {
  if (batch.empty()) raise(Errc::EmptyDataset, "empty batch");
  return batch_pass(head, batch, nullptr, nullptr);
}

HeadGradients head_batch_gradients(const FormalityHead& head, std::span<const EmbeddingRecord> batch) {
  if (batch.empty()) raise(Errc::EmptyDataset, "empty batch");
  HeadGradients grads;
  grads.w1.assign(head.w1.size(), 0.0);
  grads.b1.assign(head.b1.size(), 0.0);
  grads.w2.assign(head.w2.size(), 0.0);
  grads.b2.assign(head.b2.size(), 0.0);
  grads.loss = batch_pass(head, batch, nullptr, &grads);
  return grads;
}

HeadTrainResult train_head(const EmbeddingDataset& data, const FormalityHeadConfig& cfg, double lr,
                           std::uint64_t seed, int batch_size) {
  validate_config(cfg);
  if (data.empty()) raise(Errc::EmptyDataset, "training dataset is empty");
  if (batch_size < 1) raise(Errc::FormatError, "batch_size must be positive");

  std::set<std::size_t> classes;
  for (const EmbeddingRecord& rec : data) {
    classes.insert(label_index_of(rec));
    if (rec.vector.size() != static_cast<std::size_t>(cfg.input_dim)) {
      raise(Errc::DimensionMismatch, "embedding " + rec.id + " has dimension " +
                                         std::to_string(rec.vector.size()));
    }
  }
  if (classes.size() < 2) raise(Errc::SingleLabelDataset, "training dataset has a single label");

  Rng rng(seed);
  FormalityHead head = make_zero_head(cfg);
  // He-uniform fan-in init for W1; W2 and biases start at zero.
  const double limit = std::sqrt(6.0 / cfg.input_dim);
  for (double& w : head.w1) w = rng.uniform(-limit, limit);

  const std::size_t n = data.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  HeadGradients grads;
  grads.w1.assign(head.w1.size(), 0.0);
  grads.b1.assign(head.b1.size(), 0.0);
  grads.w2.assign(head.w2.size(), 0.0);
  grads.b2.assign(head.b2.size(), 0.0);

  HeadTrainResult result;
  std::vector<EmbeddingRecord> batch;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t done = 0;
    while (done < n) {
      const std::size_t take = std::min(static_cast<std::size_t>(batch_size), n - done);
      batch.clear();
      for (std::size_t k = 0; k < take; ++k) batch.push_back(data[order[done + k]]);
      done += take;

      std::fill(grads.w1.begin(), grads.w1.end(), 0.0);
      std::fill(grads.b1.begin(), grads.b1.end(), 0.0);
      std::fill(grads.w2.begin(), grads.w2.end(), 0.0);
      std::fill(grads.b2.begin(), grads.b2.end(), 0.0);
      const double batch_loss = batch_pass(head, batch, &rng, &grads);
      loss_sum += batch_loss * static_cast<double>(take);

      for (std::size_t k = 0; k < head.w1.size(); ++k) head.w1[k] -= lr * grads.w1[k];
      for (std::size_t k = 0; k < head.b1.size(); ++k) head.b1[k] -= lr * grads.b1[k];
      for (std::size_t k = 0; k < head.w2.size(); ++k) head.w2[k] -= lr * grads.w2[k];
      for (std::size_t k = 0; k < head.b2.size(); ++k) head.b2[k] -= lr * grads.b2[k];
    }
    result.epoch_loss.push_back(loss_sum / static_cast<double>(n));
  }
  result.head = std::move(head);
  return result;
}

// ---------------------------------------------------------------------------
// Containers

void save_head(const FormalityHead& head, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::IoError, "cannot write " + path);
  out.write(kHeadMagic.data(), static_cast<std::streamsize>(kHeadMagic.size()));
  detail::write_u32(out, static_cast<std::uint32_t>(head.config.input_dim));
  detail::write_u32(out, static_cast<std::uint32_t>(head.config.hidden_dim));
  detail::write_u32(out, static_cast<std::uint32_t>(head.config.output_dim));
  detail::write_f64(out, head.config.dropout_rate);
  detail::write_u32(out, static_cast<std::uint32_t>(head.config.epochs));
  for (const auto* block : {&head.w1, &head.b1, &head.w2, &head.b2}) {
    detail::write_f64_block(out, *block);
  }
  if (!out) raise(Errc::IoError, "write failed: " + path);
}

FormalityHead load_head(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::IoError, "cannot open " + path);
  detail::expect_magic(in, kHeadMagic, path);
  FormalityHeadConfig cfg;
  cfg.input_dim = static_cast<int>(detail::read_u32(in, path));
  cfg.hidden_dim = static_cast<int>(detail::read_u32(in, path));
  cfg.output_dim = static_cast<int>(detail::read_u32(in, path));
  cfg.dropout_rate = detail::read_f64(in, path);
  cfg.epochs = static_cast<int>(detail::read_u32(in, path));
  validate_config(cfg);
  FormalityHead head = make_zero_head(cfg);
  for (auto* block : {&head.w1, &head.b1, &head.w2, &head.b2}) {
    detail::read_f64_block(in, *block, path);
  }
  return head;
}

void save_embeddings_binary(const EmbeddingDataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::IoError, "cannot write " + path);
  const std::size_t dim = data.empty() ? 0 : data.front().vector.size();
  out.write(kEmbMagic.data(), static_cast<std::streamsize>(kEmbMagic.size()));
  detail::write_u32(out, static_cast<std::uint32_t>(data.size()));
  detail::write_u32(out, static_cast<std::uint32_t>(dim));
  std::ofstream ids(path + ".ids");
  if (!ids) raise(Errc::IoError, "cannot write " + path + ".ids");
  for (const EmbeddingRecord& rec : data) {
    if (rec.vector.size() != dim) raise(Errc::DimensionMismatch, "ragged embedding dimensions");
    detail::write_f32_block(out, rec.vector);
    ids << rec.id;
    if (rec.label) ids << '\t' << to_string(*rec.label);
    ids << '\n';
  }
  if (!out || !ids) raise(Errc::IoError, "write failed: " + path);
}

void save_embeddings_jsonl(const EmbeddingDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(Errc::IoError, "cannot write " + path);
  for (const EmbeddingRecord& rec : data) {
    ordered_json j;
    j["id"] = rec.id;
    j["vector"] = rec.vector;
    if (rec.label) j["label"] = to_string(*rec.label);
    out << j.dump() << '\n';
  }
  if (!out) raise(Errc::IoError, "write failed: " + path);
}

namespace {

EmbeddingDataset load_embeddings_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::IoError, "cannot open " + path);
  detail::expect_magic(in, kEmbMagic, path);
  const std::uint32_t count = detail::read_u32(in, path);
  const std::uint32_t dim = detail::read_u32(in, path);
  EmbeddingDataset data(count);
  for (EmbeddingRecord& rec : data) {
    rec.vector.resize(dim);
    detail::read_f32_block(in, rec.vector, path);
  }
  std::ifstream ids(path + ".ids");
  if (!ids) raise(Errc::IoError, "cannot open " + path + ".ids");
  std::string line;
  std::size_t row = 0;
  while (std::getline(ids, line)) {
    if (line.empty()) continue;
    if (row >= data.size()) raise(Errc::FormatError, path + ".ids has more lines than vectors");
    const std::size_t tab = line.find('\t');
    data[row].id = line.substr(0, tab);
    if (tab != std::string::npos) {
      data[row].label = formality_label_from_string(line.substr(tab + 1));
    }
    ++row;
  }
  if (row != data.size()) raise(Errc::FormatError, path + ".ids has fewer lines than vectors");
  return data;
}

EmbeddingDataset load_embeddings_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::IoError, "cannot open " + path);
  EmbeddingDataset data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j.contains("vector") ||
        !j["vector"].is_array()) {
      raise(Errc::FormatError, path + ": bad embedding line " + std::to_string(line_no));
    }
    EmbeddingRecord rec;
    rec.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
    rec.vector.reserve(j["vector"].size());
    for (const auto& v : j["vector"]) {
      if (!v.is_number()) raise(Errc::FormatError, path + ": non-numeric vector component");
      rec.vector.push_back(v.get<float>());
    }
    if (j.contains("label") && j["label"].is_string()) {
      rec.label = formality_label_from_string(j["label"].get<std::string>());
      if (!rec.label) raise(Errc::FormatError, path + ": unknown label on line " + std::to_string(line_no));
    }
    data.push_back(std::move(rec));
  }
  return data;
}

}  // namespace

EmbeddingDataset load_embeddings(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".emb") {
    return load_embeddings_binary(path);
  }
  return load_embeddings_jsonl(path);
}

}  // namespace korpus

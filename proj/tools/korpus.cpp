// korpus - batch curation pipeline for geotagged social-media text.
//
// One subcommand per pipeline arrow: ingest raw dumps, geofence records to
// the nearest provincial capital, filter foreign languages and formal
// Indonesian, classify the informal remainder by region, and emit the
// per-city tabulation, corpus statistics, lexical-distance matrices, and
// classification reports.
//
// Exit codes: 0 success, 1 usage error, 2 data error. Diagnostics go to
// stderr; data goes to files or stdout.

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "korpus/cascade.hpp"
#include "korpus/corpus_model.hpp"
#include "korpus/csv.hpp"
#include "korpus/dialect.hpp"
#include "korpus/error.hpp"
#include "korpus/eval_metrics.hpp"
#include "korpus/formality.hpp"
#include "korpus/geotag.hpp"
#include "korpus/ingest.hpp"
#include "korpus/langid.hpp"
#include "korpus/region_clf.hpp"

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Global knobs, settable from a flat key=value config file and overridden
// by command-line flags.
struct RunConfig {
  std::uint64_t seed = 42;
  int jobs = 1;
  double foreign_threshold = 0.5;
  double radius_km = korpus::kDefaultCityRadiusKm;
  std::array<double, 3> fractions = {0.70, 0.15, 0.15};
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) korpus::raise(korpus::Errc::IoError, "cannot write " + path);
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) korpus::raise(korpus::Errc::IoError, "cannot open " + path);
  return in;
}

// Writes either to the given path or to stdout when the path is empty.
void emit_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    auto out = open_output(path);
    out << text;
  }
}

struct LabeledLine {
  korpus::TweetRecord record;
  std::optional<korpus::CascadeLabel> label;
};

// Reads cascade-labeled JSONL: the canonical record fields plus "label".
std::vector<LabeledLine> read_labeled_records(const std::string& path) {
  auto in = open_input(path);
  std::vector<LabeledLine> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto parsed = korpus::parse_tweet_line(line);
    if (!std::holds_alternative<korpus::TweetRecord>(parsed)) {
      korpus::raise(korpus::Errc::FormatError,
                    path + ": bad record on line " + std::to_string(line_no));
    }
    LabeledLine out;
    out.record = std::move(std::get<korpus::TweetRecord>(parsed));
    const json j = json::parse(line, nullptr, false);
    if (j.contains("label") && j["label"].is_string()) {
      out.label = korpus::cascade_label_from_string(j["label"].get<std::string>());
      if (!out.label) {
        korpus::raise(korpus::Errc::FormatError,
                      path + ": unknown label on line " + std::to_string(line_no));
      }
    }
    lines.push_back(std::move(out));
  }
  return lines;
}

std::string labeled_record_line(const korpus::TweetRecord& record, korpus::CascadeLabel label) {
  ordered_json j = ordered_json::parse(korpus::record_to_json_line(record));
  j["label"] = korpus::to_string(label);
  return j.dump();
}

korpus::EmbeddingLookupFn embedding_map_lookup(
    std::shared_ptr<std::unordered_map<std::string, std::vector<float>>> map) {
  return [map](const std::string& id) -> std::optional<std::vector<float>> {
    const auto it = map->find(id);
    if (it == map->end()) return std::nullopt;
    return it->second;
  };
}

std::shared_ptr<std::unordered_map<std::string, std::vector<float>>> load_embedding_map(
    const std::string& path) {
  auto map = std::make_shared<std::unordered_map<std::string, std::vector<float>>>();
  for (korpus::EmbeddingRecord& rec : korpus::load_embeddings(path)) {
    (*map)[rec.id] = std::move(rec.vector);
  }
  return map;
}

// ---------------------------------------------------------------------------
// subcommand handlers

void run_ingest(const std::string& input, const std::string& output, const std::string& report_path) {
  auto out = open_output(output);
  const korpus::IngestReport report = korpus::ingest_file(input, [&](korpus::TweetRecord&& rec) {
    out << korpus::record_to_json_line(rec) << '\n';
  });
  const std::string report_json = korpus::report_to_json(report);
  if (report_path.empty()) {
    std::cerr << report_json << '\n';
  } else {
    auto rep = open_output(report_path);
    rep << report_json << '\n';
  }
}

void run_geofence(const std::string& input, const std::string& cities, const std::string& output,
                  double radius_km) {
  const korpus::CityRegistry registry = korpus::load_city_registry_csv(cities, radius_km);
  auto out = open_output(output);
  std::uint64_t assigned = 0, unassigned = 0, no_geo = 0;
  korpus::ingest_file(input, [&](korpus::TweetRecord&& rec) {
    if (rec.geo) {
      rec.city = korpus::assign_city(*rec.geo, registry);
      rec.city ? ++assigned : ++unassigned;
    } else {
      rec.city.reset();
      ++no_geo;
    }
    out << korpus::record_to_json_line(rec) << '\n';
  });
  std::cerr << "geofence: " << assigned << " assigned, " << unassigned
            << " outside every fence, " << no_geo << " without coordinates\n";
}

std::vector<korpus::TrainSample> read_train_samples(const std::string& path, bool registry_labels) {
  auto in = open_input(path);
  std::vector<korpus::TrainSample> corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("text") || !j["text"].is_string() ||
        !j.contains("label") || !j["label"].is_string()) {
      korpus::raise(korpus::Errc::FormatError,
                    path + ": expected {\"text\",\"label\"} on line " + std::to_string(line_no));
    }
    const std::string label = j["label"].get<std::string>();
    if (registry_labels && !korpus::is_registered_language(label)) {
      korpus::raise(korpus::Errc::UnknownLabel,
                    path + ": label '" + label + "' is not in the language registry (line " +
                        std::to_string(line_no) + ")");
    }
    corpus.push_back({korpus::normalize_text(j["text"].get<std::string>()), label});
  }
  return corpus;
}

void run_train_langid(const std::string& input, const std::string& model_path,
                      const korpus::NgramConfig& cfg, const korpus::NgramTrainOptions& options,
                      bool registry_labels) {
  const auto corpus = read_train_samples(input, registry_labels);
  const korpus::NgramTrainResult result = korpus::train_ngram_model(corpus, cfg, options);
  korpus::save_ngram_model(result.model, model_path);
  std::cerr << "train-langid: " << corpus.size() << " samples, " << result.model.labels.size()
            << " labels, final epoch loss " << result.epoch_loss.back() << '\n';
}

void run_filter_foreign(const std::string& input, const std::string& model_path,
                        const std::string& output, const std::string& rejected_path,
                        double threshold) {
  const korpus::NgramLinearModel model = korpus::load_ngram_model(model_path);
  auto out = open_output(output);
  std::ofstream rejected;
  if (!rejected_path.empty()) rejected = open_output(rejected_path);
  std::uint64_t kept = 0, dropped = 0;
  korpus::ingest_file(input, [&](korpus::TweetRecord&& rec) {
    if (korpus::is_foreign(model, rec.text_norm, threshold)) {
      ++dropped;
      if (rejected.is_open()) rejected << korpus::record_to_json_line(rec) << '\n';
    } else {
      ++kept;
      out << korpus::record_to_json_line(rec) << '\n';
    }
  });
  std::cerr << "filter-foreign: kept " << kept << ", filtered " << dropped << '\n';
}

void run_train_formality(const std::string& embeddings_path, const std::string& head_path,
                         const korpus::FormalityHeadConfig& cfg, double lr, int batch_size,
                         std::uint64_t seed, const std::array<double, 3>& fractions,
                         const std::string& metrics_path) {
  const korpus::EmbeddingDataset data = korpus::load_embeddings(embeddings_path);
  std::vector<std::string> labels;
  labels.reserve(data.size());
  for (const korpus::EmbeddingRecord& rec : data) {
    if (!rec.label) {
      korpus::raise(korpus::Errc::UnlabeledData, "embedding " + rec.id + " has no label");
    }
    labels.emplace_back(korpus::to_string(*rec.label));
  }
  const korpus::SplitIndices split = korpus::stratified_split(labels, fractions, seed);

  korpus::EmbeddingDataset train_set;
  train_set.reserve(split.train.size());
  for (std::size_t i : split.train) train_set.push_back(data[i]);
  const korpus::HeadTrainResult result = korpus::train_head(train_set, cfg, lr, seed, batch_size);
  korpus::save_head(result.head, head_path);

  const auto evaluate = [&](const std::vector<std::size_t>& part) {
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(part.size());
    for (std::size_t i : part) {
      const auto predicted = korpus::classify_formality(result.head, data[i].vector);
      pairs.emplace_back(korpus::to_string(*data[i].label), korpus::to_string(predicted.label));
    }
    return korpus::confusion_matrix(pairs, {"formal", "informal"});
  };

  const korpus::ConfusionMatrix test_cm = evaluate(split.test);
  const korpus::ClassMetrics test_metrics = korpus::compute_metrics(test_cm);
  std::cerr << "train-formality: split " << split.train.size() << '/' << split.test.size() << '/'
            << split.validation.size() << ", final epoch loss " << result.epoch_loss.back() << '\n';
  std::cout << "test split\n" << korpus::metrics_table(test_metrics, test_cm.labels);
  const korpus::ConfusionMatrix val_cm = evaluate(split.validation);
  const korpus::ClassMetrics val_metrics = korpus::compute_metrics(val_cm);
  std::cout << "validation split\n" << korpus::metrics_table(val_metrics, val_cm.labels);
  if (!metrics_path.empty()) {
    auto out = open_output(metrics_path);
    out << korpus::metrics_to_json(test_metrics, test_cm.labels) << '\n';
  }
}

void run_filter_formal(const std::string& input, const std::string& embeddings_path,
                       const std::string& head_path, const std::string& output,
                       const std::string& rejected_path, const std::string& quarantine_path) {
  const korpus::FormalityHead head = korpus::load_head(head_path);
  const auto embeddings = load_embedding_map(embeddings_path);
  auto out = open_output(output);
  std::ofstream rejected, quarantine;
  if (!rejected_path.empty()) rejected = open_output(rejected_path);
  if (!quarantine_path.empty()) quarantine = open_output(quarantine_path);
  std::uint64_t informal = 0, formal = 0, missing = 0;
  korpus::ingest_file(input, [&](korpus::TweetRecord&& rec) {
    const auto it = embeddings->find(rec.id);
    if (it == embeddings->end()) {
      ++missing;
      if (quarantine.is_open()) quarantine << korpus::record_to_json_line(rec) << '\n';
      return;
    }
    if (korpus::classify_formality(head, it->second).label == korpus::FormalityLabel::Formal) {
      ++formal;
      if (rejected.is_open()) rejected << korpus::record_to_json_line(rec) << '\n';
    } else {
      ++informal;
      out << korpus::record_to_json_line(rec) << '\n';
    }
  });
  std::cerr << "filter-formal: kept " << informal << " informal, filtered " << formal
            << " formal, quarantined " << missing << " without embeddings\n";
}

void run_train_region(const std::string& input, const std::string& model_path,
                      const korpus::RegionTrainOptions& options) {
  const auto lines = read_labeled_records(input);
  std::vector<korpus::TweetRecord> records;
  std::vector<korpus::CascadeLabel> labels;
  std::uint64_t skipped = 0;
  for (const LabeledLine& line : lines) {
    if (line.label != korpus::CascadeLabel::Informal || !line.record.city) {
      ++skipped;
      continue;
    }
    records.push_back(line.record);
    labels.push_back(*line.label);
  }
  const korpus::RegionTrainResult result = korpus::train_region_model(records, labels, options);
  korpus::save_ngram_model(result.model.model, model_path);
  std::cerr << "train-region: " << records.size() << " informal records across "
            << result.city_counts.size() << " cities (" << skipped
            << " skipped: non-informal or unassigned)\n";
  std::cerr << "train-region: class balance";
  for (const auto& [city, count] : result.city_counts) std::cerr << ' ' << city << '=' << count;
  std::cerr << '\n';
}

void run_classify_region(const std::string& input, const std::string& model_path,
                         const std::string& output) {
  const korpus::RegionModel model{korpus::load_ngram_model(model_path)};
  auto out = open_output(output);
  korpus::ingest_file(input, [&](korpus::TweetRecord&& rec) {
    const korpus::LanguagePrediction pred = korpus::predict_region(model, rec.text_norm);
    ordered_json j = ordered_json::parse(korpus::record_to_json_line(rec));
    j["predicted_city"] = pred.label;
    j["probability"] = pred.probabilities[pred.label_index];
    out << j.dump() << '\n';
  });
}

void run_cascade_cmd(const std::string& input, const std::string& langid_path,
                     const std::string& head_path, const std::string& embeddings_path,
                     const std::string& output, const std::string& quarantine_path,
                     double threshold, int jobs) {
  const korpus::NgramLinearModel langid_model = korpus::load_ngram_model(langid_path);
  const korpus::FormalityHead head = korpus::load_head(head_path);
  const auto embeddings = load_embedding_map(embeddings_path);

  auto [records, report] = korpus::read_records(input);
  if (report.records_rejected > 0) {
    std::cerr << "cascade: skipped " << report.records_rejected << " malformed input lines\n";
  }
  const korpus::CascadeOutcome outcome = korpus::run_cascade(
      records, langid_model, threshold, head, embedding_map_lookup(embeddings), jobs);

  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (jobs > 1) {
    // parallel runs emit rows sorted by record id
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return records[a].id < records[b].id; });
  }

  auto out = open_output(output);
  std::ofstream quarantine;
  if (!quarantine_path.empty()) quarantine = open_output(quarantine_path);
  for (std::size_t i : order) {
    if (outcome.labels[i]) {
      out << labeled_record_line(records[i], *outcome.labels[i]) << '\n';
    } else if (quarantine.is_open()) {
      quarantine << korpus::record_to_json_line(records[i]) << '\n';
    }
  }
  std::cerr << "cascade: " << outcome.foreign << " foreign, " << outcome.formal << " formal, "
            << outcome.informal << " informal, " << outcome.quarantined << " quarantined\n";
}

void run_tabulate(const std::string& input, const std::string& table, const std::string& cities,
                  const std::string& out_path, bool totals) {
  std::vector<korpus::CityTabulation> rows;
  if (!table.empty()) {
    rows = korpus::read_tabulation_csv(table);
    for (const korpus::CityTabulation& row : rows) {
      if (!korpus::tabulation_identities_hold(row)) {
        korpus::raise(korpus::Errc::FormatError,
                      table + ": row " + row.city + " violates the count identities");
      }
    }
  } else {
    korpus::CityRegistry registry;
    if (!cities.empty()) registry = korpus::load_city_registry_csv(cities);
    korpus::CityTabulator tabulator;
    for (const LabeledLine& line : read_labeled_records(input)) {
      if (!line.label) {
        korpus::raise(korpus::Errc::FormatError,
                      input + ": record " + line.record.id + " has no cascade label");
      }
      tabulator.add(line.record.city, *line.label);
    }
    rows = tabulator.rows(cities.empty() ? nullptr : &registry);
  }
  std::ostringstream text;
  korpus::write_tabulation_csv(text, rows, totals);
  emit_text(out_path, text.str());
}

void run_stats(const std::string& input, const std::string& table, const std::string& out_path) {
  korpus::CorpusStatistics stats;
  if (!table.empty()) {
    const auto rows = korpus::read_tabulation_csv(table);
    stats = korpus::summarize_statistics(rows);
  } else {
    std::uint64_t total = 0, foreign = 0, formal = 0, informal = 0;
    for (const LabeledLine& line : read_labeled_records(input)) {
      if (!line.label) {
        korpus::raise(korpus::Errc::FormatError,
                      input + ": record " + line.record.id + " has no cascade label");
      }
      ++total;
      switch (*line.label) {
        case korpus::CascadeLabel::Foreign: ++foreign; break;
        case korpus::CascadeLabel::FormalIndonesian: ++formal; break;
        case korpus::CascadeLabel::Informal: ++informal; break;
      }
    }
    stats = korpus::summarize_statistics(total, foreign, formal, informal);
  }
  emit_text(out_path, korpus::statistics_to_json(stats) + "\n");
}

void run_dialect_dist(const std::string& wordlists, const std::string& out_path) {
  const auto lists = korpus::load_wordlists_csv(wordlists);
  const korpus::DistanceMatrix matrix = korpus::pairwise_distance_matrix(lists);
  std::ostringstream text;
  korpus::write_distance_matrix_csv(text, matrix);
  emit_text(out_path, text.str());
}

void run_eval(const std::string& pairs_path, const std::string& labels_csv,
              const std::string& json_path) {
  const auto rows = korpus::read_csv(pairs_path);
  if (rows.empty() || rows.front().size() < 2 || korpus::trim(rows.front()[0]) != "true" ||
      korpus::trim(rows.front()[1]) != "predicted") {
    korpus::raise(korpus::Errc::FormatError, pairs_path + ": expected header true,predicted");
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() < 2) {
      korpus::raise(korpus::Errc::FormatError, pairs_path + ": short row " + std::to_string(r + 1));
    }
    pairs.emplace_back(korpus::trim(rows[r][0]), korpus::trim(rows[r][1]));
  }
  std::vector<std::string> labels;
  if (!labels_csv.empty()) {
    for (const std::string& label : korpus::split_csv_line(labels_csv)) {
      labels.push_back(korpus::trim(label));
    }
  } else {
    std::set<std::string> seen;
    for (const auto& [t, p] : pairs) {
      seen.insert(t);
      seen.insert(p);
    }
    labels.assign(seen.begin(), seen.end());
  }
  const korpus::ConfusionMatrix cm = korpus::confusion_matrix(pairs, labels);
  const korpus::ClassMetrics metrics = korpus::compute_metrics(cm);
  std::cout << korpus::metrics_table(metrics, labels);
  if (!json_path.empty()) {
    auto out = open_output(json_path);
    out << korpus::metrics_to_json(metrics, labels) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"korpus: curation pipeline for geotagged low-resource-language corpora"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value configuration file (flags override it)");

  RunConfig run;
  app.add_option("--seed", run.seed, "seed for every randomized stage")->capture_default_str();
  app.add_option("--jobs,-j", run.jobs, "worker threads for record-parallel stages")
      ->capture_default_str();
  app.add_option("--foreign-threshold", run.foreign_threshold,
                 "probability a foreign argmax must clear")
      ->capture_default_str();
  app.add_option("--radius-km", run.radius_km, "default geofence radius")->capture_default_str();
  app.add_option("--split-train", run.fractions[0], "train fraction")->capture_default_str();
  app.add_option("--split-test", run.fractions[1], "test fraction")->capture_default_str();
  app.add_option("--split-validation", run.fractions[2], "validation fraction")
      ->capture_default_str();

  // ingest
  std::string in_path, out_path, report_path;
  auto* ingest = app.add_subcommand("ingest", "parse a raw JSONL dump into canonical records");
  ingest->add_option("--input", in_path, "raw JSONL file")->required();
  ingest->add_option("--output", out_path, "canonical records JSONL")->required();
  ingest->add_option("--report", report_path, "write the ingest report here instead of stderr");
  ingest->callback([&] { run_ingest(in_path, out_path, report_path); });

  // geofence
  std::string cities_path;
  auto* geofence = app.add_subcommand("geofence", "assign each geotagged record to the nearest city");
  geofence->add_option("--input", in_path, "records JSONL")->required();
  geofence->add_option("--cities", cities_path, "cities CSV (name,lat,lon,radius_km)")->required();
  geofence->add_option("--output", out_path, "records JSONL with city assignments")->required();
  geofence->callback([&] { run_geofence(in_path, cities_path, out_path, run.radius_km); });

  // train-langid
  korpus::NgramConfig ngram_cfg;
  int ngram_epochs = 5;
  double ngram_lr = 2.0;
  bool any_labels = false;
  std::string model_path;
  auto* train_langid = app.add_subcommand("train-langid", "train the language-ID n-gram model");
  train_langid->add_option("--input", in_path, "labeled JSONL: {\"text\",\"label\"}")->required();
  train_langid->add_option("--model", model_path, "output model file")->required();
  train_langid->add_flag("--any-labels", any_labels,
                         "accept labels outside the language registry (n-gram baselines)");
  train_langid->add_option("--epochs", ngram_epochs)->capture_default_str();
  train_langid->add_option("--lr", ngram_lr)->capture_default_str();
  train_langid->add_option("--n-min", ngram_cfg.n_min)->capture_default_str();
  train_langid->add_option("--n-max", ngram_cfg.n_max)->capture_default_str();
  train_langid->add_option("--buckets", ngram_cfg.bucket_count)->capture_default_str();
  train_langid->add_option("--dim", ngram_cfg.embedding_dim)->capture_default_str();
  train_langid->callback([&] {
    korpus::NgramTrainOptions options;
    options.epochs = ngram_epochs;
    options.lr = ngram_lr;
    options.seed = run.seed;
    run_train_langid(in_path, model_path, ngram_cfg, options, !any_labels);
  });

  // filter-foreign
  std::string rejected_path;
  auto* filter_foreign = app.add_subcommand("filter-foreign", "drop records in a foreign language");
  filter_foreign->add_option("--input", in_path, "records JSONL")->required();
  filter_foreign->add_option("--model", model_path, "language-ID model")->required();
  filter_foreign->add_option("--output", out_path, "records that pass the filter")->required();
  filter_foreign->add_option("--rejected", rejected_path, "write filtered records here");
  filter_foreign->callback(
      [&] { run_filter_foreign(in_path, model_path, out_path, rejected_path, run.foreign_threshold); });

  // train-formality
  korpus::FormalityHeadConfig head_cfg;
  double head_lr = 0.05;
  int head_batch = 32;
  std::string embeddings_path, head_path, metrics_path;
  auto* train_formality =
      app.add_subcommand("train-formality", "train the formal-vs-informal head on embeddings");
  train_formality->add_option("--embeddings", embeddings_path, "labeled embeddings (.emb or JSONL)")
      ->required();
  train_formality->add_option("--head", head_path, "output head file")->required();
  train_formality->add_option("--epochs", head_cfg.epochs)->capture_default_str();
  train_formality->add_option("--lr", head_lr)->capture_default_str();
  train_formality->add_option("--batch", head_batch)->capture_default_str();
  train_formality->add_option("--metrics", metrics_path, "write test-split metrics JSON here");
  train_formality->callback([&] {
    run_train_formality(embeddings_path, head_path, head_cfg, head_lr, head_batch, run.seed,
                        run.fractions, metrics_path);
  });

  // filter-formal
  std::string quarantine_path;
  auto* filter_formal = app.add_subcommand("filter-formal", "drop records classified as formal");
  filter_formal->add_option("--input", in_path, "records JSONL")->required();
  filter_formal->add_option("--embeddings", embeddings_path, "embeddings keyed by record id")
      ->required();
  filter_formal->add_option("--head", head_path, "formality head file")->required();
  filter_formal->add_option("--output", out_path, "informal records")->required();
  filter_formal->add_option("--rejected", rejected_path, "write formal records here");
  filter_formal->add_option("--quarantine", quarantine_path, "records without embeddings");
  filter_formal->callback([&] {
    run_filter_formal(in_path, embeddings_path, head_path, out_path, rejected_path, quarantine_path);
  });

  // train-region
  bool region_weights = false;
  auto* train_region = app.add_subcommand("train-region", "train the region classifier");
  train_region->add_option("--input", in_path, "cascade-labeled records JSONL")->required();
  train_region->add_option("--model", model_path, "output model file")->required();
  train_region->add_option("--epochs", ngram_epochs)->capture_default_str();
  train_region->add_option("--lr", ngram_lr)->capture_default_str();
  train_region->add_option("--buckets", ngram_cfg.bucket_count)->capture_default_str();
  train_region->add_option("--dim", ngram_cfg.embedding_dim)->capture_default_str();
  train_region->add_flag("--class-weights", region_weights,
                         "weight cities by inverse frequency during training");
  train_region->callback([&] {
    korpus::RegionTrainOptions options;
    options.config = ngram_cfg;
    options.epochs = ngram_epochs;
    options.lr = ngram_lr;
    options.seed = run.seed;
    options.inverse_frequency_weights = region_weights;
    run_train_region(in_path, model_path, options);
  });

  // classify-region
  auto* classify_region = app.add_subcommand("classify-region", "predict each record's region");
  classify_region->add_option("--input", in_path, "records JSONL")->required();
  classify_region->add_option("--model", model_path, "region model file")->required();
  classify_region->add_option("--output", out_path, "records with predicted_city")->required();
  classify_region->callback([&] { run_classify_region(in_path, model_path, out_path); });

  // cascade
  std::string langid_path;
  auto* cascade = app.add_subcommand("cascade", "run the full foreign/formal/informal cascade");
  cascade->add_option("--input", in_path, "records JSONL")->required();
  cascade->add_option("--langid", langid_path, "language-ID model")->required();
  cascade->add_option("--head", head_path, "formality head")->required();
  cascade->add_option("--embeddings", embeddings_path, "embeddings keyed by record id")->required();
  cascade->add_option("--output", out_path, "labeled records JSONL")->required();
  cascade->add_option("--quarantine", quarantine_path, "records without embeddings");
  cascade->callback([&] {
    run_cascade_cmd(in_path, langid_path, head_path, embeddings_path, out_path, quarantine_path,
                    run.foreign_threshold, run.jobs);
  });

  // tabulate
  std::string table_path;
  bool totals = false;
  auto* tabulate = app.add_subcommand("tabulate", "per-city tabulation of labeled records");
  tabulate->add_option("--input", in_path, "cascade-labeled records JSONL");
  tabulate->add_option("--table", table_path, "validate and re-emit an existing tabulation CSV");
  tabulate->add_option("--cities", cities_path, "cities CSV for anchor coordinates");
  tabulate->add_option("--out", out_path, "output CSV (stdout when omitted)");
  tabulate->add_flag("--totals", totals, "append a TOTAL row");
  tabulate->callback([&] {
    if (in_path.empty() == table_path.empty()) {
      throw CLI::ValidationError("tabulate", "give exactly one of --input or --table");
    }
    run_tabulate(in_path, table_path, cities_path, out_path, totals);
  });

  // stats
  auto* stats = app.add_subcommand("stats", "corpus statistics from labels or a tabulation");
  stats->add_option("--input", in_path, "cascade-labeled records JSONL");
  stats->add_option("--table", table_path, "tabulation CSV");
  stats->add_option("--out", out_path, "output JSON (stdout when omitted)");
  stats->callback([&] {
    if (in_path.empty() == table_path.empty()) {
      throw CLI::ValidationError("stats", "give exactly one of --input or --table");
    }
    run_stats(in_path, table_path, out_path);
  });

  // dialect-dist
  std::string wordlists_path;
  auto* dialect = app.add_subcommand("dialect-dist", "lexical distance matrix over locale wordlists");
  dialect->add_option("--wordlists", wordlists_path, "CSV: gloss,<locale1>,<locale2>,...")
      ->required();
  dialect->add_option("--out", out_path, "output CSV (stdout when omitted)");
  dialect->callback([&] { run_dialect_dist(wordlists_path, out_path); });

  // eval
  std::string pairs_path, labels_csv, json_path;
  auto* eval = app.add_subcommand("eval", "precision/recall/F1 from (true,predicted) pairs");
  eval->add_option("--pairs", pairs_path, "CSV with header true,predicted")->required();
  eval->add_option("--labels", labels_csv, "comma-separated label order (default: observed)");
  eval->add_option("--json", json_path, "write the metrics JSON here");
  eval->callback([&] { run_eval(pairs_path, labels_csv, json_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\nrun 'korpus --help' for usage\n";
    return 1;
  } catch (const korpus::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

#include "modality/analyze.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <utility>

#include "modality/errors.hpp"
#include "modality/similarity.hpp"
#include "modality/stats.hpp"
#include "modality/version.hpp"
#include "modality/wordclass.hpp"

namespace modality {

namespace {

namespace fs = std::filesystem;

fs::path resolve(const fs::path& base_dir, const std::string& given) {
  fs::path p(given);
  return p.is_absolute() ? p : base_dir / p;
}

uint64_t require_positive(const io::json& value, const char* key) {
  if (!value.is_number_unsigned() || value.get<uint64_t>() == 0) {
    throw UsageError(std::string("config '") + key +
                     "' must be a positive integer");
  }
  return value.get<uint64_t>();
}

std::string require_string(const io::json& value, const char* key) {
  if (!value.is_string() || value.get<std::string>().empty()) {
    throw UsageError(std::string("config '") + key +
                     "' must be a non-empty string");
  }
  return value.get<std::string>();
}

void reject_unknown_keys(const io::json& obj,
                         std::initializer_list<std::string_view> known,
                         const char* where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw UsageError(std::string("unknown ") + where + " key '" + key + "'");
    }
  }
}

}  // namespace

RunConfig parse_run_config(const io::json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw UsageError("config root must be an object");
  reject_unknown_keys(doc,
                      {"corpora", "k", "m_values", "total_sims", "seed",
                       "lexicon_path", "output_dir"},
                      "config");

  RunConfig config;

  if (!doc.contains("corpora") || !doc["corpora"].is_array() ||
      doc["corpora"].empty()) {
    throw UsageError("config 'corpora' must be a non-empty array");
  }
  std::set<std::string> labels;
  for (const auto& entry : doc["corpora"]) {
    if (!entry.is_object()) throw UsageError("each corpus must be an object");
    reject_unknown_keys(entry, {"label", "path", "kind", "ngram_cols"},
                        "corpus");
    CorpusSpec spec;
    if (!entry.contains("label")) throw UsageError("corpus missing 'label'");
    spec.label = require_string(entry["label"], "label");
    if (!labels.insert(spec.label).second) {
      throw UsageError("duplicate corpus label '" + spec.label + "'");
    }
    if (!entry.contains("path")) throw UsageError("corpus missing 'path'");
    spec.path_given = require_string(entry["path"], "path");
    spec.path_resolved = resolve(base_dir, spec.path_given);
    if (!entry.contains("kind")) throw UsageError("corpus missing 'kind'");
    spec.kind = corpus_kind_from_string(require_string(entry["kind"], "kind"));
    if (entry.contains("ngram_cols")) {
      uint64_t cols = require_positive(entry["ngram_cols"], "ngram_cols");
      if (cols != 2 && cols != 5) {
        throw UsageError("config 'ngram_cols' must be 2 or 5");
      }
      spec.ngram_cols = static_cast<int>(cols);
    }
    config.corpora.push_back(std::move(spec));
  }

  if (doc.contains("k")) {
    uint64_t k = require_positive(doc["k"], "k");
    if (k > 1000000) throw UsageError("config 'k' is implausibly large");
    config.k = static_cast<uint32_t>(k);
  }
  if (doc.contains("m_values")) {
    if (!doc["m_values"].is_array() || doc["m_values"].empty()) {
      throw UsageError("config 'm_values' must be a non-empty array");
    }
    config.m_values.clear();
    for (const auto& v : doc["m_values"]) {
      config.m_values.push_back(
          static_cast<uint32_t>(require_positive(v, "m_values")));
    }
  }
  if (doc.contains("total_sims")) {
    config.total_sims = require_positive(doc["total_sims"], "total_sims");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      throw UsageError("config 'seed' must be a non-negative integer");
    }
    config.seed = doc["seed"].get<uint64_t>();
  }
  if (doc.contains("lexicon_path")) {
    config.lexicon_given = require_string(doc["lexicon_path"], "lexicon_path");
    config.lexicon_resolved = resolve(base_dir, config.lexicon_given);
  }
  if (doc.contains("output_dir")) {
    config.output_dir =
        resolve(base_dir, require_string(doc["output_dir"], "output_dir"));
  } else {
    config.output_dir = resolve(base_dir, "out");
  }
  return config;
}

RunConfig load_run_config(const fs::path& config_path) {
  std::ifstream in(config_path);
  if (!in) throw IoError("no such config: " + config_path.string());
  io::json doc;
  try {
    doc = io::json::parse(in);
  } catch (const io::json::parse_error& e) {
    throw UsageError("config " + config_path.string() + ": " + e.what());
  }
  return parse_run_config(doc, config_path.parent_path());
}

namespace {

// Collects the bundle as it is produced: every emitted file is written
// atomically and recorded for the manifest, and every stage outcome is
// recorded whether it ran clean, failed, or could not run at all.
class BundleWriter {
 public:
  explicit BundleWriter(fs::path output_dir)
      : output_dir_(std::move(output_dir)) {}

  void emit(const std::string& rel_path, std::string_view content) {
    io::atomic_write_file(output_dir_ / rel_path, content);
    files_.push_back({rel_path, content.size(), io::fnv1a64_bytes(content)});
  }

  // Runs one pipeline stage, converting a thrown analysis or I/O error
  // into a recorded failure instead of aborting the bundle.
  template <typename Fn>
  bool stage(const std::string& name, Fn&& body) {
    StageStatus status{name, "ok", ""};
    bool ok = true;
    try {
      body();
    } catch (const std::exception& e) {
      status.status = "error";
      status.error = e.what();
      ok = false;
    }
    stages_.push_back(std::move(status));
    return ok;
  }

  void skip(const std::string& name, const std::string& reason) {
    stages_.push_back({name, "error", "not run: " + reason});
  }

  io::json manifest_files_json() const {
    auto sorted = files_;
    std::sort(sorted.begin(), sorted.end(),
              [](const FileRecord& a, const FileRecord& b) {
                return a.path < b.path;
              });
    io::json arr = io::json::array();
    for (const auto& f : sorted) {
      io::json row;
      row["path"] = f.path;
      row["bytes"] = f.bytes;
      row["fnv1a64"] = io::to_hex16(f.checksum);
      arr.push_back(std::move(row));
    }
    return arr;
  }

  io::json stages_json() const {
    io::json arr = io::json::array();
    for (const auto& s : stages_) {
      io::json row;
      row["name"] = s.name;
      row["status"] = s.status;
      if (s.status == "error") row["error"] = s.error;
      arr.push_back(std::move(row));
    }
    return arr;
  }

  const std::vector<StageStatus>& stages() const { return stages_; }

  bool all_ok() const {
    return std::all_of(stages_.begin(), stages_.end(),
                       [](const StageStatus& s) { return s.status == "ok"; });
  }

 private:
  struct FileRecord {
    std::string path;
    uint64_t bytes;
    uint64_t checksum;
  };

  fs::path output_dir_;
  std::vector<FileRecord> files_;
  std::vector<StageStatus> stages_;
};

// The config echo deliberately leaves out output_dir (a machine-local
// location) and any thread count, so the manifest bytes depend only on
// what was analyzed, not on where or how fast.
io::json config_echo_json(const RunConfig& config) {
  io::json j;
  io::json corpora = io::json::array();
  for (const auto& spec : config.corpora) {
    io::json row;
    row["label"] = spec.label;
    row["path"] = spec.path_given;
    row["kind"] = to_string(spec.kind);
    if (spec.kind == CorpusKind::ngram) row["ngram_cols"] = spec.ngram_cols;
    corpora.push_back(std::move(row));
  }
  j["corpora"] = std::move(corpora);
  j["k"] = config.k;
  j["m_values"] = config.m_values;
  j["total_sims"] = config.total_sims;
  j["seed"] = config.seed;
  if (!config.lexicon_given.empty()) j["lexicon"] = config.lexicon_given;
  return j;
}

std::string format_double(const char* fmt, double value) {
  char buf[48];
  int n = std::snprintf(buf, sizeof(buf), fmt, value);
  return std::string(buf, static_cast<size_t>(n));
}

std::string diversity_csv(const std::vector<Population>& pops,
                          const std::vector<DiversityReport>& reports) {
  std::string out = "population,rmsd,rmsd_lower,rmsd_upper,rank_at_50\n";
  for (size_t i = 0; i < pops.size(); ++i) {
    out += pops[i].source_label;
    out += ',' + format_double("%.10g", reports[i].rmsd);
    out += ',' + format_double("%.10g", reports[i].rmsd_lower);
    out += ',' + format_double("%.10g", reports[i].rmsd_upper);
    out += ',' + std::to_string(reports[i].rank_at_50);
    out += '\n';
  }
  return out;
}

std::string nonmatching_csv(
    const std::vector<std::tuple<std::string, std::string, ClassProfile>>&
        rows) {
  std::string out = "population,versus,class,count\n";
  for (const auto& [label, versus, profile] : rows) {
    for (size_t c = 0; c < kWordClassCount; ++c) {
      out += label;
      out += ',';
      out += versus;
      out += ',';
      out += to_string(static_cast<WordClass>(c));
      out += ',' + std::to_string(profile.counts[c]);
      out += '\n';
    }
  }
  return out;
}

}  // namespace

AnalyzeResult cmd_analyze(const RunConfig& config, int threads) {
  const size_t n = config.corpora.size();
  BundleWriter bundle(config.output_dir);

  // Stage 1: ingest every corpus to a frequency table plus clean report.
  std::vector<std::optional<IngestResult>> ingested(n);
  for (size_t i = 0; i < n; ++i) {
    const CorpusSpec& spec = config.corpora[i];
    bundle.stage("ingest:" + spec.label, [&] {
      IngestOptions options;
      options.ngram_cols = spec.ngram_cols;
      IngestResult result = ingest_file(spec.path_resolved, spec.kind, options);
      bundle.emit("tables/" + spec.label + ".tsv",
                  io::frequency_table_to_tsv(result.table));
      bundle.emit("clean/" + spec.label + ".json",
                  io::clean_report_json(result.report).dump(2) + "\n");
      ingested[i] = std::move(result);
    });
  }

  // Stage 2: reduce each table to its top-k population and CDFs.
  std::vector<std::optional<Population>> pops(n);
  std::vector<std::optional<CdfSeries>> cdfs(n);
  for (size_t i = 0; i < n; ++i) {
    const std::string& label = config.corpora[i].label;
    if (!ingested[i]) {
      bundle.skip("population:" + label, "ingest failed for '" + label + "'");
      continue;
    }
    bundle.stage("population:" + label, [&] {
      Population pop = top_k(ingested[i]->table, config.k, label);
      CdfSeries series = cdf(pop);
      bundle.emit("populations/" + label + ".json",
                  io::population_json(pop).dump(2) + "\n");
      bundle.emit("cdf/" + label + ".csv", io::cdf_to_csv(series));
      bundle.emit("cdf_full/" + label + ".csv",
                  io::cdf_to_csv(cdf_full(ingested[i]->table, 2 * config.k)));
      pops[i] = std::move(pop);
      cdfs[i] = std::move(series);
    });
  }

  // Stage 3: per-population fits. Files land as each fit completes, so an
  // ill-conditioned model late in the list cannot take out the others.
  for (size_t i = 0; i < n; ++i) {
    const std::string& label = config.corpora[i].label;
    if (!pops[i]) {
      bundle.skip("fits:" + label, "no population for '" + label + "'");
      continue;
    }
    bundle.stage("fits:" + label, [&] {
      bundle.emit("fits/" + label + "_double_exp.json",
                  io::fit_json(fit_double_exponential(*cdfs[i])).dump(2) +
                      "\n");
      uint32_t w1 = config.k / 2;
      uint32_t w2 = 3 * config.k / 4;
      bundle.emit("fits/" + label + "_final_slope_" + std::to_string(w1) +
                      ".json",
                  io::fit_json(fit_final_slope(*cdfs[i], w1)).dump(2) + "\n");
      bundle.emit("fits/" + label + "_final_slope_" + std::to_string(w2) +
                      ".json",
                  io::fit_json(fit_final_slope(*cdfs[i], w2)).dump(2) + "\n");
      bundle.emit("fits/" + label + "_power_law.json",
                  io::fit_json(fit_power_law(*pops[i])).dump(2) + "\n");
    });
  }

  // Populations that made it; downstream cross-corpus stages use these.
  std::vector<Population> live;
  for (auto& p : pops) {
    if (p) live.push_back(*p);
  }

  if (live.empty()) {
    bundle.skip("diversity", "no populations available");
  } else {
    bundle.stage("diversity", [&] {
      std::vector<DiversityReport> reports;
      reports.reserve(live.size());
      for (const auto& pop : live) reports.push_back(diversity_report(pop));
      bundle.emit("diversity.csv", diversity_csv(live, reports));
    });
  }

  if (live.size() < 2) {
    bundle.skip("match_matrix", "need at least 2 populations");
    bundle.skip("confusion", "need at least 2 populations");
  } else {
    bundle.stage("match_matrix", [&] {
      bundle.emit("match_matrix.csv",
                  io::match_matrix_csv(match_matrix(live)));
    });
    bundle.stage("confusion", [&] {
      std::vector<ConfusionMatrix> matrices;
      SimilarityCurve curve =
          similarity_curve(live, config.m_values, config.total_sims,
                           config.seed, threads, &matrices);
      for (const auto& cm : matrices) {
        std::string stem = "confusion/m" + std::to_string(cm.m);
        bundle.emit(stem + ".csv", io::confusion_csv(cm));
        bundle.emit(stem + ".meta.json",
                    io::confusion_meta_json(cm).dump(2) + "\n");
      }
      bundle.emit("similarity_curve.csv", io::similarity_curve_csv(curve));
    });
  }

  if (!config.lexicon_resolved.empty()) {
    if (live.empty()) {
      bundle.skip("classes", "no populations available");
    } else {
      bundle.stage("classes", [&] {
        Lexicon lex = load_lexicon_file(config.lexicon_resolved);
        for (const auto& pop : live) {
          bundle.emit("classes/" + pop.source_label + ".csv",
                      io::class_profile_csv(classify_population(pop, lex)));
        }
        std::vector<std::tuple<std::string, std::string, ClassProfile>> rows;
        for (size_t i = 0; i < live.size(); ++i) {
          for (size_t j = i + 1; j < live.size(); ++j) {
            auto [only_i, only_j] =
                nonmatching_class_profile(live[i], live[j], lex);
            rows.emplace_back(live[i].source_label, live[j].source_label,
                              std::move(only_i));
            rows.emplace_back(live[j].source_label, live[i].source_label,
                              std::move(only_j));
          }
        }
        bundle.emit("classes/nonmatching.csv", nonmatching_csv(rows));
      });
    }
  }

  io::json manifest;
  manifest["tool"] = kToolName;
  manifest["version"] = kVersion;
  manifest["config"] = config_echo_json(config);
  manifest["stages"] = bundle.stages_json();
  manifest["files"] = bundle.manifest_files_json();

  AnalyzeResult result;
  result.stages = bundle.stages();
  result.manifest_path = config.output_dir / "manifest.json";
  result.ok = bundle.all_ok();
  io::atomic_write_file(result.manifest_path, manifest.dump(2) + "\n");
  return result;
}

}  // namespace modality

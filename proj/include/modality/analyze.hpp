#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "modality/ingest.hpp"
#include "modality/io.hpp"

namespace modality {

struct CorpusSpec {
  std::string label;
  std::string path_given;  // as written in the config (echoed in manifest)
  std::filesystem::path path_resolved;
  CorpusKind kind = CorpusKind::plain;
  int ngram_cols = 2;
};

struct RunConfig {
  std::vector<CorpusSpec> corpora;
  uint32_t k = 200;
  std::vector<uint32_t> m_values = {1, 2, 5, 8, 10};
  uint64_t total_sims = 120000;  // per m value
  uint64_t seed = 0;
  std::string lexicon_given;
  std::filesystem::path lexicon_resolved;
  std::filesystem::path output_dir = "out";
};

// Parses a config JSON document; relative corpus/lexicon/output paths
// resolve against base_dir (the config file's directory). Throws
// UsageError on structural problems (missing fields, duplicate labels).
RunConfig parse_run_config(const io::json& doc,
                           const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& config_path);

struct StageStatus {
  std::string name;
  std::string status;  // "ok" or "error"
  std::string error;   // message when status == "error"
};

struct AnalyzeResult {
  std::vector<StageStatus> stages;
  std::filesystem::path manifest_path;
  bool ok = false;  // true iff every stage ran clean
};

// Runs the whole pipeline on config's corpora: ingest -> populations ->
// CDFs -> fits -> diversity -> match matrix -> confusion + similarity ->
// class profiles, writing a report bundle under config.output_dir plus a
// manifest listing every emitted file with its checksum. A stage failure
// is recorded in the manifest and later stages still run where their
// inputs exist. The manifest bytes are a pure function of config + input
// file contents — never of thread count, absolute paths, or time.
AnalyzeResult cmd_analyze(const RunConfig& config, int threads = 1);

}  // namespace modality

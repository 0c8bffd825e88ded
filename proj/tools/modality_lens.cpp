// Command-line front end: wires the library's ingest, reduction, fitting,
// simulation, and reporting stages into subcommands. All randomness flows
// from --seed; outputs are byte-stable for a fixed seed and inputs.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "modality/analyze.hpp"
#include "modality/errors.hpp"
#include "modality/io.hpp"
#include "modality/similarity.hpp"
#include "modality/stats.hpp"
#include "modality/version.hpp"
#include "modality/wordclass.hpp"

namespace fs = std::filesystem;
using namespace modality;

namespace {

int threads_from_env() {
  const char* env = std::getenv("MODALITY_LENS_THREADS");
  if (!env || *env == '\0') return 1;
  char* end = nullptr;
  long value = std::strtol(env, &end, 10);
  if (*end != '\0' || value < 1 || value > 4096) {
    throw UsageError("MODALITY_LENS_THREADS must be a positive integer, got '" +
                     std::string(env) + "'");
  }
  return static_cast<int>(value);
}

std::string stem_of(const std::string& path) {
  std::string stem = fs::path(path).stem().string();
  return stem.empty() ? path : stem;
}

// Reads each TSV table and reduces it to a top-k population labeled by the
// file's stem.
std::vector<Population> load_populations(const std::vector<std::string>& paths,
                                         uint32_t k) {
  if (paths.size() < 2) {
    throw UsageError("need at least 2 table files, got " +
                     std::to_string(paths.size()));
  }
  std::vector<Population> pops;
  pops.reserve(paths.size());
  for (const auto& p : paths) {
    pops.push_back(top_k(io::read_frequency_table(p), k, stem_of(p)));
  }
  return pops;
}

TieMode tie_from_string(const std::string& name) {
  return name == "first_label" ? TieMode::first_label : TieMode::random;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corpus modality analyzer: word-frequency populations, "
               "distribution fits, and cross-corpus similarity"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  uint64_t seed = 0;
  uint32_t k = 200;
  int threads = 1;  // pre-parse: overridden by the env var, then the flag
  std::string output_dir = "out";
  app.add_option("--seed", seed, "Seed for every random stream")
      ->capture_default_str();
  auto* k_opt = app.add_option("--k", k, "Population size (top-k words)")
                    ->check(CLI::PositiveNumber)
                    ->capture_default_str();
  app.add_option("--threads", threads,
                 "Worker threads for simulations (default: "
                 "MODALITY_LENS_THREADS or 1); results do not depend on it")
      ->check(CLI::PositiveNumber);
  auto* outdir_opt =
      app.add_option("--output-dir", output_dir, "Directory for written files")
          ->capture_default_str();

  int exit_code = 0;

  // --- ingest ---------------------------------------------------------
  auto* cmd_ing = app.add_subcommand(
      "ingest", "Clean one corpus file into a word-frequency table");
  std::string ing_input, ing_kind, ing_label, ing_output;
  int ing_ngram_cols = 2;
  bool ing_strip_wrapper = false;
  cmd_ing->add_option("input", ing_input, "Corpus file")->required();
  cmd_ing->add_option("--kind", ing_kind,
                      "Corpus kind: ngram, twitter, irc, transcript, plain")
      ->required()
      ->check(CLI::IsMember({"ngram", "twitter", "irc", "transcript", "plain"}));
  cmd_ing->add_option("--ngram-cols", ing_ngram_cols,
                      "Columns per ngram record (2 or 5)")
      ->check(CLI::IsMember({2, 5}))
      ->capture_default_str();
  cmd_ing->add_flag("--irc-strip-wrapper", ing_strip_wrapper,
                    "Strip leading [timestamp] <nick> wrappers from IRC lines");
  cmd_ing->add_option("--label", ing_label,
                      "Corpus label (default: input file stem)");
  cmd_ing->add_option("--output", ing_output,
                      "Table file to write (default: <output-dir>/<label>.tsv)");
  cmd_ing->callback([&] {
    IngestOptions options;
    options.ngram_cols = ing_ngram_cols;
    options.irc_strip_wrapper = ing_strip_wrapper;
    IngestResult result =
        ingest_file(ing_input, corpus_kind_from_string(ing_kind), options);
    std::string label = ing_label.empty() ? stem_of(ing_input) : ing_label;
    fs::path out = ing_output.empty() ? fs::path(output_dir) / (label + ".tsv")
                                      : fs::path(ing_output);
    io::write_frequency_table(out, result.table);
    std::cout << io::clean_report_json(result.report).dump(2) << "\n";
    std::cerr << "wrote " << out.string() << " (" << result.table.unique()
              << " words, total " << result.table.total << ")\n";
  });

  // --- generate -------------------------------------------------------
  auto* cmd_gen = app.add_subcommand(
      "generate", "Sample a synthetic power-law corpus into a table");
  double gen_a = 6.0, gen_b = 1.6;
  uint64_t gen_draws = 1000000;
  std::string gen_output;
  cmd_gen->add_option("--a", gen_a, "Power-law offset a")
      ->capture_default_str();
  cmd_gen->add_option("--b", gen_b, "Power-law exponent b")
      ->capture_default_str();
  cmd_gen->add_option("--draws", gen_draws, "Words to sample")
      ->capture_default_str();
  cmd_gen->add_option("--output", gen_output,
                      "Table file to write (default: <output-dir>/synthetic.tsv)");
  cmd_gen->callback([&] {
    PowerLawModel model{gen_a, gen_b};
    FrequencyTable table = generate_zipf_corpus(model, k, gen_draws, seed);
    fs::path out = gen_output.empty() ? fs::path(output_dir) / "synthetic.tsv"
                                      : fs::path(gen_output);
    io::write_frequency_table(out, table);
    std::cerr << "wrote " << out.string() << " (" << table.unique()
              << " words, total " << table.total << ")\n";
  });

  // --- analyze --------------------------------------------------------
  auto* cmd_ana = app.add_subcommand(
      "analyze", "Run the full pipeline from a JSON config into a bundle");
  std::string ana_config;
  uint64_t ana_total_sims = 0;
  cmd_ana->add_option("--config", ana_config, "JSON run configuration")
      ->required();
  auto* ana_sims_opt =
      cmd_ana->add_option("--total-sims", ana_total_sims,
                          "Override simulations per m value")
          ->check(CLI::PositiveNumber);
  cmd_ana->callback([&] {
    RunConfig config = load_run_config(ana_config);
    // Command-line overrides beat config values, but only when given.
    if (k_opt->count() > 0) config.k = k;
    if (app.count("--seed") > 0) config.seed = seed;
    if (ana_sims_opt->count() > 0) config.total_sims = ana_total_sims;
    if (outdir_opt->count() > 0) config.output_dir = output_dir;
    AnalyzeResult result = cmd_analyze(config, threads);
    for (const auto& stage : result.stages) {
      std::cout << stage.status << "\t" << stage.name;
      if (stage.status != "ok") std::cout << "\t" << stage.error;
      std::cout << "\n";
    }
    std::cout << "manifest\t" << result.manifest_path.string() << "\n";
    if (!result.ok) {
      std::cerr << "one or more stages failed; see the manifest\n";
      exit_code = 1;
    }
  });

  // --- confusion ------------------------------------------------------
  auto* cmd_con = app.add_subcommand(
      "confusion", "Monte Carlo source-attribution matrix over populations");
  std::vector<std::string> con_tables;
  uint32_t con_m = 1;
  uint64_t con_sims = 120000;
  std::string con_tie = "random", con_meta;
  cmd_con->add_option("tables", con_tables, "Frequency table TSV files");
  cmd_con->add_option("--m", con_m, "Words per simulated sample")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_con->add_option("--sims", con_sims, "Total simulations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_con->add_option("--tie", con_tie, "Tie handling: random or first_label")
      ->check(CLI::IsMember({"random", "first_label"}))
      ->capture_default_str();
  cmd_con->add_option("--meta", con_meta,
                      "Also write exact tallies as JSON to this path");
  cmd_con->callback([&] {
    auto pops = load_populations(con_tables, k);
    ConfusionMatrix cm = run_confusion(pops, con_m, con_sims, seed, threads,
                                       tie_from_string(con_tie));
    if (!con_meta.empty()) {
      io::atomic_write_file(con_meta,
                            io::confusion_meta_json(cm).dump(2) + "\n");
    }
    std::cout << io::confusion_csv(cm);
  });

  // --- similarity -----------------------------------------------------
  auto* cmd_sim = app.add_subcommand(
      "similarity", "Similarity Index curve over sample sizes m");
  std::vector<std::string> sim_tables;
  std::vector<uint32_t> sim_m = {1, 2, 5, 8, 10};
  uint64_t sim_sims = 120000;
  cmd_sim->add_option("tables", sim_tables, "Frequency table TSV files");
  cmd_sim->add_option("--m", sim_m, "Sample sizes (words per simulation)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_sim->add_option("--sims", sim_sims, "Simulations per m value")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_sim->callback([&] {
    auto pops = load_populations(sim_tables, k);
    SimilarityCurve curve =
        similarity_curve(pops, sim_m, sim_sims, seed, threads);
    std::cout << io::similarity_curve_csv(curve);
  });

  // --- match ----------------------------------------------------------
  auto* cmd_mat = app.add_subcommand(
      "match", "Pairwise shared-word counts between populations");
  std::vector<std::string> mat_tables;
  cmd_mat->add_option("tables", mat_tables, "Frequency table TSV files");
  cmd_mat->callback([&] {
    std::cout << io::match_matrix_csv(match_matrix(load_populations(mat_tables, k)));
  });

  // --- classes --------------------------------------------------------
  auto* cmd_cls = app.add_subcommand(
      "classes", "Word-class profile of one population");
  std::string cls_table, cls_lexicon;
  cmd_cls->add_option("table", cls_table, "Frequency table TSV file")
      ->required();
  cmd_cls->add_option("--lexicon", cls_lexicon, "Word-class lexicon TSV")
      ->required();
  cmd_cls->callback([&] {
    Population pop =
        top_k(io::read_frequency_table(cls_table), k, stem_of(cls_table));
    Lexicon lex = load_lexicon_file(cls_lexicon);
    std::cout << io::class_profile_csv(classify_population(pop, lex));
  });

  // --- fit ------------------------------------------------------------
  auto* cmd_fit = app.add_subcommand(
      "fit", "Fit one model to a population's distribution");
  std::string fit_table, fit_model;
  uint32_t fit_window = 0;
  cmd_fit->add_option("table", fit_table, "Frequency table TSV file")
      ->required();
  cmd_fit->add_option("--model", fit_model,
                      "Model: double_exp, power_law, or final_slope")
      ->required()
      ->check(CLI::IsMember({"double_exp", "power_law", "final_slope"}));
  cmd_fit->add_option("--window", fit_window,
                      "Trailing ranks for final_slope (default: k/2)")
      ->check(CLI::PositiveNumber);
  cmd_fit->callback([&] {
    Population pop =
        top_k(io::read_frequency_table(fit_table), k, stem_of(fit_table));
    io::json result;
    if (fit_model == "double_exp") {
      result = io::fit_json(fit_double_exponential(cdf(pop)));
    } else if (fit_model == "power_law") {
      result = io::fit_json(fit_power_law(pop));
    } else {
      uint32_t window = fit_window ? fit_window : k / 2;
      result = io::fit_json(fit_final_slope(cdf(pop), window));
    }
    std::cout << result.dump(2) << "\n";
  });

  try {
    threads = threads_from_env();
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const AnalysisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "modality/frequency.hpp"
#include "modality/ingest.hpp"
#include "modality/similarity.hpp"
#include "modality/stats.hpp"
#include "modality/wordclass.hpp"

namespace modality::io {

// Key order in emitted JSON is part of the byte-stable output contract.
using json = nlohmann::ordered_json;

uint64_t fnv1a64_bytes(std::string_view data);
// Streaming checksum of a file's bytes. Throws IoError if unreadable.
uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string to_hex16(uint64_t value);

// Writes content to path via a temporary file plus rename, creating parent
// directories as needed, so a reader never observes a partial file.
void atomic_write_file(const std::filesystem::path& path,
                       std::string_view content);

// FrequencyTable TSV: header "#total=<N>\t#unique=<M>", then
// "word\tcount" rows sorted by descending count, ascending word.
std::string frequency_table_to_tsv(const FrequencyTable& table);
void write_frequency_table(const std::filesystem::path& path,
                           const FrequencyTable& table);
// Strict reader for the format above; validates the header totals.
FrequencyTable read_frequency_table(const std::filesystem::path& path);

json clean_report_json(const CleanReport& report);
json population_json(const Population& pop);

// CdfSeries CSV: "rank,cumulative".
std::string cdf_to_csv(const CdfSeries& series);

json fit_json(const DoubleExpFit& fit);
json fit_json(const PowerLawFitResult& fit);
json fit_json(const LinearFit& fit);

// Label-bordered integer grid.
std::string match_matrix_csv(const MatchMatrix& matrix);

// Label-bordered row-normalized frequency grid; exact tallies live in the
// meta JSON next to it.
std::string confusion_csv(const ConfusionMatrix& matrix);
json confusion_meta_json(const ConfusionMatrix& matrix);

// Long-form CSV "population,m,index".
std::string similarity_curve_csv(const SimilarityCurve& curve);

// CSV "class,count" over all eight classes.
std::string class_profile_csv(const ClassProfile& profile);

}  // namespace modality::io

#pragma once

#include <stdexcept>
#include <string>

namespace modality {

// Bad command-line usage or invalid configuration values. Exit code 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable input, unwritable output, or a malformed structured file
// (config JSON, lexicon, persisted table). Exit code 2.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation that cannot proceed on the given data: too few unique
// words, a fit that fails to converge, an empty tally row. Exit code 1.
class AnalysisError : public std::runtime_error {
 public:
  explicit AnalysisError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace modality

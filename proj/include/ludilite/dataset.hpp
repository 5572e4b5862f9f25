#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ludilite {

// Instance file: one JSON object per line with string fields
//   "id", "query", "description" and optionally "category".
// Prediction file: one JSON object per line with fields
//   "id", "seed" (string or integer run label) and "candidate".
// Blank lines are ignored.

struct Instance {
  std::string id;
  std::string query;
  std::string description;
  std::optional<std::string> category;

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct Prediction {
  std::string id;
  std::string seed;
  std::string candidate;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

class DatasetError : public std::runtime_error {
 public:
  DatasetError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::vector<Instance> read_instances(std::istream& in, const std::string& source = "<stream>");
std::vector<Instance> load_instances(const std::string& path);
void write_instances(std::ostream& out, std::span<const Instance> instances);

std::vector<Prediction> read_predictions(std::istream& in, const std::string& source = "<stream>");
std::vector<Prediction> load_predictions(const std::string& path);
void write_predictions(std::ostream& out, std::span<const Prediction> predictions);

inline constexpr std::size_t kDefaultMaxDescriptionTokens = 500;

// GDL token count of a description. Text after an unterminated string counts
// as a single extra token.
std::size_t description_length(const std::string& description);

std::vector<Instance> filter_by_length(std::span<const Instance> instances,
                                       std::size_t max_units = kDefaultMaxDescriptionTokens);

}  // namespace ludilite

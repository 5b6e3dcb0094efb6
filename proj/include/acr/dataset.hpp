#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "acr/pmf.hpp"

namespace acr {

struct Stimulus {
  std::string id;
  RatingCounts counts;

  bool operator==(const Stimulus&) const = default;
};

struct Dataset {
  std::string name;
  int categories = kDefaultCategories;
  std::vector<Stimulus> stimuli;

  bool operator==(const Dataset&) const = default;
};

// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed content; row is the 1-based line number (0 when not row-specific).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row) : std::runtime_error(what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// Wide format: header `stimulus_id,c1,...,cK`, then one row per stimulus.
// K is the number of columns after the id. Row order is preserved.
Dataset read_counts_csv(const std::filesystem::path& path);

// Long format: header `stimulus_id,rating`, one rating per row. Stimuli keep
// the order of their first appearance.
Dataset read_ratings_csv(const std::filesystem::path& path, int categories = kDefaultCategories);

void write_counts_csv(const Dataset& dataset, const std::filesystem::path& path);

// Smallest per-stimulus rating total (0 for an empty dataset).
std::int64_t min_total(const Dataset& dataset);

}  // namespace acr

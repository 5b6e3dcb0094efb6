#include "acr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace acr {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string row_message(const std::filesystem::path& path, std::size_t row, const std::string& what) {
  std::ostringstream msg;
  msg << path.string() << ": row " << row << ": " << what;
  return msg.str();
}

std::int64_t parse_count(std::string_view field, const std::filesystem::path& path, std::size_t row) {
  std::int64_t value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(row_message(path, row, "'" + std::string(field) + "' is not an integer"), row);
  }
  if (value < 0) throw ParseError(row_message(path, row, "negative count " + std::string(field)), row);
  return value;
}

// Non-empty lines with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string>> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!trim(line).empty()) lines.emplace_back(number, std::move(line));
  }
  if (in.bad()) throw IoError("error reading " + path.string());
  return lines;
}

}  // namespace

Dataset read_counts_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.size() < 2) throw ParseError(path.string() + ": no data rows", 0);
  const auto header = split(lines.front().second);
  if (header.size() < 3) {
    throw ParseError(row_message(path, lines.front().first, "header needs an id column and at least 2 count columns"),
                     lines.front().first);
  }
  Dataset ds;
  ds.name = path.stem().string();
  ds.categories = static_cast<int>(header.size()) - 1;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [row, text] = lines[i];
    const auto fields = split(text);
    if (fields.size() != header.size()) {
      std::ostringstream what;
      what << "expected " << header.size() << " columns, found " << fields.size();
      throw ParseError(row_message(path, row, what.str()), row);
    }
    std::string id(fields[0]);
    if (id.empty()) throw ParseError(row_message(path, row, "empty stimulus id"), row);
    if (!seen.insert(id).second) throw ParseError(row_message(path, row, "duplicate stimulus id " + id), row);
    std::vector<std::int64_t> counts;
    counts.reserve(ds.categories);
    for (std::size_t c = 1; c < fields.size(); ++c) counts.push_back(parse_count(fields[c], path, row));
    RatingCounts rc(std::move(counts));
    if (rc.total() < 1) throw ParseError(row_message(path, row, "stimulus " + id + " has no ratings"), row);
    ds.stimuli.push_back({std::move(id), std::move(rc)});
  }
  return ds;
}

Dataset read_ratings_csv(const std::filesystem::path& path, int categories) {
  if (categories < 2) throw DomainError("need at least 2 categories");
  const auto lines = read_lines(path);
  if (lines.size() < 2) throw ParseError(path.string() + ": no data rows", 0);
  if (split(lines.front().second).size() != 2) {
    throw ParseError(row_message(path, lines.front().first, "header must be stimulus_id,rating"),
                     lines.front().first);
  }
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<std::int64_t>> counts;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [row, text] = lines[i];
    const auto fields = split(text);
    if (fields.size() != 2) throw ParseError(row_message(path, row, "expected 2 columns"), row);
    std::string id(fields[0]);
    if (id.empty()) throw ParseError(row_message(path, row, "empty stimulus id"), row);
    const auto rating = parse_count(fields[1], path, row);
    if (rating < 1 || rating > categories) {
      std::ostringstream what;
      what << "rating " << rating << " outside 1.." << categories;
      throw ParseError(row_message(path, row, what.str()), row);
    }
    auto [it, inserted] = counts.try_emplace(id, std::vector<std::int64_t>(categories, 0));
    if (inserted) order.push_back(id);
    ++it->second[rating - 1];
  }
  Dataset ds;
  ds.name = path.stem().string();
  ds.categories = categories;
  for (auto& id : order) ds.stimuli.push_back({id, RatingCounts(std::move(counts[id]))});
  return ds;
}

void write_counts_csv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "stimulus_id";
  for (int k = 1; k <= dataset.categories; ++k) out << ",c" << k;
  out << '\n';
  for (const auto& s : dataset.stimuli) {
    out << s.id;
    for (auto c : s.counts.values()) out << ',' << c;
    out << '\n';
  }
  if (!out) throw IoError("error writing " + path.string());
}

std::int64_t min_total(const Dataset& dataset) {
  if (dataset.stimuli.empty()) return 0;
  std::int64_t m = dataset.stimuli.front().counts.total();
  for (const auto& s : dataset.stimuli) m = std::min(m, s.counts.total());
  return m;
}

}  // namespace acr

/*
 * Copyright 2026 The rrf Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rrf/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "rrf/error.hpp"

namespace rrf {

Dataset Dataset::Make(std::vector<std::string> feature_names, std::vector<FeatureKind> kinds,
                      std::vector<std::vector<double>> columns, std::vector<int> target,
                      std::vector<std::string> class_names, std::string target_name) {
  const std::size_t m = columns.size();
  if (m == 0) Fail(ErrorKind::kData, "dataset has no feature columns");
  if (feature_names.size() != m || kinds.size() != m)
    Fail(ErrorKind::kData, "feature names, kinds and columns disagree in count");
  if (target.empty()) Fail(ErrorKind::kData, "dataset has no rows");
  if (class_names.empty()) Fail(ErrorKind::kData, "dataset has no classes");
  const std::size_t n = target.size();
  for (std::size_t j = 0; j < m; ++j) {
    if (columns[j].size() != n)
      Fail(ErrorKind::kData, "column '" + feature_names[j] + "' has length " +
                                 std::to_string(columns[j].size()) + ", expected " + std::to_string(n));
    const FeatureKind& k = kinds[j];
    if (k.categorical) {
      if (k.levels.empty()) Fail(ErrorKind::kData, "categorical column '" + feature_names[j] + "' has no levels");
      std::vector<std::string> sorted = k.levels;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        Fail(ErrorKind::kData, "categorical column '" + feature_names[j] + "' has duplicate level names");
    }
    for (double v : columns[j]) {
      if (IsMissing(v)) continue;
      if (!std::isfinite(v)) Fail(ErrorKind::kData, "column '" + feature_names[j] + "' holds a non-finite value");
      if (k.categorical && (v < 0 || v >= static_cast<double>(k.arity()) || v != std::floor(v)))
        Fail(ErrorKind::kData, "column '" + feature_names[j] + "' holds an invalid level index");
    }
  }
  for (int y : target)
    if (y < 0 || static_cast<std::size_t>(y) >= class_names.size())
      Fail(ErrorKind::kData, "target holds an invalid class index");

  Dataset d;
  d.feature_names_ = std::move(feature_names);
  d.kinds_ = std::move(kinds);
  d.columns_ = std::move(columns);
  d.target_ = std::move(target);
  d.class_names_ = std::move(class_names);
  d.target_name_ = std::move(target_name);
  return d;
}

std::vector<double> Dataset::Row(std::size_t row) const {
  std::vector<double> out(columns_.size());
  for (std::size_t j = 0; j < columns_.size(); ++j) out[j] = columns_[j][row];
  return out;
}

bool Dataset::HasMissing() const {
  for (const auto& c : columns_)
    if (std::any_of(c.begin(), c.end(), IsMissing)) return true;
  return false;
}

bool Dataset::AllCategorical() const {
  return std::all_of(kinds_.begin(), kinds_.end(), [](const FeatureKind& k) { return k.categorical; });
}

Dataset Dataset::SelectRows(std::span<const std::size_t> rows) const {
  Dataset d;
  d.feature_names_ = feature_names_;
  d.kinds_ = kinds_;
  d.class_names_ = class_names_;
  d.target_name_ = target_name_;
  d.columns_.resize(columns_.size());
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    d.columns_[j].reserve(rows.size());
    for (std::size_t r : rows) d.columns_[j].push_back(columns_[j][r]);
  }
  d.target_.reserve(rows.size());
  for (std::size_t r : rows) d.target_.push_back(target_[r]);
  return d;
}

Dataset Dataset::WithTarget(std::vector<int> target) const {
  return Make(feature_names_, kinds_, columns_, std::move(target), class_names_, target_name_);
}

bool Dataset::operator==(const Dataset& other) const {
  if (feature_names_ != other.feature_names_ || kinds_ != other.kinds_ || target_ != other.target_ ||
      class_names_ != other.class_names_ || target_name_ != other.target_name_ || columns_.size() != other.columns_.size())
    return false;
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const auto& a = columns_[j];
    const auto& b = other.columns_[j];
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (IsMissing(a[i]) != IsMissing(b[i])) return false;
      if (!IsMissing(a[i]) && a[i] != b[i]) return false;
    }
  }
  return true;
}

namespace {

// RFC-4180 record reader: quoted fields, doubled quotes, embedded newlines,
// LF or CRLF line ends. Returns false at end of input.
bool ReadRecord(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  bool was_quoted = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !was_quoted && std::all_of(field.begin(), field.end(), [](char ch) { return ch == ' ' || ch == '\t'; })) {
      field.clear();
      in_quotes = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (c == '\n') {
      ++line;
      break;
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get(c);
      ++line;
      break;
    } else {
      field.push_back(c);
    }
  }
  if (!any) return false;
  if (in_quotes) Fail(ErrorKind::kData, "unterminated quoted field before line " + std::to_string(line + 1));
  fields.push_back(std::move(field));
  return true;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Parses a real literal. Non-finite spellings (nan, inf, infinity) parse but
// are reported through the returned value so the caller can treat them as missing.
std::optional<double> ParseReal(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

bool IsRecordBlank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && Trim(fields[0]).empty();
}

std::optional<long> ParseIndex(std::string_view s) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

Dataset ParseCsv(std::istream& in, const CsvOptions& options) {
  std::size_t line = 0;
  std::vector<std::string> header;
  if (!ReadRecord(in, header, line) || IsRecordBlank(header)) Fail(ErrorKind::kData, "empty file: no header row");
  for (auto& h : header) h = std::string(Trim(h));

  std::size_t target_col = header.size();
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == options.target) {
      target_col = j;
      break;
    }
  if (target_col == header.size()) {
    auto idx = ParseIndex(options.target);
    const long width = static_cast<long>(header.size());
    if (idx && *idx < 0) *idx += width;
    if (!idx || *idx < 0 || *idx >= width)
      Fail(ErrorKind::kData, "target column '" + options.target + "' not found in header");
    target_col = static_cast<std::size_t>(*idx);
  }
  if (header.size() < 2) Fail(ErrorKind::kData, "need at least one feature column besides the target");

  std::vector<std::vector<std::string>> cells(header.size());
  std::vector<std::string> fields;
  std::size_t rows = 0;
  while (true) {
    const std::size_t record_line = line + 1;
    if (!ReadRecord(in, fields, line)) break;
    if (IsRecordBlank(fields)) continue;
    if (fields.size() != header.size())
      Fail(ErrorKind::kData, "ragged row at line " + std::to_string(record_line) + ": " + std::to_string(fields.size()) +
                                 " cells, header has " + std::to_string(header.size()));
    for (std::size_t j = 0; j < fields.size(); ++j) cells[j].emplace_back(Trim(fields[j]));
    ++rows;
  }
  if (rows == 0) Fail(ErrorKind::kData, "empty file: header but no data rows");

  auto is_missing_token = [&](const std::string& s) { return s.empty() || s == options.missing_token; };

  std::vector<std::string> names;
  std::vector<FeatureKind> kinds;
  std::vector<std::vector<double>> columns;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j == target_col) continue;
    const auto& col = cells[j];
    std::vector<double> values(rows, kMissing);
    bool numeric = true;
    for (std::size_t i = 0; i < rows && numeric; ++i) {
      if (is_missing_token(col[i])) continue;
      auto v = ParseReal(col[i]);
      if (!v) numeric = false;
      else if (std::isfinite(*v)) values[i] = *v;
    }
    if (numeric) {
      kinds.push_back(FeatureKind::Numeric());
    } else {
      std::vector<std::string> levels;
      std::unordered_map<std::string, std::size_t> index;
      for (std::size_t i = 0; i < rows; ++i) {
        values[i] = kMissing;
        if (is_missing_token(col[i])) continue;
        if (auto v = ParseReal(col[i]); v && !std::isfinite(*v)) continue;
        auto [it, inserted] = index.try_emplace(col[i], levels.size());
        if (inserted) levels.push_back(col[i]);
        values[i] = static_cast<double>(it->second);
      }
      kinds.push_back(FeatureKind::Categorical(std::move(levels)));
    }
    names.push_back(header[j]);
    columns.push_back(std::move(values));
  }

  std::vector<std::string> class_names;
  std::unordered_map<std::string, int> class_index;
  std::vector<int> target(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string& s = cells[target_col][i];
    if (is_missing_token(s))
      Fail(ErrorKind::kData, "target cell missing in data row " + std::to_string(i + 1));
    auto [it, inserted] = class_index.try_emplace(s, static_cast<int>(class_names.size()));
    if (inserted) class_names.push_back(s);
    target[i] = it->second;
  }
  return Dataset::Make(std::move(names), std::move(kinds), std::move(columns), std::move(target),
                       std::move(class_names), header[target_col]);
}

Dataset LoadCsv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open '" + path + "'");
  return ParseCsv(in, options);
}

namespace {

void WriteField(std::ostream& out, std::string_view s) {
  const bool quote = s.find_first_of(",\"\r\n") != std::string_view::npos ||
                     (!s.empty() && (s.front() == ' ' || s.back() == ' ' || s.front() == '\t' || s.back() == '\t'));
  if (!quote) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

void WriteCsv(std::ostream& out, const Dataset& d, const std::string& missing_token) {
  for (std::size_t j = 0; j < d.num_features(); ++j) {
    WriteField(out, d.feature_name(j));
    out << ',';
  }
  WriteField(out, d.target_name());
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < d.num_rows(); ++i) {
    for (std::size_t j = 0; j < d.num_features(); ++j) {
      const double v = d.at(i, j);
      if (IsMissing(v)) {
        WriteField(out, missing_token);
      } else if (d.kind(j).categorical) {
        WriteField(out, d.kind(j).levels[static_cast<std::size_t>(v)]);
      } else {
        auto res = std::to_chars(buf, buf + sizeof(buf), v);
        out.write(buf, res.ptr - buf);
      }
      out << ',';
    }
    WriteField(out, d.class_names()[static_cast<std::size_t>(d.label(i))]);
    out << '\n';
  }
}

Dataset Impute(const Dataset& d) {
  if (!d.HasMissing()) return d;
  std::vector<FeatureKind> kinds = d.kinds();
  std::vector<std::vector<double>> columns;
  columns.reserve(d.num_features());
  for (std::size_t j = 0; j < d.num_features(); ++j) {
    auto src = d.column(j);
    std::vector<double> col(src.begin(), src.end());
    if (std::none_of(col.begin(), col.end(), IsMissing)) {
      columns.push_back(std::move(col));
      continue;
    }
    double fill;
    if (kinds[j].categorical) {
      auto it = std::find(kinds[j].levels.begin(), kinds[j].levels.end(), kMissingLevel);
      fill = static_cast<double>(it - kinds[j].levels.begin());
      if (it == kinds[j].levels.end()) kinds[j].levels.emplace_back(kMissingLevel);
    } else {
      std::vector<double> seen;
      for (double v : col)
        if (!IsMissing(v)) seen.push_back(v);
      if (seen.empty()) Fail(ErrorKind::kData, "cannot impute numeric column '" + d.feature_name(j) + "': every cell is missing");
      std::sort(seen.begin(), seen.end());
      const std::size_t h = seen.size() / 2;
      fill = seen.size() % 2 ? seen[h] : 0.5 * (seen[h - 1] + seen[h]);
    }
    for (double& v : col)
      if (IsMissing(v)) v = fill;
    columns.push_back(std::move(col));
  }
  std::vector<int> target(d.target().begin(), d.target().end());
  return Dataset::Make(d.feature_names(), std::move(kinds), std::move(columns), std::move(target), d.class_names(),
                       d.target_name());
}

std::vector<std::vector<double>> ReadRowsForSchema(std::istream& in, const std::vector<std::string>& feature_names,
                                                   const std::vector<FeatureKind>& kinds,
                                                   const std::string& ignore_column, const std::string& missing_token) {
  std::size_t line = 0;
  std::vector<std::string> header;
  if (!ReadRecord(in, header, line) || IsRecordBlank(header)) Fail(ErrorKind::kData, "empty file: no header row");
  for (auto& h : header) h = std::string(Trim(h));
  std::vector<std::size_t> source;  // input column of each feature
  std::size_t skipped = header.size();
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (!ignore_column.empty() && header[j] == ignore_column && skipped == header.size()) {
      skipped = j;
      continue;
    }
    source.push_back(j);
  }
  if (source.size() != feature_names.size())
    Fail(ErrorKind::kData, "input has " + std::to_string(source.size()) + " feature columns, model expects " +
                               std::to_string(feature_names.size()));
  for (std::size_t k = 0; k < source.size(); ++k)
    if (header[source[k]] != feature_names[k])
      Fail(ErrorKind::kData, "input column " + std::to_string(source[k]) + " is '" + header[source[k]] +
                                 "', model expects '" + feature_names[k] + "'");

  std::vector<std::unordered_map<std::string, std::size_t>> level_index(kinds.size());
  for (std::size_t k = 0; k < kinds.size(); ++k)
    for (std::size_t l = 0; l < kinds[k].levels.size(); ++l) level_index[k].emplace(kinds[k].levels[l], l);

  std::vector<std::vector<double>> rows;
  std::vector<std::string> fields;
  while (true) {
    const std::size_t record_line = line + 1;
    if (!ReadRecord(in, fields, line)) break;
    if (IsRecordBlank(fields)) continue;
    if (fields.size() != header.size())
      Fail(ErrorKind::kData, "ragged row at line " + std::to_string(record_line) + ": " + std::to_string(fields.size()) +
                                 " cells, header has " + std::to_string(header.size()));
    std::vector<double> row(kinds.size(), kMissing);
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      const std::string cell(Trim(fields[source[k]]));
      if (cell.empty() || cell == missing_token) continue;
      if (kinds[k].categorical) {
        auto it = level_index[k].find(cell);
        row[k] = static_cast<double>(it == level_index[k].end() ? kinds[k].arity() : it->second);
      } else {
        auto v = ParseReal(cell);
        if (!v)
          Fail(ErrorKind::kData, "line " + std::to_string(record_line) + ": '" + cell + "' is not a number (column '" +
                                     feature_names[k] + "')");
        if (std::isfinite(*v)) row[k] = *v;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double RowView::total_weight() const {
  double s = 0;
  for (double w : weights) s += w;
  return s;
}

RowView RowView::All(const Dataset& data, double weight) {
  RowView v;
  v.data = &data;
  v.rows.resize(data.num_rows());
  for (std::size_t i = 0; i < v.rows.size(); ++i) v.rows[i] = static_cast<std::uint32_t>(i);
  v.weights.assign(v.rows.size(), weight);
  return v;
}

RowView Bootstrap(const Dataset& data, Rng& rng, std::size_t n_draw) {
  if (n_draw == 0) Fail(ErrorKind::kInvalidArgument, "bootstrap needs at least one draw");
  RowView v;
  v.data = &data;
  v.rows.resize(n_draw);
  for (auto& r : v.rows) r = static_cast<std::uint32_t>(UniformIndex(rng, data.num_rows()));
  v.weights.assign(n_draw, 1.0);
  return v;
}

}  // namespace rrf

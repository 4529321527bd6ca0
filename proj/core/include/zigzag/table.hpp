// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace zigzag::io {

inline constexpr int schema_version = 1;

enum class Format { Csv, Json };
[[nodiscard]] std::string_view to_string(Format f) noexcept;
[[nodiscard]] Format parse_format(std::string_view s);
[[nodiscard]] std::string_view extension(Format f) noexcept;

/// Empty cell, number, integer or text.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;
using Row = std::vector<Cell>;

[[nodiscard]] inline Cell cell(std::optional<double> v) { return v ? Cell{*v} : Cell{}; }

/**
 * Row-at-a-time dataset writer.
 *
 * CSV: a "# config: <json>" line, then a header with schema_version first.
 * JSON: {"schema_version", "config", "columns", "rows": [{...}], "meta"},
 * written on close() since rows are collected in memory.
 * Not thread safe; one writer per dataset.
 */
class DatasetWriter {
 public:
  DatasetWriter(std::filesystem::path path, Format format, std::vector<std::string> columns,
                std::string config_json);
  DatasetWriter(const DatasetWriter&) = delete;
  DatasetWriter& operator=(const DatasetWriter&) = delete;
  ~DatasetWriter();

  void append(const Row& row);
  /// `meta_json` must be a JSON object (or empty). Also CSV gets it as a trailing comment.
  void close(const std::string& meta_json = {});

  [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  Format format_;
  std::vector<std::string> columns_;
  std::string config_;
  std::ofstream out_;
  std::vector<Row> rows_;
  bool closed_ = false;
};

/// Writes a whole table at once.
void write_table(const std::filesystem::path& path, Format format, const std::vector<std::string>& columns,
                 const std::vector<Row>& rows, const std::string& config_json, const std::string& meta_json = {});

/// CSV as written above: comment lines are kept apart, empty cells become nullopt.
struct CsvData {
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] int column(const std::string& name) const;  // -1 if missing
  [[nodiscard]] std::optional<double> number(std::size_t row, const std::string& name) const;
};
[[nodiscard]] CsvData read_csv(const std::filesystem::path& path);

/// Shortest text that parses back to the same double.
[[nodiscard]] std::string format_double(double v);

}  // namespace zigzag::io

// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#include "zigzag/table.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "zigzag/model_params.hpp"

namespace zigzag::io {

namespace {


nlohmann::ordered_json to_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else {
          return v;
        }
      },
      c);
}

std::string csv_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return {};
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string q = "\"";
          for (char ch : v) {
            if (ch == '"') q += '"';
            q += ch;
          }
          return q + '"';
        }
      },
      c);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

nlohmann::ordered_json parse_or_empty(const std::string& s) {
  return s.empty() ? nlohmann::ordered_json::object() : nlohmann::ordered_json::parse(s);
}

}  // namespace

std::string_view to_string(Format f) noexcept { return f == Format::Csv ? "csv" : "json"; }

Format parse_format(std::string_view s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw ConfigError("unknown format '" + std::string(s) + "' (csv|json)");
}

std::string_view extension(Format f) noexcept { return f == Format::Csv ? ".csv" : ".json"; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

DatasetWriter::DatasetWriter(std::filesystem::path path, Format format, std::vector<std::string> columns,
                             std::string config_json)
    : path_(std::move(path)), format_(format), columns_(std::move(columns)), config_(std::move(config_json)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  out_.open(path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw ConfigError("cannot write " + path_.string());
  if (format_ == Format::Csv) {
    out_ << "# config: " << parse_or_empty(config_).dump() << '\n';
    out_ << "schema_version";
    for (const auto& c : columns_) out_ << ',' << c;
    out_ << '\n';
    out_.flush();
  }
}

DatasetWriter::~DatasetWriter() {
  try {
    if (!closed_) close();
  } catch (...) {
  }
}

void DatasetWriter::append(const Row& row) {
  if (closed_) throw std::logic_error("append after close");
  if (row.size() != columns_.size()) throw std::invalid_argument("row width does not match the header");
  if (format_ == Format::Json) {
    rows_.push_back(row);
    return;
  }
  out_ << schema_version;
  for (const auto& c : row) out_ << ',' << csv_text(c);
  out_ << '\n';
  out_.flush();
}

void DatasetWriter::close(const std::string& meta_json) {
  if (closed_) return;
  closed_ = true;
  if (format_ == Format::Csv) {
    if (!meta_json.empty()) out_ << "# meta: " << parse_or_empty(meta_json).dump() << '\n';
  } else {
    nlohmann::ordered_json doc;
    doc["schema_version"] = schema_version;
    doc["config"] = parse_or_empty(config_);
    doc["columns"] = columns_;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : rows_) {
      auto o = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < r.size(); ++i) o[columns_[i]] = to_json(r[i]);
      rows.push_back(std::move(o));
    }
    doc["rows"] = std::move(rows);
    doc["meta"] = parse_or_empty(meta_json);
    out_ << doc.dump(1) << '\n';
  }
  out_.close();
  if (!out_) throw std::runtime_error("write failed: " + path_.string());
}

void write_table(const std::filesystem::path& path, Format format, const std::vector<std::string>& columns,
                 const std::vector<Row>& rows, const std::string& config_json, const std::string& meta_json) {
  DatasetWriter w(path, format, columns, config_json);
  for (const auto& r : rows) w.append(r);
  w.close(meta_json);
}

int CsvData::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

std::optional<double> CsvData::number(std::size_t row, const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw std::out_of_range("no column " + name);
  const auto& s = rows.at(row).at(static_cast<std::size_t>(c));
  if (s.empty()) return std::nullopt;
  if (s == "nan") return std::nan("");
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw std::runtime_error("bad number '" + s + "' in " + name);
  return v;
}

CsvData read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  CsvData d;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      d.comments.push_back(line.substr(2));
      continue;
    }
    auto f = split_csv_line(line);
    if (d.columns.empty()) {
      d.columns = std::move(f);
    } else {
      if (f.size() != d.columns.size()) throw std::runtime_error("ragged row in " + path.string());
      d.rows.push_back(std::move(f));
    }
  }
  return d;
}

}  // namespace zigzag::io

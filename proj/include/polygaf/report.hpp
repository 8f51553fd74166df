#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polygaf/config.hpp"

namespace polygaf {

// Shortest decimal that round-trips to the same double (RFC-8785-style), so
// identical numbers always serialize to identical bytes.
std::string format_double(double value);

// RFC-4180 field quoting (commas, quotes, newlines).
std::string csv_escape(const std::string& field);

// CSV document with leading '#' metadata lines (artifact version + resolved
// config as JSON), a header row, then data rows; LF line endings throughout.
class CsvDocument {
 public:
  explicit CsvDocument(const Config& config);
  void header(std::span<const std::string> columns);
  void row(std::span<const std::string> fields);
  const std::string& content() const { return content_; }

 private:
  std::string content_;
  std::size_t column_count_ = 0;
};

// Resolved config as a JSON object of strings (alphabetical keys).
nlohmann::json config_json(const Config& config);

// Summary skeleton: {"config": ..., "version": ...} ready for result fields.
nlohmann::json summary_json(const Config& config);

// Serialize with 2-space indentation and a trailing newline.
std::string json_content(const nlohmann::json& summary);

// Binary write (no newline translation); throws std::invalid_argument when
// the target cannot be created, e.g. a missing output directory.
void write_file(const std::string& path, const std::string& content);

}  // namespace polygaf

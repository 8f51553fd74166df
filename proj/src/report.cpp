#include "polygaf/report.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include "polygaf/common.hpp"

namespace polygaf {

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::invalid_argument("format_double: conversion failed");
  return std::string(buffer, ptr);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvDocument::CsvDocument(const Config& config) {
  content_ += "# version: ";
  content_ += kVersionString;
  content_ += '\n';
  content_ += "# config: ";
  content_ += config_json(config).dump();
  content_ += '\n';
}

void CsvDocument::header(std::span<const std::string> columns) {
  column_count_ = columns.size();
  row(columns);
}

void CsvDocument::row(std::span<const std::string> fields) {
  if (column_count_ != 0 && fields.size() != column_count_ && fields.size() != 0)
    throw std::invalid_argument("csv: row width does not match the header");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) content_ += ',';
    content_ += csv_escape(fields[i]);
  }
  content_ += '\n';
}

nlohmann::json config_json(const Config& config) {
  nlohmann::json object = nlohmann::json::object();
  for (const auto& [key, value] : config.entries()) object[key] = value;
  return object;
}

nlohmann::json summary_json(const Config& config) {
  nlohmann::json summary;
  summary["config"] = config_json(config);
  summary["version"] = kVersionString;
  return summary;
}

std::string json_content(const nlohmann::json& summary) { return summary.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::invalid_argument("failed writing output file '" + path + "'");
}

}  // namespace polygaf

#include "neasslab/report.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace neasslab {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc())
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("CsvWriter: no columns");
}

void CsvWriter::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("CsvWriter: cell count mismatch");
  rows_.push_back(std::move(cells));
}

std::string CsvWriter::str(const std::string& scenario_hash) const {
  std::string out = "# neasslab ";
  out += kVersion;
  out += " scenario=";
  out += scenario_hash;
  out += "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ",";
    out += columns_[i];
  }
  out += "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += row[i];
    }
    out += "\n";
  }
  return out;
}

void CsvWriter::write(const std::string& path, const std::string& scenario_hash) const {
  std::ofstream f(path, std::ios::binary);  // binary: keep LF endings everywhere
  if (!f) throw std::runtime_error("CsvWriter: cannot open '" + path + "'");
  f << str(scenario_hash);
}

std::string RunReport::to_json() const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["version"] = kVersion;
  j["scenario"] = scenario_hash;
  j["pass"] = pass;
  j["exit_code"] = exit_code;
  j["wall_seconds"] = wall_seconds;
  j["leakage"] = leakage;
  nlohmann::json m = nlohmann::json::object();
  for (const auto& [k, v] : metrics) m[k] = v;
  j["metrics"] = m;
  return j.dump(2) + "\n";
}

void RunReport::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("RunReport: cannot open '" + path + "'");
  f << to_json();
}

}  // namespace neasslab

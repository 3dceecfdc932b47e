#include "latquench/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include <json.hpp>

namespace lq {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (const auto& h : header) cell(h);
  end_row();
}

void CsvWriter::separator() {
  if (in_row_ > 0) text_ += ',';
  ++in_row_;
}

CsvWriter& CsvWriter::cell(double v) {
  separator();
  text_ += format_double(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
  separator();
  text_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& v) {
  separator();
  if (v.find_first_of(",\"\n") == std::string::npos) {
    text_ += v;
    return *this;
  }
  text_ += '"';
  for (char c : v) {
    if (c == '"') text_ += '"';
    text_ += c;
  }
  text_ += '"';
  return *this;
}

CsvWriter& CsvWriter::missing() {
  separator();
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) {
    throw std::logic_error("CSV row has " + std::to_string(in_row_) + " cells, expected " + std::to_string(columns_));
  }
  text_ += '\n';
  in_row_ = 0;
}

RunManifest::RunManifest(std::string command, std::string resolved_config)
    : command_(std::move(command)), config_(std::move(resolved_config)) {}

void RunManifest::write_file(const std::filesystem::path& path, const std::string& content) {
  write_atomic(path, content);
  files_.emplace_back(path.filename().string(), sha256_hex(content));
}

void RunManifest::add_file(const std::filesystem::path& path) {
  files_.emplace_back(path.filename().string(), sha256_file(path));
}

void RunManifest::add_timing(const std::string& stage, double seconds) { timings_.emplace_back(stage, seconds); }
void RunManifest::add_diagnostic(const std::string& key, double value) { diagnostics_.emplace_back(key, value); }
void RunManifest::add_note(const std::string& note) { notes_.push_back(note); }

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command_;
  j["version"] = kVersion;
  j["config"] = config_;
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& [name, sum] : files_) j["files"].push_back({{"name", name}, {"sha256", sum}});
  j["timings_s"] = nlohmann::ordered_json::object();
  for (const auto& [stage, s] : timings_) j["timings_s"][stage] = s;
  j["diagnostics"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : diagnostics_) j["diagnostics"][k] = v;
  j["notes"] = notes_;
  return j.dump(2) + "\n";
}

void RunManifest::save(const std::filesystem::path& path) const { write_atomic(path, to_json()); }

}  // namespace lq

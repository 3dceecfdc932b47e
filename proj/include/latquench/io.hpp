#pragma once

// Deterministic file output: CSV with 17 significant digits, atomic writes
// and a run manifest with SHA-256 checksums.

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace lq {

/// Shortest round-trip text is not used; every float is printed with 17
/// significant digits so that files compare byte for byte.
std::string format_double(double v);

/// Write to `path.tmp` and rename over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& path);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(const std::string& v);
  CsvWriter& cell(const char* v) { return cell(std::string(v)); }
  /// Empty field, used for undefined values.
  CsvWriter& missing();
  void end_row();

  const std::string& str() const { return text_; }
  void save(const std::filesystem::path& path) const { write_atomic(path, text_); }

 private:
  void separator();
  std::size_t columns_;
  std::size_t in_row_ = 0;
  std::string text_;
};

/// Files, stage timings and diagnostics of one run, written last.
class RunManifest {
 public:
  RunManifest(std::string command, std::string resolved_config);

  /// Write a file atomically and record its checksum.
  void write_file(const std::filesystem::path& path, const std::string& content);
  void add_file(const std::filesystem::path& path);
  void add_timing(const std::string& stage, double seconds);
  void add_diagnostic(const std::string& key, double value);
  void add_note(const std::string& note);

  std::string to_json() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::string command_;
  std::string config_;
  std::vector<std::pair<std::string, std::string>> files_;
  std::vector<std::pair<std::string, double>> timings_;
  std::vector<std::pair<std::string, double>> diagnostics_;
  std::vector<std::string> notes_;
};

/// Wall-clock stopwatch for manifest timings.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline constexpr const char* kVersion = "1.0.0";

}  // namespace lq

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace minimax {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// Writes via a temp file in the same directory followed by rename, so
// readers never observe a partial file.
void atomic_write(const std::filesystem::path& path, const std::string& content);

struct CsvWriter {
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  const std::string& content() const { return buffer_; }
  void write(const std::filesystem::path& path) const;

 private:
  std::size_t columns_;
  std::string buffer_;
};

std::string read_file(const std::filesystem::path& path);

}  // namespace minimax

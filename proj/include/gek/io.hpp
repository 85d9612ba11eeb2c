#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gek {

/// Line reader over plain or gzip-compressed files (detected from content).
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path);
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  /// Reads the next line without its terminator; false at end of input.
  bool getline(std::string& line);

  std::size_t line_number() const noexcept { return line_number_; }

 private:
  void* handle_;
  std::size_t line_number_ = 0;
  std::vector<char> buffer_;
};

/// Writes through a temporary sibling file and renames it into place, so
/// readers never observe a partially written output.
void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer,
                  bool binary = false);

std::vector<std::string_view> split(std::string_view text, char delimiter);

std::string_view trim(std::string_view text);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view text);
std::optional<std::uint64_t> parse_uint(std::string_view text);

/// ASCII lowercase; bytes outside ASCII are left untouched.
std::string to_lower(std::string_view text);

}  // namespace gek

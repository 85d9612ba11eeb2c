#include "gek/io.hpp"

#include <zlib.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "gek/error.hpp"

namespace gek {

LineReader::LineReader(const std::filesystem::path& path)
    : handle_(gzopen(path.c_str(), "rb")), buffer_(1 << 16) {
  if (handle_ == nullptr) {
    throw Error("io", "cannot open '" + path.string() + "'");
  }
  gzbuffer(static_cast<gzFile>(handle_), 1 << 17);
}

LineReader::~LineReader() {
  if (handle_ != nullptr) gzclose(static_cast<gzFile>(handle_));
}

bool LineReader::getline(std::string& line) {
  line.clear();
  auto* file = static_cast<gzFile>(handle_);
  bool read_any = false;
  while (gzgets(file, buffer_.data(), static_cast<int>(buffer_.size())) != nullptr) {
    read_any = true;
    std::string_view chunk(buffer_.data());
    if (!chunk.empty() && chunk.back() == '\n') {
      chunk.remove_suffix(1);
      if (!chunk.empty() && chunk.back() == '\r') chunk.remove_suffix(1);
      line.append(chunk);
      ++line_number_;
      return true;
    }
    line.append(chunk);
  }
  int err = 0;
  const char* message = gzerror(file, &err);
  if (err != Z_OK && err != Z_BUF_ERROR) {
    throw Error("io", std::string("read failure: ") + message);
  }
  if (read_any) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_number_;
  }
  return read_any;
}

void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer, bool binary) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
    if (!out) throw Error("io", "cannot write '" + tmp.string() + "'");
    writer(out);
    out.flush();
    if (!out) throw Error("io", "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("io", "cannot move output into '" + path.string() + "': " + ec.message());
  }
}

std::vector<std::string_view> split(std::string_view text, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(text.substr(start));
      return fields;
    }
    fields.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return text;
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw Error("io", "cannot format number");
  return std::string(buf, end);
}

std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<std::uint64_t> parse_uint(std::string_view text) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) {
    if (static_cast<unsigned char>(c) < 0x80) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

}  // namespace gek

#include "gek/log.hpp"

#include <iostream>
#include <mutex>

namespace gek {
namespace {

std::mutex sink_mutex;

LogSink& sink() {
  static LogSink current = [](std::string_view message) {
    std::cerr << "warning: " << message << '\n';
  };
  return current;
}

}  // namespace

LogSink set_log_sink(LogSink next) {
  std::lock_guard lock(sink_mutex);
  auto previous = std::move(sink());
  sink() = std::move(next);
  return previous;
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex);
  if (sink()) sink()(message);
}

}  // namespace gek

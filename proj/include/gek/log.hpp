#pragma once

#include <functional>
#include <string_view>

namespace gek {

using LogSink = std::function<void(std::string_view)>;

/// Replaces the warning sink (stderr by default) and returns the previous one.
LogSink set_log_sink(LogSink sink);

void warn(std::string_view message);

}  // namespace gek

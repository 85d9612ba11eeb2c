#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace gek {

inline constexpr std::string_view kVersion = "0.1.0";

/// Runs one subcommand. `args` excludes the program name. Returns the exit
/// status: 0 on success, 1 on a runtime error, 2 on a usage error.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace gek

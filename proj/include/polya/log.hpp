#pragma once

#include <string_view>

namespace polya::log {

enum class Level { quiet = 0, warn = 1, info = 2, debug = 3 };

void set_level(Level level);
Level level();

// All log output goes to stderr so stdout stays pipeable.
void warn(std::string_view msg);
void info(std::string_view msg);
void debug(std::string_view msg);

}  // namespace polya::log

#pragma once

#include <string>
#include <string_view>

namespace hkx::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

void set_level(Level lvl);
Level level();

// Parses "error"/"warn"/"info"/"debug"; returns false on anything else.
bool parse_level(std::string_view name, Level& out);

// Reads HYBRIDKEX_LOG from the environment, if set.
void init_from_env();

void write(Level lvl, std::string_view msg);

inline void error(std::string_view m) { write(Level::error, m); }
inline void warn(std::string_view m) { write(Level::warn, m); }
inline void info(std::string_view m) { write(Level::info, m); }
inline void debug(std::string_view m) { write(Level::debug, m); }

}  // namespace hkx::log

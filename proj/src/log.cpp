#include "hkx/log.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>

namespace hkx::log {

namespace {
std::atomic<Level> g_level{Level::warn};

const char* level_name(Level lvl) {
    switch (lvl) {
        case Level::error: return "error";
        case Level::warn: return "warn";
        case Level::info: return "info";
        case Level::debug: return "debug";
    }
    return "?";
}
}  // namespace

void set_level(Level lvl) { g_level.store(lvl); }

Level level() { return g_level.load(); }

bool parse_level(std::string_view name, Level& out) {
    if (name == "error") out = Level::error;
    else if (name == "warn") out = Level::warn;
    else if (name == "info") out = Level::info;
    else if (name == "debug") out = Level::debug;
    else return false;
    return true;
}

void init_from_env() {
    const char* env = std::getenv("HYBRIDKEX_LOG");
    if (!env) return;
    Level lvl;
    if (parse_level(env, lvl)) set_level(lvl);
}

void write(Level lvl, std::string_view msg) {
    if (lvl > g_level.load()) return;
    std::fprintf(stderr, "[%s] %.*s\n", level_name(lvl), static_cast<int>(msg.size()), msg.data());
    std::fflush(stderr);
}

}  // namespace hkx::log

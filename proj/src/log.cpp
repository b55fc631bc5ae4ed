#include "meltline/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace meltline {

LogLevel logThreshold() {
    static const LogLevel level = [] {
        const char* env = std::getenv("MELTLINE_LOG");
        if (!env) return LogLevel::Warn;
        if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
        if (std::strcmp(env, "info") == 0) return LogLevel::Info;
        if (std::strcmp(env, "warn") == 0) return LogLevel::Warn;
        if (std::strcmp(env, "error") == 0) return LogLevel::Error;
        if (std::strcmp(env, "off") == 0) return LogLevel::Off;
        return LogLevel::Warn;
    }();
    return level;
}

void logMessage(LogLevel level, const std::string& message) {
    if (level < logThreshold()) return;
    const char* tag = "warn";
    switch (level) {
    case LogLevel::Debug: tag = "debug"; break;
    case LogLevel::Info: tag = "info"; break;
    case LogLevel::Warn: tag = "warn"; break;
    case LogLevel::Error: tag = "error"; break;
    case LogLevel::Off: return;
    }
    std::fprintf(stderr, "meltline: %s: %s\n", tag, message.c_str());
}

} // namespace meltline

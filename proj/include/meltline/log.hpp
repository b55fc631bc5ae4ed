#pragma once

#include <string>

namespace meltline {

enum class LogLevel { Debug = 0, Info, Warn, Error, Off };

// Level comes from MELTLINE_LOG (debug|info|warn|error|off), default warn.
LogLevel logThreshold();

void logMessage(LogLevel level, const std::string& message);

inline void logDebug(const std::string& m) { logMessage(LogLevel::Debug, m); }
inline void logInfo(const std::string& m) { logMessage(LogLevel::Info, m); }
inline void logWarn(const std::string& m) { logMessage(LogLevel::Warn, m); }
inline void logError(const std::string& m) { logMessage(LogLevel::Error, m); }

} // namespace meltline

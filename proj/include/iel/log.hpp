#pragma once

#include <string>

namespace iel {

enum class LogLevel { debug = 0, info = 1, warn = 2, error = 3, off = 4 };

/// Level parsed once from the IEL_LOG environment variable (default: warn).
LogLevel log_level();

void log(LogLevel level, const std::string& msg);

inline void log_debug(const std::string& m) { log(LogLevel::debug, m); }
inline void log_info(const std::string& m) { log(LogLevel::info, m); }
inline void log_warn(const std::string& m) { log(LogLevel::warn, m); }
inline void log_error(const std::string& m) { log(LogLevel::error, m); }

}  // namespace iel

#include "iel/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace iel {

LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("IEL_LOG");
    if (!env) return LogLevel::warn;
    if (!std::strcmp(env, "debug")) return LogLevel::debug;
    if (!std::strcmp(env, "info")) return LogLevel::info;
    if (!std::strcmp(env, "warn")) return LogLevel::warn;
    if (!std::strcmp(env, "error")) return LogLevel::error;
    if (!std::strcmp(env, "off")) return LogLevel::off;
    return LogLevel::warn;
  }();
  return level;
}

void log(LogLevel level, const std::string& msg) {
  if (level < log_level()) return;
  static std::mutex mtx;
  static const char* names[] = {"debug", "info", "warn", "error"};
  std::lock_guard<std::mutex> lock(mtx);
  std::fprintf(stderr, "[iel %s] %s\n", names[static_cast<int>(level)], msg.c_str());
}

}  // namespace iel

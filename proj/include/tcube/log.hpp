#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace tcube {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Level comes from TCUBE_LOG (error|warn|info|debug); unknown values and an
// unset variable both mean warn.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("TCUBE_LOG");
    if (!env) return LogLevel::Warn;
    const std::string v(env);
    if (v == "error") return LogLevel::Error;
    if (v == "warn") return LogLevel::Warn;
    if (v == "info") return LogLevel::Info;
    if (v == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
  }();
  return level;
}

inline void log(LogLevel at, const std::string& msg) {
  if (static_cast<int>(at) > static_cast<int>(log_level())) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::cerr << "[" << names[static_cast<int>(at)] << "] " << msg << "\n";
}

}  // namespace tcube

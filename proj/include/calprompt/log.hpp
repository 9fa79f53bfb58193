// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The calprompt Authors

#pragma once

#include <cstdlib>
#include <iostream>
#include <string>
#include <string_view>

namespace calprompt::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// CALPROMPT_LOG = error | warn | info | debug (default warn).
inline Level threshold() {
  static const Level level = [] {
    const char* env = std::getenv("CALPROMPT_LOG");
    if (!env) return Level::Warn;
    const std::string_view v(env);
    if (v == "error") return Level::Error;
    if (v == "info") return Level::Info;
    if (v == "debug") return Level::Debug;
    return Level::Warn;
  }();
  return level;
}

inline void write(Level level, std::string_view msg) {
  if (level > threshold()) return;
  static constexpr const char* names[] = {"error", "warn", "info", "debug"};
  std::cerr << "[calprompt " << names[static_cast<int>(level)] << "] " << msg << "\n";
}

inline void error(std::string_view msg) { write(Level::Error, msg); }
inline void warn(std::string_view msg) { write(Level::Warn, msg); }
inline void info(std::string_view msg) { write(Level::Info, msg); }
inline void debug(std::string_view msg) { write(Level::Debug, msg); }

}  // namespace calprompt::log

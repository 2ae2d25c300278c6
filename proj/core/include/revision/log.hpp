// Copyright (C) 2026 Revision Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>

namespace revision::log {

enum class Level { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3 };

using Sink = std::function<void(Level, const std::string&)>;

// Default sink writes "level: message" to stderr.
void set_sink(Sink sink);
void reset_sink();
void set_level(Level level);

void debug(const std::string& msg);
void info(const std::string& msg);
void warn(const std::string& msg);
void error(const std::string& msg);

// Number of warn/error messages emitted since program start or last reset.
// Tests use this to assert "logged, not fatal" contracts.
long warning_count();
void reset_warning_count();

}  // namespace revision::log

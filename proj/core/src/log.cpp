// Copyright (C) 2026 Revision Authors
// SPDX-License-Identifier: Apache-2.0

#include "revision/log.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>

namespace revision::log {
namespace {

std::mutex g_mutex;
Sink g_sink;
Level g_level = Level::kInfo;
std::atomic<long> g_warnings{0};

const char* level_name(Level l) {
  switch (l) {
    case Level::kDebug: return "debug";
    case Level::kInfo: return "info";
    case Level::kWarn: return "warn";
    case Level::kError: return "error";
  }
  return "?";
}

void emit(Level l, const std::string& msg) {
  if (l >= Level::kWarn) g_warnings.fetch_add(1, std::memory_order_relaxed);
  std::lock_guard<std::mutex> lock(g_mutex);
  if (l < g_level) return;
  if (g_sink) {
    g_sink(l, msg);
  } else {
    std::fprintf(stderr, "%s: %s\n", level_name(l), msg.c_str());
  }
}

}  // namespace

void set_sink(Sink sink) {
  std::lock_guard<std::mutex> lock(g_mutex);
  g_sink = std::move(sink);
}

void reset_sink() { set_sink(nullptr); }

void set_level(Level level) {
  std::lock_guard<std::mutex> lock(g_mutex);
  g_level = level;
}

void debug(const std::string& msg) { emit(Level::kDebug, msg); }
void info(const std::string& msg) { emit(Level::kInfo, msg); }
void warn(const std::string& msg) { emit(Level::kWarn, msg); }
void error(const std::string& msg) { emit(Level::kError, msg); }

long warning_count() { return g_warnings.load(std::memory_order_relaxed); }
void reset_warning_count() { g_warnings.store(0, std::memory_order_relaxed); }

}  // namespace revision::log

#include "p2pshare/log.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <mutex>

namespace p2pshare::log {
namespace {

Level from_env() {
  const char* v = std::getenv("P2PSHARE_LOG");
  if (v == nullptr) return Level::error;
  if (std::strcmp(v, "debug") == 0) return Level::debug;
  if (std::strcmp(v, "info") == 0) return Level::info;
  return Level::error;
}

std::atomic<int>& level_ref() {
  static std::atomic<int> level{static_cast<int>(from_env())};
  return level;
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

constexpr const char* kNames[] = {"error", "info", "debug"};

}  // namespace

Level threshold() { return static_cast<Level>(level_ref().load()); }

void set_threshold(Level level) { level_ref().store(static_cast<int>(level)); }

void write(Level level, std::string_view message) {
  if (static_cast<int>(level) > level_ref().load()) return;
  std::lock_guard lock(sink_mutex());
  std::cerr << "[p2pshare " << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace p2pshare::log

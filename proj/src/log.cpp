#include "riskscope/log.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace riskscope::logging {

namespace {

Level level_from_env() {
  const char* v = std::getenv("RISKSCOPE_LOG");
  if (v == nullptr) return Level::warn;
  if (std::strcmp(v, "error") == 0) return Level::error;
  if (std::strcmp(v, "warn") == 0) return Level::warn;
  if (std::strcmp(v, "info") == 0) return Level::info;
  if (std::strcmp(v, "debug") == 0) return Level::debug;
  return Level::warn;
}

std::atomic<Level>& level_ref() {
  static std::atomic<Level> lv{level_from_env()};
  return lv;
}

const char* level_tag(Level lv) {
  switch (lv) {
    case Level::error: return "error";
    case Level::warn: return "warn";
    case Level::info: return "info";
    case Level::debug: return "debug";
  }
  return "?";
}

}  // namespace

Level level() noexcept { return level_ref().load(std::memory_order_relaxed); }
void set_level(Level lv) noexcept { level_ref().store(lv, std::memory_order_relaxed); }

void message(Level lv, const std::string& msg) {
  if (static_cast<int>(lv) > static_cast<int>(level())) return;
  std::fprintf(stderr, "[riskscope] %s: %s\n", level_tag(lv), msg.c_str());
}

}  // namespace riskscope::logging

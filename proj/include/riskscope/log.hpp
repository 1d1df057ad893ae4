#pragma once

#include <string>

namespace riskscope::logging {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

/// Current level; initialized once from the RISKSCOPE_LOG environment
/// variable (error|warn|info|debug), default warn.
Level level() noexcept;
void set_level(Level lv) noexcept;

void message(Level lv, const std::string& msg);

inline void error(const std::string& m) { message(Level::error, m); }
inline void warn(const std::string& m) { message(Level::warn, m); }
inline void info(const std::string& m) { message(Level::info, m); }
inline void debug(const std::string& m) { message(Level::debug, m); }

}  // namespace riskscope::logging

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace riskscope::fsutil {

bool exists(const std::string& path);
std::string read_text(const std::string& path);               // raises IoError
std::vector<std::uint8_t> read_bytes(const std::string& path);  // raises IoError
void write_text(const std::string& path, const std::string& text);
void ensure_dir(const std::string& path);

std::string join(const std::string& dir, const std::string& name);

/// FNV-1a 64 of the file contents as 16 hex digits; used for the
/// deterministic manifest checksums.
std::string checksum_hex(const std::string& text);

}  // namespace riskscope::fsutil

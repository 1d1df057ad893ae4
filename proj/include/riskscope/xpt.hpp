#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "riskscope/table.hpp"

namespace riskscope {

/// Parse a SAS Transport (XPORT) v5 file: 80-byte records, big-endian NAMESTR
/// metadata, numeric values in IBM hexadecimal floating point. Only the first
/// member is read. Numeric fields whose first byte is '.', 'A'..'Z' or '_'
/// followed by zero bytes decode as Missing with that code; all-blank
/// character fields decode as Missing(".").
RawTable parse_xpt(std::span<const std::uint8_t> bytes);

RawTable read_xpt_file(const std::string& path);

/// IBM 360 hexadecimal double (8 big-endian bytes) to IEEE-754. Exact for
/// every value representable in both formats.
double ibm_to_ieee(const std::uint8_t bytes[8]);

}  // namespace riskscope

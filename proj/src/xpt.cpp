#include "riskscope/xpt.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "riskscope/log.hpp"

namespace riskscope {

namespace {

constexpr std::size_t kRecord = 80;

constexpr char kLibraryHeader[] = "HEADER RECORD*******LIBRARY HEADER RECORD!!!!!!!";
constexpr char kLibV8Header[] = "HEADER RECORD*******LIBV8   HEADER RECORD!!!!!!!";
constexpr char kMemberHeader[] = "HEADER RECORD*******MEMBER  HEADER RECORD!!!!!!!";
constexpr char kDscrptrHeader[] = "HEADER RECORD*******DSCRPTR HEADER RECORD!!!!!!!";
constexpr char kNamestrHeader[] = "HEADER RECORD*******NAMESTR HEADER RECORD!!!!!!!";
constexpr char kObsHeader[] = "HEADER RECORD*******OBS     HEADER RECORD!!!!!!!";

bool starts_with(std::span<const std::uint8_t> rec, const char* prefix) {
  const std::size_t len = std::strlen(prefix);
  return rec.size() >= len && std::memcmp(rec.data(), prefix, len) == 0;
}

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

std::string trimmed_ascii(const std::uint8_t* p, std::size_t len) {
  std::size_t end = len;
  while (end > 0 && (p[end - 1] == ' ' || p[end - 1] == '\0')) --end;
  std::size_t begin = 0;
  while (begin < end && p[begin] == ' ') ++begin;
  return std::string(reinterpret_cast<const char*>(p) + begin, end - begin);
}

struct VarInfo {
  std::string name;
  bool numeric = true;
  std::size_t length = 8;
  std::size_t position = 0;
};

bool is_missing_sentinel_byte(std::uint8_t b) {
  return b == 0x2E || (b >= 0x41 && b <= 0x5A) || b == 0x5F;
}

}  // namespace

double ibm_to_ieee(const std::uint8_t bytes[8]) {
  const std::uint8_t b0 = bytes[0];
  const int sign = (b0 & 0x80) ? -1 : 1;
  const int exponent16 = b0 & 0x7F;  // base-16 exponent, bias 64
  std::uint64_t mantissa = 0;        // 56-bit fraction
  for (int i = 1; i < 8; ++i) mantissa = (mantissa << 8) | bytes[i];
  if (mantissa == 0) return 0.0;
  // value = sign * mantissa/2^56 * 16^(exponent16-64)
  return sign * std::ldexp(static_cast<double>(mantissa), 4 * (exponent16 - 64) - 56);
}

RawTable parse_xpt(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % kRecord != 0)
    raise(Errc::truncated_record, "file length " + std::to_string(bytes.size()) +
                                      " is not a multiple of 80 bytes");
  const std::size_t nrec = bytes.size() / kRecord;
  auto record = [&](std::size_t i) { return bytes.subspan(i * kRecord, kRecord); };

  if (nrec < 8) raise(Errc::malformed_header, "file too short for library and member headers");

  if (!starts_with(record(0), kLibraryHeader)) {
    if (starts_with(record(0), kLibV8Header))
      raise(Errc::unsupported_version, "XPORT v8/v9 library header; only v5 is supported");
    raise(Errc::malformed_header, "record 0 is not an XPORT v5 library header");
  }
  // records 1-2: real header records (creation/modification stamps); skipped

  if (!starts_with(record(3), kMemberHeader))
    raise(Errc::malformed_header, "record 3 is not a MEMBER header");
  const std::string namestr_size_str(reinterpret_cast<const char*>(record(3).data()) + 74, 4);
  std::size_t namestr_size = 0;
  if (namestr_size_str == "0140") namestr_size = 140;
  else if (namestr_size_str == "0136") namestr_size = 136;
  else
    raise(Errc::unsupported_version,
          "member NAMESTR record size '" + namestr_size_str + "' (expected 0140 or 0136)");

  if (!starts_with(record(4), kDscrptrHeader))
    raise(Errc::malformed_header, "record 4 is not a DSCRPTR header");
  // records 5-6: member description records; skipped

  if (!starts_with(record(7), kNamestrHeader))
    raise(Errc::malformed_header, "record 7 is not a NAMESTR header");
  const std::string count_str(reinterpret_cast<const char*>(record(7).data()) + 54, 4);
  std::size_t nvars = 0;
  for (char c : count_str) {
    if (c < '0' || c > '9')
      raise(Errc::malformed_header, "bad variable count field '" + count_str + "'");
    nvars = nvars * 10 + static_cast<std::size_t>(c - '0');
  }
  if (nvars == 0) raise(Errc::malformed_header, "member declares zero variables");

  const std::size_t namestr_bytes = nvars * namestr_size;
  const std::size_t namestr_records = (namestr_bytes + kRecord - 1) / kRecord;
  if (8 + namestr_records >= nrec)
    raise(Errc::truncated_record, "NAMESTR block extends past end of file");

  std::vector<VarInfo> vars(nvars);
  for (std::size_t v = 0; v < nvars; ++v) {
    const std::size_t off = (8 * kRecord) + v * namestr_size;
    const std::uint8_t* p = bytes.data() + off;
    VarInfo& var = vars[v];
    const std::uint16_t ntype = read_u16(p);
    if (ntype != 1 && ntype != 2)
      raise(Errc::malformed_header,
            "variable " + std::to_string(v + 1) + " has unknown type " + std::to_string(ntype));
    var.numeric = ntype == 1;
    var.length = read_u16(p + 4);
    var.name = to_upper(trimmed_ascii(p + 8, 8));
    var.position = read_u32(p + 84);
    if (var.length == 0 || (var.numeric && (var.length < 2 || var.length > 8)))
      raise(Errc::malformed_header, "variable " + var.name + " has invalid length " +
                                        std::to_string(var.length));
  }

  const std::size_t obs_header_idx = 8 + namestr_records;
  if (!starts_with(record(obs_header_idx), kObsHeader))
    raise(Errc::malformed_header,
          "record " + std::to_string(obs_header_idx) + " is not an OBS header");

  std::size_t row_len = 0;
  for (const auto& v : vars) row_len = std::max(row_len, v.position + v.length);

  // Observation bytes run from after the OBS header to EOF or the next member.
  std::size_t obs_end = nrec;
  for (std::size_t r = obs_header_idx + 1; r < nrec; ++r) {
    if (starts_with(record(r), kMemberHeader)) {
      obs_end = r;
      logging::info("parse_xpt: multiple members present; reading the first only");
      break;
    }
  }
  const std::uint8_t* obs = bytes.data() + (obs_header_idx + 1) * kRecord;
  const std::size_t obs_bytes = (obs_end - obs_header_idx - 1) * kRecord;

  std::size_t nrows = row_len == 0 ? 0 : obs_bytes / row_len;
  const std::size_t leftover = obs_bytes - nrows * row_len;
  for (std::size_t i = 0; i < leftover; ++i) {
    if (obs[nrows * row_len + i] != ' ')
      raise(Errc::truncated_record, "observation block ends with a partial record at byte " +
                                        std::to_string((obs_header_idx + 1) * kRecord +
                                                       nrows * row_len + i));
  }
  // Trailing all-blank rows are record padding, not data.
  while (nrows > 0) {
    const std::uint8_t* row = obs + (nrows - 1) * row_len;
    if (std::all_of(row, row + row_len, [](std::uint8_t b) { return b == ' '; })) --nrows;
    else break;
  }

  std::vector<std::string> names;
  names.reserve(nvars);
  for (const auto& v : vars) names.push_back(v.name);
  RawTable table(std::move(names));

  std::uint8_t field[8];
  for (std::size_t r = 0; r < nrows; ++r) {
    const std::uint8_t* row = obs + r * row_len;
    std::vector<Cell> cells;
    cells.reserve(nvars);
    for (const auto& v : vars) {
      const std::uint8_t* p = row + v.position;
      if (v.numeric) {
        std::memset(field, 0, sizeof(field));  // short fields are zero-padded on the right
        std::memcpy(field, p, v.length);
        const bool rest_zero = std::all_of(field + 1, field + 8, [](std::uint8_t b) { return b == 0; });
        if (rest_zero && is_missing_sentinel_byte(field[0]))
          cells.push_back(Missing{static_cast<char>(field[0])});
        else
          cells.push_back(Numeric{ibm_to_ieee(field)});
      } else {
        std::string text = trimmed_ascii(p, v.length);
        if (text.empty()) cells.push_back(Missing{'.'});
        else cells.push_back(Text{std::move(text)});
      }
    }
    table.append_row(std::move(cells));
  }
  return table;
}

RawTable read_xpt_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open '" + path + "'");
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  try {
    return parse_xpt(data);
  } catch (Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

}  // namespace riskscope

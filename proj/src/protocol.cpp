#include "rfidac/protocol.hpp"

#include <array>

#include "rfidac/errors.hpp"

namespace rfidac {
namespace {

constexpr std::array<std::uint16_t, 256> make_crc_table() {
  std::array<std::uint16_t, 256> table{};
  for (unsigned i = 0; i < 256; ++i) {
    std::uint16_t r = static_cast<std::uint16_t>(i << 8);
    for (int bit = 0; bit < 8; ++bit) {
      r = (r & 0x8000) ? static_cast<std::uint16_t>((r << 1) ^ 0x1021)
                       : static_cast<std::uint16_t>(r << 1);
    }
    table[i] = r;
  }
  return table;
}

constexpr auto kCrcTable = make_crc_table();

void put_u32(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

}  // namespace

bool is_known_command(std::uint8_t command) noexcept {
  switch (command) {
    case 0x01: case 0x02: case 0x03: case 0x04: case 0x06: case 0x07:
      return true;
    default:
      return false;
  }
}

std::uint16_t crc16(std::span<const std::uint8_t> data) noexcept {
  std::uint16_t crc = 0xFFFF;
  for (const std::uint8_t byte : data) {
    crc = static_cast<std::uint16_t>((crc << 8) ^ kCrcTable[((crc >> 8) ^ byte) & 0xFF]);
  }
  return crc;
}

Bytes encode_frame(const Frame& frame) {
  if (frame.payload.size() > kMaxPayload) {
    throw Error(Errc::PayloadTooLong,
                "frame payload of " + std::to_string(frame.payload.size()) + " bytes exceeds 64");
  }
  Bytes out;
  out.reserve(kFrameOverhead + frame.payload.size());
  out.push_back(kSof0);
  out.push_back(kSof1);
  out.push_back(static_cast<std::uint8_t>(1 + frame.payload.size()));
  out.push_back(frame.command);
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  const std::uint16_t crc = crc16(std::span(out).subspan(2));
  out.push_back(static_cast<std::uint8_t>(crc >> 8));
  out.push_back(static_cast<std::uint8_t>(crc));
  return out;
}

// Each position is decided from bytes at or after it, and a position that
// needs more input than is available ends the scan. Feeding a stream in any
// chunking therefore yields the same frames and defect count.
DecodeResult decode_stream(std::span<const std::uint8_t> buf) {
  DecodeResult result;
  std::size_t pos = 0;
  const std::size_t n = buf.size();
  while (pos < n) {
    if (buf[pos] != kSof0) {
      ++result.defects;
      ++pos;
      continue;
    }
    if (pos + 1 >= n) break;
    if (buf[pos + 1] != kSof1) {
      ++result.defects;
      ++pos;
      continue;
    }
    if (pos + 2 >= n) break;
    const std::size_t len = buf[pos + 2];
    if (len == 0 || len > kMaxPayload + 1) {
      ++result.defects;
      ++pos;
      continue;
    }
    const std::size_t total = 3 + len + 2;
    if (pos + total > n) break;
    const auto body = buf.subspan(pos + 2, 1 + len);
    const std::uint16_t wire_crc =
        static_cast<std::uint16_t>((buf[pos + 3 + len] << 8) | buf[pos + 4 + len]);
    if (crc16(body) != wire_crc) {
      ++result.defects;
      ++pos;
      continue;
    }
    result.frames.emplace_back(buf[pos + 3],
                               Bytes(buf.begin() + static_cast<std::ptrdiff_t>(pos + 4),
                                     buf.begin() + static_cast<std::ptrdiff_t>(pos + 3 + len)));
    pos += total;
  }
  result.remainder.assign(buf.begin() + static_cast<std::ptrdiff_t>(pos), buf.end());
  return result;
}

Frame make_ping() { return Frame(Command::Ping); }

Frame make_set_scan(bool on) { return Frame(Command::SetScan, Bytes{static_cast<std::uint8_t>(on ? 1 : 0)}); }

Frame make_tag_detected(const TagDetected& d) {
  Bytes payload;
  payload.reserve(7);
  payload.push_back(d.reader_id);
  put_u32(payload, d.uid);
  payload.push_back(static_cast<std::uint8_t>(d.emf_millivolts >> 8));
  payload.push_back(static_cast<std::uint8_t>(d.emf_millivolts));
  return Frame(Command::TagDetected, std::move(payload));
}

Frame make_write_tag(const WriteTagRequest& r) {
  Bytes payload;
  payload.reserve(5);
  put_u32(payload, r.uid);
  payload.push_back(static_cast<std::uint8_t>(r.type));
  return Frame(Command::WriteTag, std::move(payload));
}

Frame make_ack(std::uint8_t answered) { return Frame(Command::Ack, Bytes{answered}); }
Frame make_nak(std::uint8_t answered) { return Frame(Command::Nak, Bytes{answered}); }

std::optional<bool> parse_set_scan(const Frame& f) {
  if (!f.is(Command::SetScan) || f.payload.size() != 1 || f.payload[0] > 1) return std::nullopt;
  return f.payload[0] == 1;
}

std::optional<TagDetected> parse_tag_detected(const Frame& f) {
  if (!f.is(Command::TagDetected) || f.payload.size() != 7) return std::nullopt;
  const auto* p = f.payload.data();
  return TagDetected{p[0], get_u32(p + 1),
                     static_cast<std::uint16_t>((p[5] << 8) | p[6])};
}

std::optional<WriteTagRequest> parse_write_tag(const Frame& f) {
  if (!f.is(Command::WriteTag) || f.payload.size() != 5 || f.payload[4] > 1) return std::nullopt;
  return WriteTagRequest{get_u32(f.payload.data()), static_cast<TagType>(f.payload[4])};
}

std::optional<std::uint8_t> parse_reply(const Frame& f) {
  if ((!f.is(Command::Ack) && !f.is(Command::Nak)) || f.payload.size() != 1) return std::nullopt;
  return f.payload[0];
}

}  // namespace rfidac

#pragma once

// Reader <-> host framing. Grammar (see PROTOCOL.md):
//
//   0xAA 0x55 | len | command | payload[len-1] | crc_hi crc_lo
//
// len = 1 + payload size (1..65); the CRC-16/CCITT-FALSE covers len, command
// and payload.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rfidac/tag.hpp"

namespace rfidac {

using Bytes = std::vector<std::uint8_t>;

enum class Command : std::uint8_t {
  Ping = 0x01,
  SetScan = 0x02,
  TagDetected = 0x03,
  WriteTag = 0x04,
  Ack = 0x06,
  Nak = 0x07,
};

inline constexpr std::uint8_t kSof0 = 0xAA;
inline constexpr std::uint8_t kSof1 = 0x55;
inline constexpr std::size_t kMaxPayload = 64;
inline constexpr std::size_t kFrameOverhead = 6;  // SOF(2) + len + command + CRC(2)

bool is_known_command(std::uint8_t command) noexcept;

struct Frame {
  std::uint8_t command = 0;
  Bytes payload;

  Frame() = default;
  Frame(std::uint8_t cmd, Bytes data) : command(cmd), payload(std::move(data)) {}
  Frame(Command cmd, Bytes data = {})
      : command(static_cast<std::uint8_t>(cmd)), payload(std::move(data)) {}

  /// False for command bytes outside the Command enumeration; such frames
  /// still decode so the host can log them.
  bool known() const noexcept { return is_known_command(command); }
  bool is(Command c) const noexcept { return command == static_cast<std::uint8_t>(c); }

  friend bool operator==(const Frame&, const Frame&) = default;
};

/// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, MSB first, no final xor.
std::uint16_t crc16(std::span<const std::uint8_t> data) noexcept;

/// Throws Error(PayloadTooLong) past kMaxPayload bytes.
Bytes encode_frame(const Frame& frame);

struct DecodeResult {
  std::vector<Frame> frames;
  /// Bytes discarded while hunting for a valid frame (stray bytes, bad
  /// lengths, CRC failures each discard one byte at a time).
  std::size_t defects = 0;
  /// Trailing bytes that may still begin a frame; prepend to the next chunk.
  Bytes remainder;
};

DecodeResult decode_stream(std::span<const std::uint8_t> buffer);

// Typed payloads.

struct TagDetected {
  std::uint8_t reader_id = 0;
  std::uint32_t uid = 0;
  std::uint16_t emf_millivolts = 0;

  friend bool operator==(const TagDetected&, const TagDetected&) = default;
};

struct WriteTagRequest {
  std::uint32_t uid = 0;
  TagType type = TagType::Staff;

  friend bool operator==(const WriteTagRequest&, const WriteTagRequest&) = default;
};

Frame make_ping();
Frame make_set_scan(bool on);
Frame make_tag_detected(const TagDetected& detected);
Frame make_write_tag(const WriteTagRequest& request);
/// ACK/NAK carry the command byte they answer.
Frame make_ack(std::uint8_t answered);
Frame make_nak(std::uint8_t answered);

std::optional<bool> parse_set_scan(const Frame& frame);
std::optional<TagDetected> parse_tag_detected(const Frame& frame);
std::optional<WriteTagRequest> parse_write_tag(const Frame& frame);
/// Answered command of an ACK or NAK frame.
std::optional<std::uint8_t> parse_reply(const Frame& frame);

}  // namespace rfidac

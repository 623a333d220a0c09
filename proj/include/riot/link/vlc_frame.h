#ifndef RIOT_LINK_VLC_FRAME_H
#define RIOT_LINK_VLC_FRAME_H

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "riot/sim/time.h"

namespace riot::link {

/*
 * Wire layout, 23 bytes, each field one byte unless noted:
 *
 *   0 src | 1 dst | 2 start (0xA5) | 3 type | 4 size | 5..20 payload (16) |
 *   21 checksum | 22 end (0x5A)
 *
 * The payload area is always 16 bytes; bytes past `size` are zero. The
 * checksum is chosen so that the byte sum of the whole frame is 0 mod 256.
 * The frame is packed big-endian into 32-bit chunks; the last chunk carries
 * one trailing zero byte of padding.
 */
inline constexpr std::size_t kVlcFrameBytes = 23;
inline constexpr std::size_t kVlcMaxPayload = 16;
inline constexpr std::size_t kVlcChunkCount = 6;  // ceil(23 * 8 / 32)
inline constexpr std::uint8_t kVlcStartMarker = 0xA5;
inline constexpr std::uint8_t kVlcEndMarker = 0x5A;

struct VlcFrame {
  std::uint8_t src = 0;
  std::uint8_t dst = 0;
  std::uint8_t payload_type = 0;
  std::vector<std::uint8_t> payload;

  bool operator==(const VlcFrame&) const = default;
};

struct ChunkStream {
  std::vector<std::uint32_t> chunks;
  sim::SimDuration inter_chunk_delay = sim::SimDuration::millis(100);
  sim::SimDuration per_chunk_airtime = sim::SimDuration::millis(68);

  /// First chunk start to last chunk end.
  sim::SimDuration span() const;
  sim::SimDuration airtime() const { return per_chunk_airtime * static_cast<std::int64_t>(chunks.size()); }
};

class FrameError : public std::runtime_error {
 public:
  enum class Kind { Oversize, Truncation, Framing, Integrity };
  FrameError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::array<std::uint8_t, kVlcFrameBytes> serialize(const VlcFrame& frame);
/// Two's-complement byte sum over every byte except the checksum slot.
std::uint8_t vlc_checksum(std::span<const std::uint8_t> frame_bytes);

ChunkStream encode_vlc_frame(const VlcFrame& frame);
VlcFrame decode_vlc_chunks(const ChunkStream& stream);

}  // namespace riot::link

#endif  // RIOT_LINK_VLC_FRAME_H

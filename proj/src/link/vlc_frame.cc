#include "riot/link/vlc_frame.h"

#include <string>

namespace riot::link {

namespace {

constexpr std::size_t kSrc = 0;
constexpr std::size_t kDst = 1;
constexpr std::size_t kStart = 2;
constexpr std::size_t kType = 3;
constexpr std::size_t kSize = 4;
constexpr std::size_t kPayload = 5;
constexpr std::size_t kChecksum = 21;
constexpr std::size_t kEnd = 22;

}  // namespace

sim::SimDuration ChunkStream::span() const {
  if (chunks.empty()) return {};
  const auto n = static_cast<std::int64_t>(chunks.size());
  return per_chunk_airtime * n + inter_chunk_delay * (n - 1);
}

std::uint8_t vlc_checksum(std::span<const std::uint8_t> bytes) {
  unsigned sum = 0;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (i != kChecksum) sum += bytes[i];
  }
  return static_cast<std::uint8_t>((256u - (sum & 0xFFu)) & 0xFFu);
}

std::array<std::uint8_t, kVlcFrameBytes> serialize(const VlcFrame& frame) {
  if (frame.payload.size() > kVlcMaxPayload) {
    throw FrameError(FrameError::Kind::Oversize,
                     "VLC payload of " + std::to_string(frame.payload.size()) +
                         " bytes exceeds the 16-byte limit");
  }
  std::array<std::uint8_t, kVlcFrameBytes> b{};
  b[kSrc] = frame.src;
  b[kDst] = frame.dst;
  b[kStart] = kVlcStartMarker;
  b[kType] = frame.payload_type;
  b[kSize] = static_cast<std::uint8_t>(frame.payload.size());
  for (std::size_t i = 0; i < frame.payload.size(); ++i) b[kPayload + i] = frame.payload[i];
  b[kEnd] = kVlcEndMarker;
  b[kChecksum] = vlc_checksum(b);
  return b;
}

ChunkStream encode_vlc_frame(const VlcFrame& frame) {
  const auto bytes = serialize(frame);
  ChunkStream out;
  out.chunks.assign(kVlcChunkCount, 0u);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const unsigned shift = 24u - 8u * static_cast<unsigned>(i % 4);
    out.chunks[i / 4] |= static_cast<std::uint32_t>(bytes[i]) << shift;
  }
  return out;
}

VlcFrame decode_vlc_chunks(const ChunkStream& stream) {
  if (stream.chunks.size() != kVlcChunkCount) {
    throw FrameError(FrameError::Kind::Truncation,
                     "expected 6 chunks, got " + std::to_string(stream.chunks.size()));
  }
  std::array<std::uint8_t, kVlcChunkCount * 4> raw{};
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const unsigned shift = 24u - 8u * static_cast<unsigned>(i % 4);
    raw[i] = static_cast<std::uint8_t>((stream.chunks[i / 4] >> shift) & 0xFFu);
  }
  if (raw[kVlcFrameBytes] != 0) throw FrameError(FrameError::Kind::Framing, "nonzero chunk padding");
  const std::span<const std::uint8_t> b(raw.data(), kVlcFrameBytes);
  if (b[kStart] != kVlcStartMarker) throw FrameError(FrameError::Kind::Framing, "bad start marker");
  if (b[kEnd] != kVlcEndMarker) throw FrameError(FrameError::Kind::Framing, "bad end marker");

  unsigned sum = 0;
  for (const auto v : b) sum += v;
  if ((sum & 0xFFu) != 0) throw FrameError(FrameError::Kind::Integrity, "checksum mismatch");

  const std::size_t size = b[kSize];
  if (size > kVlcMaxPayload) throw FrameError(FrameError::Kind::Framing, "payload size field > 16");
  for (std::size_t i = kPayload + size; i < kChecksum; ++i) {
    if (b[i] != 0) throw FrameError(FrameError::Kind::Framing, "nonzero payload padding");
  }
  VlcFrame f;
  f.src = b[kSrc];
  f.dst = b[kDst];
  f.payload_type = b[kType];
  f.payload.assign(b.begin() + kPayload, b.begin() + kPayload + static_cast<std::ptrdiff_t>(size));
  return f;
}

}  // namespace riot::link

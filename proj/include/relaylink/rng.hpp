#pragma once

#include <array>
#include <cstdint>

namespace relaylink {

namespace detail {
/// One Philox4x32 block with 10 rounds.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);
}  // namespace detail

/// Counter-based generator (Philox4x32-10). The key holds the seed, the upper
/// half of the counter holds the stream id, so every (seed, stream_id) pair
/// names an independent, reproducible substream without any shared state.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  /// Next 64 random bits.
  std::uint64_t next_u64();

  /// Uniform draw on the open interval (0, 1) with 53-bit resolution.
  double uniform();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
};

/// Creates the substream for (seed, stream_id).
inline RngStream rng_stream(std::uint64_t seed, std::uint64_t stream_id) {
  return RngStream(seed, stream_id);
}

}  // namespace relaylink

#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace randset {

// Philox4x32-10 counter-based generator. The 64-bit seed is the key; the
// 64-bit stream id occupies the upper half of the counter, so every
// (seed, stream_id) pair indexes a disjoint sequence of blocks.
class RngStream {
 public:
  using result_type = std::uint64_t;

  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next_u64(); }

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  // [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  // (0, 1); safe under log().
  double uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }
  // Exp(1) by inversion.
  double exponential() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  // Raw ten-round bijection, exposed for known-answer tests.
  static Block philox(Block counter, Key key) noexcept;

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_index_ = 0;
  Block buffer_{};
  int used_ = 4;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t hash_name(std::string_view name) noexcept;

// Stream id for one replicate of one experiment. Depends only on its own
// coordinates, so growing the lambda grid never perturbs existing streams.
std::uint64_t derive_stream(std::string_view experiment, std::uint64_t lambda_index,
                            std::uint64_t replicate) noexcept;

}  // namespace randset

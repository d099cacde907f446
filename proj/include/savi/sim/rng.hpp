#pragma once

#include <array>
#include <cstdint>

namespace savi::sim {

/// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as easy
/// as 1, 2, 3"). Counter-based: block(c, k) is a pure function.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key) noexcept;
};

/// Algorithm identifier recorded in simulation reports.
inline constexpr const char* kRngAlgorithm = "philox4x32-10";

/// Sequential stream for one replication. The counter is
/// (draw index lo, draw index hi, replication lo, replication hi) and the key is
/// the 64-bit seed, so every (seed, replication) pair owns an independent
/// substream and serial and parallel runs agree draw for draw.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t replication) noexcept;

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;

 private:
  void refill() noexcept;

  Philox4x32::Key key_;
  std::uint64_t replication_;
  std::uint64_t block_index_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
};

}  // namespace savi::sim

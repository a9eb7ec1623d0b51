#pragma once

#include <array>
#include <cstdint>

namespace rpca {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Output for a
/// given (counter, key) is fixed, so streams are reproducible on any platform.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(const Counter& counter, const Key& key) noexcept;
};

/// Standard normal draws by Box–Muller over a Philox stream keyed by `seed`.
/// Block b uses counter (b_lo, b_hi, stream_lo, stream_hi).
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  double next() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double next_uniform() noexcept;

 private:
  void refill() noexcept;

  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> words_{};
  int words_used_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rpca

#pragma once

#include <array>
#include <cstdint>

namespace epsmatch {

/// Identifies one reproducible random stream: a 64-bit seed plus a 64-bit
/// stream id. Equal seeds give identical draws on any thread.
struct Seed {
  std::uint64_t value = 0;
  std::uint64_t stream = 0;

  /// Derives the independent sub-stream used for replicate `index`.
  [[nodiscard]] Seed substream(std::uint64_t index) const noexcept;

  friend bool operator==(const Seed&, const Seed&) = default;
};

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Counter-based generator over a Seed. The key is the seed value, the upper
/// half of the counter holds the stream id and the lower half a block index.
/// Satisfies std::uniform_random_bit_generator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(Seed seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept;

  /// Uniform on the open interval (0,1); 53-bit resolution, 0 is redrawn.
  double uniform_open() noexcept;
  /// Uniform on [0,1).
  double uniform() noexcept;
  /// Exponential with rate 1.
  double exponential() noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int available_ = 0;
};

}  // namespace epsmatch

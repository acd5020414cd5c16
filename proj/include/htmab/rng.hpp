#pragma once

#include <array>
#include <cstdint>

namespace htmab {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"). Exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// Counter-based generator. The key is the seed and the upper half of the
// counter is the stream id, so (seed, stream_id) pairs give disjoint,
// reproducible sequences with no shared state.
class SeededRng {
 public:
  using result_type = std::uint64_t;

  explicit SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();

  // Standard normal (Marsaglia polar method).
  double normal();

  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  // Number of 64-bit words consumed so far.
  std::uint64_t position() const { return block_ * 2 + lane_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  unsigned lane_ = 2;
  std::array<std::uint64_t, 2> buffer_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace htmab

#pragma once

#include <array>
#include <cstdint>

namespace dunkl {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Substream identifiers; one independent stream per (seed, path, substream).
enum class Substream : std::uint32_t {
  diffusion = 0,
  clock = 1,
  poisson = 2,
  oracle = 3,
  auxiliary = 4,
};

/// Counter-based stream: key = master seed, counter = (block, substream,
/// path_lo, path_hi). Path i is reproducible in isolation and independent of
/// scheduling.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t path, std::uint32_t substream);
  PhiloxStream(std::uint64_t seed, std::uint64_t path, Substream substream)
      : PhiloxStream(seed, path, static_cast<std::uint32_t>(substream)) {}

  std::uint32_t next_u32();
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  double normal();
  /// Exp(1).
  double exponential();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Mixes (seed, salt) into a derived 64-bit seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace dunkl

#include "dunkl/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

using namespace dunkl;

TEST_CASE("philox4x32-10 known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  CHECK(philox4x32(A4{0, 0, 0, 0}, A2{0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and separated") {
  PhiloxStream a(42, 7, Substream::diffusion), b(42, 7, Substream::diffusion);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u32() == b.next_u32());
  std::set<std::uint32_t> firsts;
  for (std::uint64_t path = 0; path < 4; ++path)
    for (std::uint32_t sub = 0; sub < 5; ++sub) firsts.insert(PhiloxStream(42, path, sub).next_u32());
  firsts.insert(PhiloxStream(43, 0, 0u).next_u32());
  firsts.insert(PhiloxStream(42, std::uint64_t{1} << 40, 0u).next_u32());
  CHECK(firsts.size() == 22);
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
}

TEST_CASE("distribution moments") {
  PhiloxStream s(5, 0, Substream::auxiliary);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, sn4 = 0, se = 0;
  double umin = 1, umax = 0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    umin = std::min(umin, u);
    umax = std::max(umax, u);
    su += u;
    const double z = s.normal();
    sn += z;
    sn2 += z * z;
    sn4 += z * z * z * z;
    se += s.exponential();
  }
  CHECK(umin > 0.0);
  CHECK(umax < 1.0);
  // 5-sigma bands
  CHECK(std::abs(su / n - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(sn / n) < 5 * std::sqrt(1.0 / n));
  CHECK(std::abs(sn2 / n - 1.0) < 5 * std::sqrt(2.0 / n));
  CHECK(std::abs(sn4 / n - 3.0) < 5 * std::sqrt(96.0 / n));
  CHECK(std::abs(se / n - 1.0) < 5 * std::sqrt(1.0 / n));
}

#pragma once

#include <array>
#include <cstdint>

namespace qsb {

// Philox 4x32-10 counter-based generator (Salmon et al., SC'11). Output k of
// stream s under seed q is a pure function of (q, s, k), so parallel workers
// can draw from disjoint substreams without coordination and every stream is
// reproducible across platforms.
class Philox4x32 {
 public:
  explicit Philox4x32(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() noexcept { return at(seed_, stream_, index_++); }

  // uniform on [0,1) with 53 random mantissa bits
  double next_double() noexcept { return (next_u64() >> 11) * 0x1.0p-53; }

  static std::uint64_t at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                        static_cast<std::uint32_t>(seed >> 32)};
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t prod0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t prod1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      ctr = {static_cast<std::uint32_t>(prod1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(prod1),
             static_cast<std::uint32_t>(prod0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(prod0)};
      key[0] += 0x9E3779B9u;  // golden-ratio Weyl increments
      key[1] += 0xBB67AE85u;
    }
    return (std::uint64_t{ctr[1]} << 32) | ctr[0];
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t index_ = 0;
};

}  // namespace qsb

#include "coincsim/seed.hpp"

#include <array>

namespace coincsim {

Rng make_rng(Seed seed) {
  // Expand the 64-bit seed so that nearby seeds give unrelated engine states.
  std::array<std::uint32_t, 8> words{};
  std::uint64_t x = seed.value();
  for (std::size_t i = 0; i < words.size(); i += 2) {
    x = mix64(x);
    words[i] = static_cast<std::uint32_t>(x);
    words[i + 1] = static_cast<std::uint32_t>(x >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

}  // namespace coincsim

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace coincsim {

/// 64-bit stable mixing (splitmix64 finalizer).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a over the label bytes; stable across platforms and builds.
constexpr std::uint64_t label_hash(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed of one random stage. Child seeds are derived by label so that each
/// stage owns an independent generator regardless of evaluation order.
class Seed {
public:
  constexpr Seed() = default;
  constexpr explicit Seed(std::uint64_t value) : value_(value) {}

  constexpr std::uint64_t value() const noexcept { return value_; }
  constexpr Seed child(std::string_view label) const noexcept {
    return Seed{mix64(value_ ^ mix64(label_hash(label)))};
  }

  friend constexpr bool operator==(Seed, Seed) = default;

private:
  std::uint64_t value_{0};
};

struct SeedSpec {
  std::uint64_t master_seed{0};

  /// Seed for stage `label` of acquisition `acquisition_index`.
  constexpr Seed derive(std::uint64_t acquisition_index, std::string_view label) const noexcept {
    std::uint64_t h = mix64(master_seed ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ acquisition_index);
    h = mix64(h ^ label_hash(label));
    return Seed{h};
  }

  friend constexpr bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

using Rng = std::mt19937_64;

Rng make_rng(Seed seed);

}  // namespace coincsim

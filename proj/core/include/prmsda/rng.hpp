#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace prmsda {

/// Deterministic normal/uniform source. Independent streams are derived from
/// an experiment seed plus stream coordinates (member, day, purpose) so that
/// results do not depend on evaluation order or thread count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = mix(seed ^ 0x9e3779b97f4a7c15ULL);
    for (auto c : coords) h = mix(h ^ (c + 0x632be59bd9b4e019ULL));
    return Rng(h);
  }

  /// Standard normal draw.
  double normal() { return normal_(engine_); }
  /// N(mean, sd^2); sd == 0 returns mean without consuming the sequence differently.
  double normal(double mean, double sd) { return mean + sd * normal_(engine_); }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace prmsda

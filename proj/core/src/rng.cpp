#include "regimecast/rng.hpp"

namespace regimecast {
namespace {

// SplitMix64 finalizer; decorrelates nearby seeds before feeding mt19937_64.
std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Rng Rng::stream(std::uint64_t id) const {
  return Rng(splitmix64(seed_ ^ splitmix64(id * 0xd6e8feb86659fd93ULL + 1)));
}

double Rng::uniform() {
  // 53 significant bits, offset by half an ulp to stay inside (0, 1).
  return (static_cast<double>(engine_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

}  // namespace regimecast

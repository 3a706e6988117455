#pragma once

#include <cstdint>
#include <random>

namespace regimecast {

// Seedable random engine with cheap derivation of independent streams.
// Draw sequences are bit-reproducible for a fixed (seed, call order):
// all variate transforms in distributions.hpp are implemented in this
// project rather than delegated to implementation-defined std
// distributions.
//
// Parallel users derive one stream per logical task (chain, forecast
// origin, ...) so results do not depend on scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent stream keyed by id; deterministic in (seed, id).
  Rng stream(std::uint64_t id) const;

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform();

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace regimecast

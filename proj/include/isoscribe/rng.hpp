#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace isoscribe {

// Deterministic seeded random stream. Streams are identified by a 64-bit
// master seed plus a context label; the same (seed, label) pair produces the
// same draw sequence on every platform. Child streams are derived by label
// concatenation, so parallel workers can own independent streams without
// sharing state.
//
// Generator: xoshiro256** seeded through splitmix64 from an FNV-1a hash of
// the label mixed with the master seed.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view label);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double next_double();

  // Uniform in (0, 1); never returns 0 (safe to pass to log()).
  double next_open_double();

  RngStream child(std::string_view label) const;

  std::uint64_t master_seed() const { return master_seed_; }
  const std::string& label() const { return label_; }

 private:
  std::uint64_t master_seed_;
  std::string label_;
  std::uint64_t state_[4];
};

}  // namespace isoscribe

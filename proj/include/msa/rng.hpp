#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace msa {

// splitmix64 step; used to expand seeds and derive independent substreams.
uint64_t splitmix64(uint64_t& state);

// Deterministic substream seed for (base, tag); distinct tags give
// decorrelated streams without consuming the base stream.
uint64_t derive_seed(uint64_t base, uint64_t tag);

// mt19937_64 with hand-rolled output mappings: the standard fixes the raw
// engine bits but not distribution output, and byte-identical results across
// platforms are part of the CLI contract.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  double uniform();                       // [0, 1), 53-bit resolution
  double uniform(double lo, double hi);   // [lo, hi)
  double normal();                        // standard normal, Box-Muller
  double normal(double mu, double sigma);
  int64_t integer(int64_t lo, int64_t hi);  // uniform on [lo, hi] inclusive
  std::vector<int> permutation(int n);      // Fisher-Yates

  Rng substream(uint64_t tag) const { return Rng(derive_seed(base_seed_, tag)); }

 private:
  std::mt19937_64 gen_;
  uint64_t base_seed_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace msa

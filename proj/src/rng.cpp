#include "msa/rng.hpp"

#include <cmath>
#include <numbers>

namespace msa {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t derive_seed(uint64_t base, uint64_t tag) {
  uint64_t s = base ^ (0x9e3779b97f4a7c15ULL * (tag + 1));
  uint64_t a = splitmix64(s);
  uint64_t b = splitmix64(s);
  return a ^ (b << 1);
}

Rng::Rng(uint64_t seed) : base_seed_(seed) {
  uint64_t s = seed;
  std::seed_seq seq{static_cast<uint32_t>(splitmix64(s)), static_cast<uint32_t>(splitmix64(s)),
                    static_cast<uint32_t>(splitmix64(s)), static_cast<uint32_t>(splitmix64(s))};
  gen_.seed(seq);
}

double Rng::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u clamped away from 0 so log stays finite.
  double u = uniform();
  if (u <= 0.0) u = 0x1.0p-53;
  const double v = uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  const double a = 2.0 * std::numbers::pi * v;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

double Rng::normal(double mu, double sigma) { return mu + sigma * normal(); }

int64_t Rng::integer(int64_t lo, int64_t hi) {
  const auto range = static_cast<uint64_t>(hi - lo) + 1;
  if (range == 0) return lo + static_cast<int64_t>(gen_());  // full 64-bit span
  // Fixed-point multiply keeps the mapping platform-stable; bias is
  // 2^-64 per value, irrelevant at the scales used here.
  const uint64_t x = gen_();
  const auto wide = static_cast<__uint128_t>(x) * static_cast<__uint128_t>(range);
  return lo + static_cast<int64_t>(static_cast<uint64_t>(wide >> 64));
}

std::vector<int> Rng::permutation(int n) {
  std::vector<int> p(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(integer(0, i));
    std::swap(p[static_cast<size_t>(i)], p[static_cast<size_t>(j)]);
  }
  return p;
}

}  // namespace msa

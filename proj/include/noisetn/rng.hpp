// Copyright 2026 The noisetn developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NOISETN_RNG_HPP
#define NOISETN_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace noisetn {

// Deterministic pseudo-random generator (splitmix64 core).
//
// std::uniform_real_distribution and friends are implementation-defined, but
// datasets, initializations and sampled noise specs must be bit-identical for
// a given seed on every platform, so all randomness in the library goes
// through this class.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {
    for (int i = 0; i < 4; ++i) next_u64();  // decorrelate nearby seeds
  }

  // Independent child stream, derived deterministically from (seed, stream).
  static Rng child(uint64_t seed, uint64_t stream) {
    uint64_t h = seed ^ 0x9e3779b97f4a7c15ull;
    h ^= stream + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return Rng(h);
  }

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0,1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(t);
    have_cached_ = true;
    return r * std::cos(t);
  }

  std::complex<double> complex_gaussian(double sigma) {
    double re = sigma * gaussian();
    double im = sigma * gaussian();
    return {re, im};
  }

 private:
  uint64_t state_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace noisetn

#endif  // NOISETN_RNG_HPP

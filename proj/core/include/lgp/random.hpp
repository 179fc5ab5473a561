// core/include/lgp/random.hpp

// Copyright  2026  LGP Project Authors

// See ../../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef LGP_RANDOM_HPP_
#define LGP_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace lgp {

// Seeded random stream with fully pinned-down transformations. The mt19937_64
// engine is specified bit-for-bit by the standard, but the standard
// distributions are not, so the uniform/normal/exponential transforms are
// spelled out here. Same seed, same platform or not, same stream.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed), has_spare_(false), spare_(0.0) {}

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  uint64_t UniformInt(uint64_t bound) {
    uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      uint64_t x = engine_();
      if (x >= threshold) return x % bound;
    }
  }

  // Standard normal via Box-Muller; the second deviate of each pair is cached.
  double Gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - Uniform();  // (0, 1], keeps the log finite
    double u2 = Uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Exponential with the given mean.
  double Exponential(double mean) {
    return -mean * std::log(1.0 - Uniform());
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_;
  double spare_;
};

}  // namespace lgp

#endif  // LGP_RANDOM_HPP_

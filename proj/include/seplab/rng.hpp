// Copyright 2026 The seplab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEPLAB_RNG_HPP_
#define SEPLAB_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <limits>

namespace seplab {

// SplitMix64 finalizer. Every derived seed in the project goes through this
// function, so seed derivation is identical on every platform:
//
//   Mix64(z) = ((z ^ z>>30) * 0xbf58476d1ce4e5b9 ^ ...>>27) * 0x94d049bb133111eb
//              ^ ...>>31
constexpr std::uint64_t Mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a child seed from a master seed and up to two stream indices:
//   DeriveSeed(m, a, b) = Mix64(Mix64(Mix64(m) + G*(a+1)) + G*(b+1)),
// with G = 0x9e3779b97f4a7c15. Child streams depend only on (m, a, b), never on
// the order in which they are requested.
constexpr std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t a,
                                   std::uint64_t b = 0) noexcept {
  constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  return Mix64(Mix64(Mix64(master) + kGolden * (a + 1)) + kGolden * (b + 1));
}

// SplitMix64 generator. Satisfies UniformRandomBitGenerator, so it also works
// with <random> distributions and std::shuffle, but Uniform01 and Normal below
// are used throughout so that draws are identical across standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return Mix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * Uniform01();
  }

  // Uniform integer in [0, bound); bound must be > 0.
  std::uint64_t Below(std::uint64_t bound) noexcept {
    // Lemire's multiply-shift with rejection.
    std::uint64_t x = (*this)();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = (*this)();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Standard normal via the Marsaglia polar method.
  double Normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * Uniform01() - 1.0;
      v = 2.0 * Uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace seplab

#endif  // SEPLAB_RNG_HPP_

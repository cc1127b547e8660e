//
// Copyright 2026 The ssp Authors
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
//
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ssp {

namespace detail {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Counter-based generator: every output is a hash of (key, counter), so a
// draw can be reproduced from (seed, stream, counter) alone.  Streams are
// split deterministically; results never depend on how work is divided
// between threads as long as each logical unit (secret index, column,
// trial, grid point) owns its own stream.
//
// Stream conventions used across the library:
//   mechanisms:  stream = secret index (Alg. 1, dataset mode),
//                stream = column index (AP / DistP / DP-histogram)
//   privacy:     stream = Monte-Carlo trial index
//   sweeps:      stream = grid-point index, substreams per purpose
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(detail::splitmix64(detail::splitmix64(seed) ^
                                detail::splitmix64(stream ^ 0x5353505f524e47ULL))) {}

  // Derived generator for a substream; independent of this one's counter.
  Rng stream(std::uint64_t substream) const {
    Rng r(0);
    r.key_ = detail::splitmix64(key_ ^ detail::splitmix64(substream + 0x1d8e4e27c47d124fULL));
    return r;
  }

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return detail::splitmix64(key_ ^ counter_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Box-Muller; the spare draw is cached so normals come in deterministic pairs.
  double gaussian(double mean, double sd) {
    if (have_spare_) {
      have_spare_ = false;
      return mean + sd * spare_;
    }
    double u1 = next_unit();
    double u2 = next_unit();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return mean + sd * r * std::cos(t);
  }

  // Zero-mean Laplace with the given scale (inverse CDF).
  double laplace(double scale) {
    double u = next_unit() - 0.5;
    double a = 1.0 - 2.0 * std::fabs(u);
    if (a <= 0.0) a = 0x1.0p-53;
    const double sign = u < 0.0 ? -1.0 : 1.0;
    return -sign * scale * std::log(a);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ssp

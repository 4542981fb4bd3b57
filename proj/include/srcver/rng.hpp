// Copyright 2026  srcver authors

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

#pragma once

#include <cstdint>
#include <string_view>

namespace srcver {

// Portable seeded randomness. The integer stream is xoshiro256** seeded
// through SplitMix64, so sampling decisions (reference sets, balanced
// nontarget picks) reproduce bit-for-bit on any platform or language that
// implements the same two algorithms. Gaussian draws go through libm and are
// reproducible per platform.

std::uint64_t splitmix64(std::uint64_t &state);

// FNV-1a 64-bit; used to turn ids into sub-stream keys.
std::uint64_t fnv1a64(std::string_view bytes);

// Mixes a base seed with stream/index keys into an independent seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index = 0);

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Uniform integer on [0, bound), rejection sampled, bound > 0.
  std::uint64_t below(std::uint64_t bound);

  // Standard normal via the Box-Muller transform (cosine branch only).
  double normal();

 private:
  std::uint64_t s_[4];
};

}  // namespace srcver

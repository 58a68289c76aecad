// Copyright 2026 The lrgraphon Authors.
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

#pragma once

// Random streams used throughout the library.
//
// Every stream is a std::mt19937_64 (whose output sequence is fixed by the
// C++ standard) and doubles are formed as (x >> 11) * 2^-53, so a port that
// reproduces MT19937-64 and this conversion reproduces every draw. Trial
// seeds are base_seed + trial_index. Within one trial the latent stream is
// seeded with the trial seed and the edge stream with SplitMix64(trial seed).

#include <cstdint>
#include <random>

namespace lrgraphon {

using Rng = std::mt19937_64;

// Uniform double on [0, 1) with 53 random bits.
inline double UniformDouble(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// One SplitMix64 output step, used to decorrelate derived seeds.
inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t TrialSeed(std::uint64_t base_seed,
                               std::uint64_t trial_index) {
  return base_seed + trial_index;
}

inline std::uint64_t EdgeSeed(std::uint64_t trial_seed) {
  return SplitMix64(trial_seed);
}

}  // namespace lrgraphon

// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace vmr {

/// Seeded generator used for every random draw in the project.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are not (their algorithms are
/// implementation-defined), so uniforms and normals are derived here by hand:
///   uniform() = (next() >> 11) * 2^-53          in [0, 1)
///   normal()  = Box-Muller, cosine branch only  (one draw per two uniforms)
/// This keeps generated traces byte-identical across platforms and compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  double normal();
  /// Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  std::vector<double> normal_vector(std::size_t dimension);

 private:
  std::mt19937_64 engine_;
};

/// 64-bit FNV-1a, used to derive stable seeds from text.
std::uint64_t fnv1a64(std::string_view text, std::uint64_t basis = 0xcbf29ce484222325ULL);

/// SplitMix64 finalizer; mixes a counter or hash into a well-spread seed.
std::uint64_t mix64(std::uint64_t x);

}  // namespace vmr

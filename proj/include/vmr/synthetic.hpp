// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "vmr/trace_io.hpp"

namespace vmr {

struct PlateauTraceSpec {
  std::size_t frames = 30;
  std::size_t dimension = 64;
  std::size_t plateaus = 3;
  // Per-frame Gaussian perturbation, as a fraction of the plateau base norm.
  double noise = 0.0;
  // Each frame is scaled by a factor drawn uniformly from [1 - j, 1 + j].
  double magnitude_jitter = 0.0;
  double frame_interval = 1.0;
  std::uint64_t seed = 0;
  std::string source_id = "synthetic";

  void validate() const;
};

/// Trace of `plateaus` contiguous runs of near-duplicate frames. Plateau
/// bases are orthonormal when plateaus <= dimension, so noise-free plateaus
/// are mutually orthogonal. Frame i sits at i * frame_interval seconds; the
/// planted plateau ranges are recorded in the header.
Trace generate_plateau_trace(const PlateauTraceSpec& spec);

}  // namespace vmr

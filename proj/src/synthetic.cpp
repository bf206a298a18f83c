// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmr/synthetic.hpp"

#include <cmath>

#include <fmt/format.h>

#include "vmr/error.hpp"
#include "vmr/random.hpp"

namespace vmr {
namespace {

std::vector<std::vector<double>> plateau_bases(Rng& rng, std::size_t count, std::size_t dim) {
  std::vector<std::vector<double>> bases;
  bases.reserve(count);
  const bool orthogonal = count <= dim;
  while (bases.size() < count) {
    std::vector<double> v = rng.normal_vector(dim);
    if (orthogonal) {
      // Two passes of Gram-Schmidt keep the basis orthogonal to rounding.
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : bases) {
          double proj = 0.0;
          for (std::size_t i = 0; i < dim; ++i) proj += v[i] * b[i];
          for (std::size_t i = 0; i < dim; ++i) v[i] -= proj * b[i];
        }
      }
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-6) continue;
    for (double& x : v) x /= norm;
    bases.push_back(std::move(v));
  }
  return bases;
}

}  // namespace

void PlateauTraceSpec::validate() const {
  if (frames == 0) throw Error(ErrorKind::kConfig, "frames must be >= 1");
  if (dimension == 0) throw Error(ErrorKind::kConfig, "dimension must be >= 1");
  if (plateaus == 0 || plateaus > frames) {
    throw Error(ErrorKind::kConfig,
                fmt::format("plateaus must be in [1, frames={}], got {}", frames, plateaus));
  }
  if (!(noise >= 0.0) || !std::isfinite(noise)) {
    throw Error(ErrorKind::kConfig, "noise must be a finite value >= 0");
  }
  if (!(magnitude_jitter >= 0.0 && magnitude_jitter < 1.0)) {
    throw Error(ErrorKind::kConfig, "magnitude jitter must be in [0, 1)");
  }
  if (!(frame_interval > 0.0) || !std::isfinite(frame_interval)) {
    throw Error(ErrorKind::kConfig, "frame interval must be > 0");
  }
}

Trace generate_plateau_trace(const PlateauTraceSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const auto bases = plateau_bases(rng, spec.plateaus, spec.dimension);
  const double noise_scale = spec.noise / std::sqrt(static_cast<double>(spec.dimension));

  Trace trace;
  trace.header.dimension = spec.dimension;
  trace.header.source_id = spec.source_id;
  trace.header.duration_sec = static_cast<double>(spec.frames) * spec.frame_interval;
  trace.sequence.duration = trace.header.duration_sec;

  const std::size_t base_size = spec.frames / spec.plateaus;
  const std::size_t remainder = spec.frames % spec.plateaus;
  std::size_t index = 0;
  for (std::size_t p = 0; p < spec.plateaus; ++p) {
    const std::size_t size = base_size + (p < remainder ? 1 : 0);
    trace.header.plateaus.push_back({index, index + size - 1});
    for (std::size_t j = 0; j < size; ++j, ++index) {
      std::vector<double> v = bases[p];
      if (spec.noise > 0.0) {
        for (double& x : v) x += noise_scale * rng.normal();
      }
      if (spec.magnitude_jitter > 0.0) {
        const double factor = 1.0 + spec.magnitude_jitter * (2.0 * rng.uniform() - 1.0);
        for (double& x : v) x *= factor;
      }
      FrameRecord frame;
      frame.frame_index = index;
      frame.timestamp = static_cast<double>(index) * spec.frame_interval;
      frame.embedding = EmbeddingVector(std::move(v));
      trace.sequence.frames.push_back(std::move(frame));
    }
  }
  return trace;
}

}  // namespace vmr

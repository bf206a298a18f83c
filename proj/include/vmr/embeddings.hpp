// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace vmr {

/// Dense real vector representing a frame, caption or query. Entries are
/// always finite; a default-constructed vector has dimension 0 and stands for
/// "no embedding".
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<double> values);
  EmbeddingVector(std::initializer_list<double> values);

  std::size_t dimension() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double squared_norm() const noexcept;
  double norm() const noexcept;
  bool is_zero() const noexcept;

  EmbeddingVector scaled(double factor) const;

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

 private:
  std::vector<double> values_;
};

/// Throws a dimension error unless both vectors share a dimension >= 1.
void require_same_dimension(const EmbeddingVector& a, const EmbeddingVector& b);

double dot(const EmbeddingVector& a, const EmbeddingVector& b);

/// <a,b> / (|a| |b|), clamped to [-1, 1]. Inputs need not be normalized.
/// Zero vectors are rejected with a degenerate-input error.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

EmbeddingVector l2_normalize(const EmbeddingVector& a);

struct TimeSpan {
  double start = 0.0;
  double end = 0.0;

  double midpoint() const noexcept { return 0.5 * (start + end); }
  friend bool operator==(const TimeSpan&, const TimeSpan&) = default;
};

struct FrameRecord {
  std::size_t frame_index = 0;
  double timestamp = 0.0;
  EmbeddingVector embedding;
  // Source frames folded into this record by compression.
  std::optional<TimeSpan> merged_span;

  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

struct FrameSequence {
  std::vector<FrameRecord> frames;
  double duration = 0.0;

  std::size_t size() const noexcept { return frames.size(); }
  bool empty() const noexcept { return frames.empty(); }

  /// Checks the ordering, span and dimension invariants; throws on violation.
  void validate() const;

  friend bool operator==(const FrameSequence&, const FrameSequence&) = default;
};

/// Index of the frame whose timestamp is nearest to `time`; ties go to the
/// earlier frame. Frames must be sorted. Returns nullopt for an empty list.
std::optional<std::size_t> nearest_frame(std::span<const FrameRecord> frames, double time);

}  // namespace vmr

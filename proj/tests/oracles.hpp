// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference implementations used to check the library. None of
// these call into the code paths they verify: SVD goes through Eigen, the
// compression walk is re-coded from scratch, and metrics are recounted by
// direct enumeration.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "vmr/embeddings.hpp"
#include "vmr/eval.hpp"

namespace vmr::oracle {

inline Eigen::VectorXd to_eigen(const EmbeddingVector& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.dimension()));
  for (std::size_t i = 0; i < v.dimension(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

inline EmbeddingVector from_eigen(const Eigen::VectorXd& v) {
  return EmbeddingVector(std::vector<double>(v.data(), v.data() + v.size()));
}

inline Eigen::MatrixXd stack(const EmbeddingVector& a, const EmbeddingVector& b) {
  Eigen::MatrixXd m(2, static_cast<Eigen::Index>(a.dimension()));
  m.row(0) = to_eigen(a).transpose();
  m.row(1) = to_eigen(b).transpose();
  return m;
}

/// Rank-k reconstruction from a dense Jacobi SVD.
inline Eigen::MatrixXd dense_rank_k(const Eigen::MatrixXd& m, int k) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (int j = 0; j < k && j < svd.singularValues().size(); ++j) {
    out += svd.singularValues()(j) * svd.matrixU().col(j) * svd.matrixV().col(j).transpose();
  }
  return out;
}

inline Eigen::VectorXd dense_singular_values(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
}

/// Singular values of a 2xD matrix from the eigenvalues of M M^T, written
/// out by hand with the quadratic formula.
inline std::pair<double, double> gram_singular_values(const EmbeddingVector& a,
                                                      const EmbeddingVector& b) {
  double p = 0, q = 0, s = 0;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    p += a[i] * a[i];
    q += a[i] * b[i];
    s += b[i] * b[i];
  }
  const double tr = p + s;
  const double det = p * s - q * q;
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
  return {std::sqrt(tr / 2 + disc), std::sqrt(std::max(0.0, tr / 2 - disc))};
}

inline double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0);
}

struct WalkMerge {
  std::size_t anchor_index;
  std::size_t absorbed_index;
  double similarity;
};

struct WalkResult {
  std::vector<std::size_t> kept_indices;    // frame_index of each output slot
  std::vector<Eigen::VectorXd> embeddings;  // one per output slot
  std::vector<WalkMerge> merges;
};

/// Chain-merging anchor walk with the pair compressed by a dense SVD.
inline WalkResult reference_walk(const FrameSequence& seq, double theta, int rank_k) {
  WalkResult out;
  for (const FrameRecord& f : seq.frames) {
    const Eigen::VectorXd v = to_eigen(f.embedding);
    if (!out.embeddings.empty()) {
      const double sim = cosine(out.embeddings.back(), v);
      if (sim > theta) {
        Eigen::MatrixXd m(2, v.size());
        m.row(0) = out.embeddings.back().transpose();
        m.row(1) = v.transpose();
        const Eigen::MatrixXd approx = dense_rank_k(m, rank_k);
        out.embeddings.back() = approx.colwise().mean().transpose();
        out.merges.push_back({out.kept_indices.back(), f.frame_index, sim});
        continue;
      }
    }
    out.kept_indices.push_back(f.frame_index);
    out.embeddings.push_back(v);
  }
  return out;
}

// ---- metrics -------------------------------------------------------------

inline double overlap_ratio(const TemporalSegment& a, const TemporalSegment& b) {
  // Case analysis rather than min/max so the formula is written differently.
  const double lo = a.start > b.start ? a.start : b.start;
  const double hi = a.end < b.end ? a.end : b.end;
  if (hi <= lo) return 0.0;
  const double inter = hi - lo;
  return inter / ((a.end - a.start) + (b.end - b.start) - inter);
}

/// Indices of `preds` in rank order (confidence descending, earlier start on ties).
inline std::vector<std::size_t> rank_order(const std::vector<MomentPrediction>& preds) {
  std::vector<std::size_t> idx(preds.size());
  std::iota(idx.begin(), idx.end(), 0);
  // Selection sort: quadratic, obviously correct.
  for (std::size_t i = 0; i < idx.size(); ++i) {
    std::size_t best = i;
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      const auto& a = preds[idx[j]];
      const auto& b = preds[idx[best]];
      if (a.confidence > b.confidence ||
          (a.confidence == b.confidence && a.segment.start < b.segment.start) ||
          (a.confidence == b.confidence && a.segment.start == b.segment.start && idx[j] < idx[best])) {
        best = j;
      }
    }
    std::swap(idx[i], idx[best]);
  }
  return idx;
}

/// Recall@k with one ground truth per query, counted directly.
inline double brute_recall(const std::vector<std::vector<MomentPrediction>>& preds,
                           const std::vector<TemporalSegment>& gts, std::size_t k, double thr) {
  int hits = 0;
  for (std::size_t q = 0; q < gts.size(); ++q) {
    const auto order = rank_order(preds[q]);
    bool hit = false;
    for (std::size_t r = 0; r < order.size() && r < k; ++r) {
      if (overlap_ratio(preds[q][order[r]].segment, gts[q]) >= thr) hit = true;
    }
    hits += hit ? 1 : 0;
  }
  return 100.0 * hits / static_cast<double>(gts.size());
}

/// With a single ground truth per query, AP is 1 / (rank of the first hit),
/// or 0 when nothing hits.
inline double brute_map(const std::vector<std::vector<MomentPrediction>>& preds,
                        const std::vector<TemporalSegment>& gts, double thr) {
  double total = 0.0;
  for (std::size_t q = 0; q < gts.size(); ++q) {
    const auto order = rank_order(preds[q]);
    for (std::size_t r = 0; r < order.size(); ++r) {
      if (overlap_ratio(preds[q][order[r]].segment, gts[q]) >= thr) {
        total += 1.0 / static_cast<double>(r + 1);
        break;
      }
    }
  }
  return 100.0 * total / static_cast<double>(gts.size());
}

inline double brute_map_avg(const std::vector<std::vector<MomentPrediction>>& preds,
                            const std::vector<TemporalSegment>& gts) {
  double total = 0.0;
  for (double thr : {0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95}) {
    total += brute_map(preds, gts, thr);
  }
  return total / 10.0;
}

inline double brute_miou(const std::vector<std::vector<MomentPrediction>>& preds,
                         const std::vector<TemporalSegment>& gts) {
  double total = 0.0;
  for (std::size_t q = 0; q < gts.size(); ++q) {
    total += overlap_ratio(preds[q][rank_order(preds[q]).front()].segment, gts[q]);
  }
  return 100.0 * total / static_cast<double>(gts.size());
}

}  // namespace vmr::oracle

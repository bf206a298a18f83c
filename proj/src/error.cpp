// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmr/error.hpp"

#include <fmt/format.h>

namespace vmr {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kDegenerateInput: return "degenerate-input";
    case ErrorKind::kDimension: return "dimension";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kEmptyInput: return "empty-input";
    case ErrorKind::kEmptyQuery: return "empty-query";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kPairing: return "pairing";
    case ErrorKind::kOrdering: return "ordering";
    case ErrorKind::kBudget: return "budget";
    case ErrorKind::kProvider: return "provider";
    case ErrorKind::kStoreMissing: return "store-missing";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(fmt::format("{} error: {}", to_string(kind), detail)),
      kind_(kind),
      detail_(detail) {}

BudgetError::BudgetError(std::size_t overflow, std::size_t required, std::size_t allowed)
    : Error(ErrorKind::kBudget,
            fmt::format("vector slot budget exceeded by {} ({} required, {} allowed)",
                        overflow, required, allowed)),
      overflow_(overflow) {}

ProviderError::ProviderError(const std::string& detail, std::optional<std::size_t> segment_id)
    : Error(ErrorKind::kProvider,
            segment_id ? fmt::format("segment {}: {}", *segment_id, detail) : detail),
      segment_id_(segment_id) {}

}  // namespace vmr

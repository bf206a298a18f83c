// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vmr {

/// Category carried by every error the library raises. The CLI prints it
/// verbatim, so the names below are part of the command-line contract.
enum class ErrorKind {
  kDegenerateInput,
  kDimension,
  kNumeric,
  kEmptyInput,
  kEmptyQuery,
  kConfig,
  kPairing,
  kOrdering,
  kBudget,
  kProvider,
  kStoreMissing,
  kFormat,
  kIo,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

class BudgetError : public Error {
 public:
  BudgetError(std::size_t overflow, std::size_t required, std::size_t allowed);

  std::size_t overflow() const noexcept { return overflow_; }

 private:
  std::size_t overflow_;
};

class ProviderError : public Error {
 public:
  explicit ProviderError(const std::string& detail,
                         std::optional<std::size_t> segment_id = std::nullopt);

  std::optional<std::size_t> segment_id() const noexcept { return segment_id_; }

 private:
  std::optional<std::size_t> segment_id_;
};

}  // namespace vmr

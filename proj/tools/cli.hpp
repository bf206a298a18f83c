// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace vmr::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kModuleError = 1;
inline constexpr int kUsageError = 2;

/// Runs one command. `args` excludes the program name. Results go to `out`
/// (or the --out file); diagnostics go to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace vmr::cli

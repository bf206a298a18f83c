// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <string>
#include <string_view>

#include "vmr/captions.hpp"

namespace vmr {

/// Stop-word list plus action-verb base forms used for query parsing.
class QueryLexicon {
 public:
  /// Parses the sectioned text format of data/query_lexicon.txt.
  static QueryLexicon parse(std::string_view text);
  /// The lexicon shipped with the library.
  static const QueryLexicon& builtin();

  bool is_stop_word(std::string_view token) const;
  /// True when the token or one of its inflection-stripped base forms is a
  /// listed verb.
  bool is_action(std::string_view token) const;

  const std::string& version() const noexcept { return version_; }
  std::size_t action_count() const noexcept { return actions_.size(); }

 private:
  std::string version_;
  std::set<std::string, std::less<>> stop_words_;
  std::set<std::string, std::less<>> actions_;
};

/// Lowercases, splits on non-alphanumeric characters, drops stop words and
/// classifies the rest as actions or objects (first occurrence order,
/// deduplicated). Throws an empty-query error on blank input.
QueryIntent parse_query(std::string_view raw, const QueryLexicon& lexicon = QueryLexicon::builtin());

}  // namespace vmr

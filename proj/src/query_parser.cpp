// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include "vmr/query_parser.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <fmt/format.h>

#include "lexicon_data.hpp"
#include "vmr/error.hpp"

namespace vmr {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// Candidate base forms of an inflected verb, most specific first.
std::vector<std::string> base_forms(std::string_view token) {
  std::vector<std::string> out;
  auto strip = [&](std::string_view suffix) {
    if (token.size() <= suffix.size() + 1 || !token.ends_with(suffix)) return;
    std::string stem(token.substr(0, token.size() - suffix.size()));
    out.push_back(stem);
    out.push_back(stem + "e");  // making -> make, danced -> dance
    const std::size_t n = stem.size();
    if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1])) {
      out.push_back(stem.substr(0, n - 1));  // running -> run
    }
    if (n >= 1 && stem[n - 1] == 'i') out.push_back(stem.substr(0, n - 1) + "y");  // cried -> cry
  };
  strip("ing");
  strip("ed");
  strip("es");
  strip("s");
  return out;
}

}  // namespace

QueryLexicon QueryLexicon::parse(std::string_view text) {
  QueryLexicon lex;
  std::istringstream in{std::string(text)};
  std::string line;
  enum class Section { kNone, kStop, kActions } section = Section::kNone;
  while (std::getline(in, line)) {
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (view == "[stop_words]") {
      section = Section::kStop;
      continue;
    }
    if (view == "[actions]") {
      section = Section::kActions;
      continue;
    }
    if (view.front() == '[') {
      throw Error(ErrorKind::kFormat, fmt::format("unknown lexicon section {}", view));
    }
    if (section == Section::kNone) {
      const auto eq = view.find('=');
      if (eq != std::string_view::npos && trim(view.substr(0, eq)) == "version") {
        lex.version_ = std::string(trim(view.substr(eq + 1)));
        continue;
      }
      throw Error(ErrorKind::kFormat, fmt::format("unexpected lexicon line '{}'", view));
    }
    std::istringstream words{std::string(view)};
    std::string word;
    while (words >> word) {
      std::transform(word.begin(), word.end(), word.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      (section == Section::kStop ? lex.stop_words_ : lex.actions_).insert(word);
    }
  }
  return lex;
}

const QueryLexicon& QueryLexicon::builtin() {
  static const QueryLexicon lexicon = parse(detail::kQueryLexicon);
  return lexicon;
}

bool QueryLexicon::is_stop_word(std::string_view token) const {
  return stop_words_.find(token) != stop_words_.end();
}

bool QueryLexicon::is_action(std::string_view token) const {
  if (actions_.find(token) != actions_.end()) return true;
  for (const std::string& base : base_forms(token)) {
    if (actions_.find(base) != actions_.end()) return true;
  }
  return false;
}

QueryIntent parse_query(std::string_view raw, const QueryLexicon& lexicon) {
  if (trim(raw).empty()) throw Error(ErrorKind::kEmptyQuery, "query is empty");

  QueryIntent intent;
  intent.raw_query = std::string(trim(raw));

  std::vector<std::string> tokens;
  std::string current;
  for (char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));

  auto add_unique = [](std::vector<std::string>& list, const std::string& token) {
    if (std::find(list.begin(), list.end(), token) == list.end()) list.push_back(token);
  };
  for (const std::string& token : tokens) {
    if (lexicon.is_stop_word(token)) continue;
    add_unique(lexicon.is_action(token) ? intent.actions : intent.objects, token);
  }
  return intent;
}

}  // namespace vmr

// Copyright 2026 The vmrpipe Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "vmr/caption_pipeline.hpp"
#include "vmr/error.hpp"
#include "vmr/query_parser.hpp"

namespace vmr {
namespace {

using Terms = std::vector<std::string>;

TEST(QueryParser, ManHoldingChild) {
  const auto intent = parse_query("a man holding a child");
  EXPECT_EQ(intent.objects, (Terms{"man", "child"}));
  EXPECT_EQ(intent.actions, (Terms{"holding"}));
  EXPECT_EQ(intent.raw_query, "a man holding a child");
  EXPECT_EQ(intent.term_count(), 3u);
}

TEST(QueryParser, SingleNoun) {
  const auto intent = parse_query("dog");
  EXPECT_EQ(intent.objects, (Terms{"dog"}));
  EXPECT_TRUE(intent.actions.empty());
}

TEST(QueryParser, EmptyQuery) {
  for (const char* raw : {"", "   ", "\t\n"}) {
    try {
      parse_query(raw);
      ADD_FAILURE() << "no error for '" << raw << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kEmptyQuery);
    }
  }
}

TEST(QueryParser, NormalizationAndInflections) {
  const auto intent = parse_query("The Woman RUNS, the dog ran? A kid carried boxes; cutting, cuts");
  EXPECT_EQ(intent.objects, (Terms{"woman", "dog", "ran", "kid", "boxes"}));
  EXPECT_EQ(intent.actions, (Terms{"runs", "carried", "cutting", "cuts"}));

  const auto dupes = parse_query("cat cat CAT");
  EXPECT_EQ(dupes.objects, (Terms{"cat"}));
  // Only stop words: no terms, but not an empty query either.
  EXPECT_EQ(parse_query("the of a").term_count(), 0u);
}

TEST(QueryLexicon, ShippedFileAndCustomText) {
  const auto& lex = QueryLexicon::builtin();
  EXPECT_EQ(lex.version(), "1");
  EXPECT_GT(lex.action_count(), 20u);
  EXPECT_TRUE(lex.is_stop_word("the"));
  EXPECT_TRUE(lex.is_action("holding"));
  EXPECT_TRUE(lex.is_action("sitting"));
  EXPECT_FALSE(lex.is_action("child"));

  const auto custom = QueryLexicon::parse("version = 7\n[stop_words]\nplease\n[actions]\nzoom\n");
  EXPECT_EQ(custom.version(), "7");
  const auto intent = parse_query("please zooming camera", custom);
  EXPECT_EQ(intent.objects, (Terms{"camera"}));
  EXPECT_EQ(intent.actions, (Terms{"zooming"}));
  EXPECT_THROW(QueryLexicon::parse("[verbs]\nrun\n"), Error);
}

TEST(QueryParser, DelegatedToProvider) {
  ScriptedProvider provider;
  provider.on_parse([](const ProviderRequest& r) {
    EXPECT_EQ(r.query, std::optional<std::string>("a man holding a child"));
    return std::string("objects: Man, child, man; actions: holding");
  });
  const auto intent = parse_query_via_provider("a man holding a child", provider);
  EXPECT_EQ(intent.objects, (Terms{"man", "child"}));
  EXPECT_EQ(intent.actions, (Terms{"holding"}));
  EXPECT_EQ(provider.count(RequestKind::kParseQuery), 1u);

  ScriptedProvider garbled;
  garbled.on_parse([](const ProviderRequest&) { return std::string("a man"); });
  EXPECT_THROW(parse_query_via_provider("a man", garbled), ProviderError);
  EXPECT_THROW(parse_query_via_provider(" ", garbled), Error);
}

}  // namespace
}  // namespace vmr

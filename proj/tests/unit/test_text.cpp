#include <doctest.h>

#include <string>
#include <vector>

#include "textcoherence/text.hpp"

using namespace textcoherence;
using Tokens = std::vector<std::string>;

TEST_CASE("tokenize lowercases and splits on non-alphanumerics") {
  CHECK(tokenize("UK is due") == Tokens{"uk", "is", "due"});
  CHECK(tokenize("state-of-the-art") == Tokens{"state", "of", "the", "art"});
  CHECK(tokenize("...").empty());
  CHECK(tokenize("").empty());
  CHECK(tokenize("U.S. GDP rose 3.5%") == Tokens{"u", "s", "gdp", "rose", "3", "5"});
}

TEST_CASE("tokenize keeps non-ASCII letters inside words") {
  CHECK(tokenize("Café au lait") == Tokens{"café", "au", "lait"});
  // Curly quotes and dashes are separators.
  CHECK(tokenize("\xE2\x80\x9CHello\xE2\x80\x9D \xE2\x80\x94 world") == Tokens{"hello", "world"});
}

TEST_CASE("tokenize is idempotent on its own joined output") {
  const std::vector<std::string> inputs = {"Hello, World! It's 2016.", "state-of-the-art (really)",
                                           "  spaced\tout\nlines ", "Zürich & Genève", "a.b.c"};
  for (const std::string& in : inputs) {
    const Tokens once = tokenize(in);
    std::string joined;
    for (const std::string& t : once) joined += t + " ";
    CHECK(tokenize(joined) == once);
  }
}

TEST_CASE("token_spans index the original text") {
  const std::string text = "Mr. Brown, hi";
  const auto spans = token_spans(text);
  REQUIRE(spans.size() == 3);
  CHECK(text.substr(spans[1].begin, spans[1].end - spans[1].begin) == "Brown");
}

TEST_CASE("trim and utf8 validation") {
  CHECK(trim("  a b \n") == "a b");
  CHECK(trim("   ").empty());
  CHECK(is_valid_utf8("plain ascii"));
  CHECK(is_valid_utf8("caf\xC3\xA9"));
  CHECK_FALSE(is_valid_utf8("caf\xE9"));
  CHECK(first_invalid_utf8("ab\xFF") == 2);
  CHECK_FALSE(is_valid_utf8("\xC0\xAF"));  // overlong
}

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace textcoherence {

// Byte range [begin, end) of a token inside the text it was cut from.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Splits on every non-alphanumeric character and lowercases ASCII letters.
// Multi-byte UTF-8 letters are word characters; Latin-1 and General
// Punctuation symbols (curly quotes, dashes, ellipsis, nbsp) separate tokens.
std::vector<std::string> tokenize(std::string_view text);

// Same segmentation as tokenize(), returning byte offsets instead of copies.
std::vector<TokenSpan> token_spans(std::string_view text);

// Lowercase form of a token exactly as tokenize() would emit it.
std::string normalize_token(std::string_view raw);

std::string ascii_lower(std::string_view s);
std::string_view trim(std::string_view s);

bool is_valid_utf8(std::string_view s);

// Byte offset of the first invalid UTF-8 sequence, or npos.
std::size_t first_invalid_utf8(std::string_view s);

}  // namespace textcoherence

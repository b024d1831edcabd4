#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace biaslens::text {

// Decodes the UTF-8 code point starting at byte i and advances i past it.
// Invalid bytes are returned as their own value and consumed one at a time,
// so tokenization never fails on arbitrary input (ingestion validates UTF-8
// separately).
char32_t decode_utf8(std::string_view s, std::size_t& i);

// Byte offset of the first invalid UTF-8 sequence, if any.
std::optional<std::size_t> first_invalid_utf8(std::string_view s);

// Character classes used by the tokenizer and sentence splitter. These are
// fixed, documented sets (ASCII plus common typographic and CJK-fullwidth
// characters), not full Unicode property tables.
bool is_space(char32_t c);
bool is_strip_punct(char32_t c);
bool is_sentence_terminator(char32_t c);

// ASCII-only lowercasing; other code points pass through unchanged.
std::string to_lower(std::string_view s);

std::string trim(std::string_view s);

}  // namespace biaslens::text

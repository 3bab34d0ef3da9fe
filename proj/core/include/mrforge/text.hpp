#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mrforge::text {

/// Decode UTF-8 to code points. Invalid bytes are passed through as their
/// byte value, so ASCII corpora round-trip exactly.
std::vector<char32_t> decode_utf8(std::string_view s);

std::string encode_utf8(const std::vector<char32_t>& cps);

bool is_space(char32_t cp);
bool is_ascii_punct(char32_t cp);

/// Whitespace-delimited tokens, separators dropped.
std::vector<std::string> split_words(std::string_view s);

/// Splits on [.?!]+ boundaries; each piece keeps its terminator and is
/// trimmed of surrounding whitespace. Trailing text without a terminator
/// forms a final sentence.
std::vector<std::string> split_sentences(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string lowercase_ascii(std::string_view s);

/// Strips leading/trailing ASCII punctuation from a token; returns the core
/// word and its surrounding punctuation via out-parameters.
std::string strip_punct(std::string_view token, std::string* lead = nullptr,
                        std::string* trail = nullptr);

}  // namespace mrforge::text

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace divscope::text {

/// Decodes one UTF-8 code point starting at s[pos] and advances pos.
/// Invalid sequences decode as U+FFFD consuming a single byte.
char32_t next_code_point(std::string_view s, std::size_t& pos) noexcept;

void append_utf8(std::string& out, char32_t cp);

bool is_space(char32_t cp) noexcept;
bool is_upper(char32_t cp) noexcept;
bool is_alnum(char32_t cp) noexcept;

/// Simple case folding for ASCII, Latin-1, Greek and Cyrillic.
char32_t to_lower(char32_t cp) noexcept;

/// Strips leading and trailing Unicode whitespace.
std::string_view trim(std::string_view s) noexcept;

/// Rule-based splitter: a boundary follows a run of '.', '!' or '?' when the
/// run is followed by whitespace and then an uppercase letter, or by the end
/// of the text. Boundaries only ever fall on whitespace.
std::vector<std::string> split_sentences(std::string_view text);

}  // namespace divscope::text

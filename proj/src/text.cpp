#include "divscope/text.hpp"

namespace divscope::text {

char32_t next_code_point(std::string_view s, std::size_t& pos) noexcept {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + len > s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (int i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += len;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space(char32_t cp) noexcept {
  return (cp >= 0x09 && cp <= 0x0D) || cp == 0x20 || cp == 0x85 || cp == 0xA0 ||
         cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 ||
         cp == 0x2029 || cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

char32_t to_lower(char32_t cp) noexcept {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp < 0xC0) return cp;
  if (cp <= 0xDE && cp != 0xD7) return cp + 0x20;                   // Latin-1
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;  // Greek
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;                 // Cyrillic
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  return cp;
}

bool is_upper(char32_t cp) noexcept { return to_lower(cp) != cp; }

namespace {

// General punctuation, symbols and the ASCII/Latin-1 punctuation ranges.
bool is_punct_or_symbol(char32_t cp) noexcept {
  if (cp < 0x80) return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
                        (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  if (cp >= 0xA1 && cp <= 0xBF) return cp != 0xAA && cp != 0xB5 && cp != 0xBA;
  if (cp == 0xD7 || cp == 0xF7) return true;
  if (cp >= 0x2010 && cp <= 0x2BFF) return true;
  if (cp >= 0x3001 && cp <= 0x3003) return true;
  if (cp >= 0x3008 && cp <= 0x3011) return true;
  if (cp >= 0xFF01 && cp <= 0xFF0F) return true;
  if (cp == 0xFFFD) return true;
  return false;
}

}  // namespace

bool is_alnum(char32_t cp) noexcept {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z');
  }
  return !is_space(cp) && !is_punct_or_symbol(cp) && cp >= 0xA0;
}

std::string_view trim(std::string_view s) noexcept {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end) {
    std::size_t p = begin;
    if (!is_space(next_code_point(s, p))) break;
    begin = p;
  }
  // Scan forward to find the last non-space code point.
  std::size_t last_end = begin;
  std::size_t p = begin;
  while (p < end) {
    if (!is_space(next_code_point(s, p))) last_end = p;
  }
  return s.substr(begin, last_end - begin);
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  const std::string_view body = trim(text);
  if (body.empty()) return out;

  std::size_t start = 0;
  std::size_t pos = 0;
  while (pos < body.size()) {
    const char c = body[pos];
    if (c != '.' && c != '!' && c != '?') {
      next_code_point(body, pos);
      continue;
    }
    std::size_t run_end = pos;
    while (run_end < body.size() &&
           (body[run_end] == '.' || body[run_end] == '!' || body[run_end] == '?')) {
      ++run_end;
    }
    // Closing quotes and brackets stay with the sentence they end.
    while (run_end < body.size() &&
           (body[run_end] == '"' || body[run_end] == '\'' || body[run_end] == ')')) {
      ++run_end;
    }
    if (run_end == body.size()) break;

    std::size_t after = run_end;
    std::size_t ws_end = run_end;
    bool saw_space = false;
    while (ws_end < body.size()) {
      std::size_t q = ws_end;
      if (!is_space(next_code_point(body, q))) break;
      saw_space = true;
      ws_end = q;
    }
    if (saw_space && ws_end < body.size()) {
      std::size_t q = ws_end;
      char32_t next = next_code_point(body, q);
      if (next == '"' || next == '\'' || next == '(') {
        if (q < body.size()) next = next_code_point(body, q);
      }
      if (is_upper(next)) {
        out.emplace_back(body.substr(start, after - start));
        start = ws_end;
      }
    }
    pos = ws_end > run_end ? ws_end : run_end;
  }
  out.emplace_back(trim(body.substr(start)));
  return out;
}

}  // namespace divscope::text

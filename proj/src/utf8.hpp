#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace codeattn::utf8 {

/// Byte length of the sequence starting with `lead`, or 0 if `lead` cannot start one.
inline std::size_t sequence_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 0;
}

/// Byte offset of the first invalid sequence, or npos when `text` is valid UTF-8.
inline std::size_t find_invalid(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    const std::size_t len = sequence_length(lead);
    if (len == 0 || i + len > text.size()) return i;
    char32_t cp = len == 1 ? lead : (lead & (0x7F >> len));
    for (std::size_t k = 1; k < len; ++k) {
      const auto cont = static_cast<unsigned char>(text[i + k]);
      if ((cont >> 6) != 0x2) return i;
      cp = (cp << 6) | (cont & 0x3F);
    }
    // overlong forms, surrogates and out-of-range code points
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      return i;
    }
    i += len;
  }
  return std::string_view::npos;
}

inline std::size_t count_code_points(std::string_view text) {
  std::size_t n = 0;
  for (char c : text) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

/// Byte offset of code point `col` within a valid UTF-8 line (clamped to the end).
inline std::size_t byte_offset(std::string_view line, int col) {
  std::size_t i = 0;
  for (int c = 0; c < col && i < line.size(); ++c) {
    const std::size_t len = sequence_length(static_cast<unsigned char>(line[i]));
    i += len == 0 ? 1 : len;
  }
  return i;
}

}  // namespace codeattn::utf8

#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include <unicode/unistr.h>
#include <unicode/uchar.h>

namespace xling::text {

// Number of Unicode code points in a UTF-8 string (continuation bytes are skipped).
inline std::size_t code_point_count(std::string_view utf8) {
    std::size_t n = 0;
    for (unsigned char c : utf8)
        if ((c & 0xC0) != 0x80) ++n;
    return n;
}

// Full Unicode case folding. Scripts without case (Arabic, Devanagari, Hangul)
// pass through unchanged.
inline std::string fold_case(std::string_view utf8) {
    icu::UnicodeString s = icu::UnicodeString::fromUTF8(
        icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    s.foldCase(U_FOLD_CASE_DEFAULT);
    std::string out;
    s.toUTF8String(out);
    return out;
}

inline std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\n\f\v";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

} // namespace xling::text

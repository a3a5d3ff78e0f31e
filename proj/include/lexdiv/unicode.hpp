#pragma once

#include <cstdint>
#include <string>
#include <string_view>

// Minimal locale-free UTF-8 and codepoint helpers shared by the tokenizer
// and the entity extractor. Folding covers ASCII, Latin-1, Latin Extended-A,
// Greek and Cyrillic simple case pairs; identity elsewhere.
namespace lexdiv::uni {

constexpr char32_t kReplacementChar = 0xFFFD;

// Decodes one codepoint starting at pos, advancing pos past it. Malformed
// bytes decode as U+FFFD one byte at a time.
inline char32_t decode_utf8(std::string_view text, std::size_t& pos) {
    unsigned char b0 = static_cast<unsigned char>(text[pos]);
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
        return kReplacementChar;
    }
    if (pos + len > text.size()) {
        ++pos;
        return kReplacementChar;
    }
    for (int i = 1; i < len; ++i) {
        unsigned char b = static_cast<unsigned char>(text[pos + i]);
        if ((b & 0xC0) != 0x80) {
            ++pos;
            return kReplacementChar;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    pos += len;
    return cp;
}

inline void encode_utf8(char32_t cp, std::string& out) {
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

inline char32_t fold_codepoint(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 32;
    if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 32;
    if (cp >= 0x0100 && cp <= 0x0137 && (cp % 2) == 0) return cp + 1;
    if (cp >= 0x0139 && cp <= 0x0147 && (cp % 2) == 1) return cp + 1;
    if (cp >= 0x014A && cp <= 0x0177 && (cp % 2) == 0) return cp + 1;
    if (cp == 0x0178) return 0x00FF;
    if (cp >= 0x0179 && cp <= 0x017D && (cp % 2) == 1) return cp + 1;
    if (cp >= 0x0391 && cp <= 0x03A9 && cp != 0x03A2) return cp + 32;
    if (cp >= 0x0410 && cp <= 0x042F) return cp + 32;
    if (cp >= 0x0400 && cp <= 0x040F) return cp + 80;
    return cp;
}

inline bool is_ascii_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

inline bool in_punct_block(char32_t cp) {
    return (cp >= 0x2000 && cp <= 0x206F) || (cp >= 0x2E00 && cp <= 0x2E7F) ||
           (cp >= 0x3000 && cp <= 0x303F) || (cp >= 0xFE30 && cp <= 0xFE4F) ||
           (cp >= 0xFF00 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
           (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65);
}

inline bool is_word_char(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') || is_ascii_digit(cp);
    }
    if (cp < 0x00C0) return false;  // Latin-1 punctuation and symbols
    if (cp == 0x00D7 || cp == 0x00F7) return false;
    if (cp == kReplacementChar) return false;
    return !in_punct_block(cp);
}

inline bool is_letter_char(char32_t cp) { return is_word_char(cp) && !is_ascii_digit(cp); }

// True for any codepoint the fold maps downward.
inline bool is_upper(char32_t cp) { return fold_codepoint(cp) != cp; }

inline bool is_ws(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace lexdiv::uni

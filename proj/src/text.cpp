#include "biaslens/text.hpp"

namespace biaslens::text {

namespace {

inline bool is_continuation(unsigned char b) { return (b & 0xc0) == 0x80; }

}  // namespace

char32_t decode_utf8(std::string_view s, std::size_t& i) {
    const unsigned char b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    std::size_t len = 0;
    char32_t cp = 0;
    if ((b0 & 0xe0) == 0xc0) {
        len = 2;
        cp = b0 & 0x1f;
    } else if ((b0 & 0xf0) == 0xe0) {
        len = 3;
        cp = b0 & 0x0f;
    } else if ((b0 & 0xf8) == 0xf0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return b0;  // stray continuation or invalid lead byte
    }
    if (i + len > s.size()) {
        ++i;
        return b0;
    }
    for (std::size_t k = 1; k < len; ++k) {
        const unsigned char bk = static_cast<unsigned char>(s[i + k]);
        if (!is_continuation(bk)) {
            ++i;
            return b0;
        }
        cp = (cp << 6) | (bk & 0x3f);
    }
    i += len;
    return cp;
}

std::optional<std::size_t> first_invalid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char b0 = static_cast<unsigned char>(s[i]);
        if (b0 < 0x80) {
            ++i;
            continue;
        }
        std::size_t len;
        char32_t min_cp;
        if ((b0 & 0xe0) == 0xc0) {
            len = 2;
            min_cp = 0x80;
        } else if ((b0 & 0xf0) == 0xe0) {
            len = 3;
            min_cp = 0x800;
        } else if ((b0 & 0xf8) == 0xf0) {
            len = 4;
            min_cp = 0x10000;
        } else {
            return i;
        }
        if (i + len > s.size()) return i;
        char32_t cp = b0 & (0xff >> (len + 1));
        for (std::size_t k = 1; k < len; ++k) {
            const unsigned char bk = static_cast<unsigned char>(s[i + k]);
            if (!is_continuation(bk)) return i;
            cp = (cp << 6) | (bk & 0x3f);
        }
        if (cp < min_cp || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return i;
        i += len;
    }
    return std::nullopt;
}

bool is_space(char32_t c) {
    switch (c) {
        case U'\t':
        case U'\n':
        case U'\v':
        case U'\f':
        case U'\r':
        case U' ':
        case 0x0085:  // NEL
        case 0x00a0:  // no-break space
        case 0x1680:
        case 0x2028:
        case 0x2029:
        case 0x202f:
        case 0x205f:
        case 0x3000:  // ideographic space
        case 0xfeff:  // BOM / zero-width no-break space
            return true;
        default:
            return c >= 0x2000 && c <= 0x200a;
    }
}

bool is_strip_punct(char32_t c) {
    if (c < 0x80) {
        return (c >= U'!' && c <= U'/') || (c >= U':' && c <= U'@') ||
               (c >= U'[' && c <= U'`') || (c >= U'{' && c <= U'~');
    }
    switch (c) {
        case 0x00a1:  // inverted exclamation
        case 0x00bf:  // inverted question
        case 0x00ab:  // «
        case 0x00bb:  // »
        case 0x00b7:  // middle dot
        case 0x2013:  // en dash
        case 0x2014:  // em dash
        case 0x2018:
        case 0x2019:
        case 0x201c:
        case 0x201d:
        case 0x2026:  // ellipsis
        case 0x3001:  // 、
        case 0x3002:  // 。
        case 0x3008:
        case 0x3009:
        case 0x300a:
        case 0x300b:
        case 0x300c:
        case 0x300d:
        case 0x300e:
        case 0x300f:
        case 0x3010:
        case 0x3011:
        case 0xff01:  // ！
        case 0xff08:  // （
        case 0xff09:  // ）
        case 0xff0c:  // ，
        case 0xff0e:  // ．
        case 0xff1a:  // ：
        case 0xff1b:  // ；
        case 0xff1f:  // ？
        case 0xff61:  // halfwidth 。
            return true;
        default:
            return false;
    }
}

bool is_sentence_terminator(char32_t c) {
    return c == U'.' || c == U'?' || c == U'!' || c == 0x3002 || c == 0xff1f || c == 0xff01;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e) {
        std::size_t i = b;
        if (!is_space(decode_utf8(s, i))) break;
        b = i;
    }
    // scan forward remembering the end of the last non-space run
    std::size_t last_end = b;
    std::size_t i = b;
    while (i < e) {
        const char32_t c = decode_utf8(s, i);
        if (!is_space(c)) last_end = i;
    }
    return std::string(s.substr(b, last_end - b));
}

}  // namespace biaslens::text

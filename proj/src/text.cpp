#include "promptshield/text.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

namespace promptshield::text {

namespace {

// Decodes one UTF-8 codepoint starting at `index`, advancing it. Invalid
// lead or continuation bytes fall back to the single byte value so that
// normalization never throws on arbitrary input.
uint32_t decode_utf8(std::string_view s, size_t& index) {
    const auto lead = static_cast<unsigned char>(s[index]);
    if (lead < 0x80U) {
        ++index;
        return lead;
    }
    size_t extra = 0;
    uint32_t value = 0;
    if ((lead & 0xE0U) == 0xC0U) {
        extra = 1;
        value = lead & 0x1FU;
    } else if ((lead & 0xF0U) == 0xE0U) {
        extra = 2;
        value = lead & 0x0FU;
    } else if ((lead & 0xF8U) == 0xF0U) {
        extra = 3;
        value = lead & 0x07U;
    } else {
        ++index;
        return lead;
    }
    if (index + extra >= s.size()) {
        ++index;
        return lead;
    }
    for (size_t i = 1; i <= extra; ++i) {
        const auto cont = static_cast<unsigned char>(s[index + i]);
        if ((cont & 0xC0U) != 0x80U) {
            ++index;
            return lead;
        }
        value = (value << 6U) | (cont & 0x3FU);
    }
    index += extra + 1;
    return value;
}

void encode_utf8(uint32_t cp, std::string& out) {
    if (cp < 0x80U) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800U) {
        out.push_back(static_cast<char>(0xC0U | (cp >> 6U)));
        out.push_back(static_cast<char>(0x80U | (cp & 0x3FU)));
    } else if (cp < 0x10000U) {
        out.push_back(static_cast<char>(0xE0U | (cp >> 12U)));
        out.push_back(static_cast<char>(0x80U | ((cp >> 6U) & 0x3FU)));
        out.push_back(static_cast<char>(0x80U | (cp & 0x3FU)));
    } else {
        out.push_back(static_cast<char>(0xF0U | (cp >> 18U)));
        out.push_back(static_cast<char>(0x80U | ((cp >> 12U) & 0x3FU)));
        out.push_back(static_cast<char>(0x80U | ((cp >> 6U) & 0x3FU)));
        out.push_back(static_cast<char>(0x80U | (cp & 0x3FU)));
    }
}

uint32_t to_lower(uint32_t cp) {
    if (cp >= 'A' && cp <= 'Z') {
        return cp + 0x20U;
    }
    // Latin-1 Supplement uppercase block, skipping the multiplication sign.
    if (cp >= 0x00C0U && cp <= 0x00DEU && cp != 0x00D7U) {
        return cp + 0x20U;
    }
    return cp;
}

bool is_combining_mark(uint32_t cp) { return cp >= 0x0300U && cp <= 0x036FU; }

// Canonical composition table for the common Latin base + mark pairs.
// Bases are already lowercased when this is consulted.
uint32_t compose(uint32_t base, uint32_t mark) {
    struct Entry {
        uint32_t base;
        uint32_t mark;
        uint32_t composed;
    };
    static constexpr std::array<Entry, 25> kTable{{
        {'a', 0x0300U, 0x00E0U}, {'a', 0x0301U, 0x00E1U}, {'a', 0x0302U, 0x00E2U},
        {'a', 0x0303U, 0x00E3U}, {'a', 0x0308U, 0x00E4U}, {'a', 0x030AU, 0x00E5U},
        {'e', 0x0300U, 0x00E8U}, {'e', 0x0301U, 0x00E9U}, {'e', 0x0302U, 0x00EAU},
        {'e', 0x0308U, 0x00EBU}, {'i', 0x0300U, 0x00ECU}, {'i', 0x0301U, 0x00EDU},
        {'i', 0x0302U, 0x00EEU}, {'i', 0x0308U, 0x00EFU}, {'o', 0x0300U, 0x00F2U},
        {'o', 0x0301U, 0x00F3U}, {'o', 0x0302U, 0x00F4U}, {'o', 0x0303U, 0x00F5U},
        {'o', 0x0308U, 0x00F6U}, {'u', 0x0300U, 0x00F9U}, {'u', 0x0301U, 0x00FAU},
        {'u', 0x0302U, 0x00FBU}, {'u', 0x0308U, 0x00FCU}, {'n', 0x0303U, 0x00F1U},
        {'c', 0x0327U, 0x00E7U},
    }};
    for (const auto& e : kTable) {
        if (e.base == base && e.mark == mark) {
            return e.composed;
        }
    }
    return 0;
}

bool is_space(uint32_t cp) {
    switch (cp) {
        case ' ':
        case '\t':
        case '\n':
        case '\r':
        case '\f':
        case '\v':
        case 0x00A0U:  // no-break space
        case 0x2028U:
        case 0x2029U:
            return true;
        default:
            return false;
    }
}

bool is_punct(uint32_t cp) {
    if (cp < 0x80U) {
        const char c = static_cast<char>(cp);
        return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
               (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
    }
    switch (cp) {
        case 0x00A1U:  // inverted exclamation
        case 0x00ABU:  // left guillemet
        case 0x00BBU:  // right guillemet
        case 0x00BFU:  // inverted question
        case 0x2013U:  // en dash
        case 0x2014U:  // em dash
        case 0x2018U:
        case 0x2019U:
        case 0x201CU:
        case 0x201DU:
        case 0x2026U:  // ellipsis
            return true;
        default:
            return false;
    }
}

void strip_boundary_punct(std::vector<uint32_t>& token) {
    size_t begin = 0;
    size_t end = token.size();
    while (begin < end && is_punct(token[begin])) {
        ++begin;
    }
    while (end > begin && is_punct(token[end - 1])) {
        --end;
    }
    token = std::vector<uint32_t>(token.begin() + static_cast<long>(begin),
                                  token.begin() + static_cast<long>(end));
}

}  // namespace

std::string normalize(std::string_view input) {
    // Pass 1: decode, lowercase, compose combining marks.
    std::vector<uint32_t> cps;
    cps.reserve(input.size());
    size_t i = 0;
    while (i < input.size()) {
        const uint32_t cp = to_lower(decode_utf8(input, i));
        if (is_combining_mark(cp)) {
            if (!cps.empty()) {
                if (const uint32_t composed = compose(cps.back(), cp)) {
                    cps.back() = composed;
                }
                // No precomposed form: drop the stray mark.
            }
            continue;
        }
        cps.push_back(cp);
    }

    // Pass 2: tokenize on whitespace, strip punctuation at token edges,
    // re-join with single spaces.
    std::string out;
    out.reserve(input.size());
    std::vector<uint32_t> token;
    auto flush = [&] {
        strip_boundary_punct(token);
        if (!token.empty()) {
            if (!out.empty()) {
                out.push_back(' ');
            }
            for (const uint32_t cp : token) {
                encode_utf8(cp, out);
            }
        }
        token.clear();
    };
    for (const uint32_t cp : cps) {
        if (is_space(cp)) {
            flush();
        } else {
            token.push_back(cp);
        }
    }
    flush();
    return out;
}

std::vector<std::string> tokenize(std::string_view normalized) {
    std::vector<std::string> tokens;
    size_t pos = 0;
    while (pos < normalized.size()) {
        const size_t next = normalized.find(' ', pos);
        if (next == std::string_view::npos) {
            tokens.emplace_back(normalized.substr(pos));
            break;
        }
        if (next > pos) {
            tokens.emplace_back(normalized.substr(pos, next - pos));
        }
        pos = next + 1;
    }
    return tokens;
}

std::vector<std::string> normalized_tokens(std::string_view input) {
    return tokenize(normalize(input));
}

bool contains_token(std::string_view normalized, std::string_view token) {
    size_t pos = 0;
    while ((pos = normalized.find(token, pos)) != std::string_view::npos) {
        const bool left_ok = pos == 0 || normalized[pos - 1] == ' ';
        const size_t end = pos + token.size();
        const bool right_ok = end == normalized.size() || normalized[end] == ' ';
        if (left_ok && right_ok) {
            return true;
        }
        ++pos;
    }
    return false;
}

std::string replace_all(std::string haystack, std::string_view needle,
                        std::string_view replacement) {
    if (needle.empty()) {
        return haystack;
    }
    size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        haystack.replace(pos, needle.size(), replacement);
        pos += replacement.size();
    }
    return haystack;
}

}  // namespace promptshield::text

#include "mrforge/text.hpp"

#include <cctype>

namespace mrforge::text {

std::vector<char32_t> decode_utf8(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        std::size_t len = 1;
        char32_t cp = c;
        if (c >= 0xF0)
            len = 4;
        else if (c >= 0xE0)
            len = 3;
        else if (c >= 0xC0)
            len = 2;
        if (len > 1) {
            if (i + len > s.size()) {
                out.push_back(c);
                ++i;
                continue;
            }
            char32_t acc = c & (0x7F >> len);
            bool ok = true;
            for (std::size_t k = 1; k < len; ++k) {
                unsigned char cc = static_cast<unsigned char>(s[i + k]);
                if ((cc & 0xC0) != 0x80) {
                    ok = false;
                    break;
                }
                acc = (acc << 6) | (cc & 0x3F);
            }
            if (!ok) {
                out.push_back(c);
                ++i;
                continue;
            }
            cp = acc;
            i += len;
        } else {
            ++i;
        }
        out.push_back(cp);
    }
    return out;
}

std::string encode_utf8(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) {
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
    return out;
}

bool is_space(char32_t cp) {
    switch (cp) {
        case U' ':
        case U'\t':
        case U'\n':
        case U'\r':
        case U'\f':
        case U'\v':
        case 0x00A0:
        case 0x2028:
        case 0x2029:
        case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_ascii_punct(char32_t cp) {
    return cp < 0x80 && std::ispunct(static_cast<int>(cp)) != 0;
}

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> words;
    auto cps = decode_utf8(s);
    std::vector<char32_t> cur;
    for (char32_t cp : cps) {
        if (is_space(cp)) {
            if (!cur.empty()) {
                words.push_back(encode_utf8(cur));
                cur.clear();
            }
        } else {
            cur.push_back(cp);
        }
    }
    if (!cur.empty()) words.push_back(encode_utf8(cur));
    return words;
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    std::size_t i = 0;
    auto is_term = [](char c) { return c == '.' || c == '?' || c == '!'; };
    while (i < s.size()) {
        if (is_term(s[i])) {
            while (i + 1 < s.size() && is_term(s[i + 1])) ++i;
            std::string sent = trim(s.substr(start, i + 1 - start));
            if (!sent.empty()) out.push_back(sent);
            start = i + 1;
        }
        ++i;
    }
    std::string rest = trim(s.substr(start));
    if (!rest.empty()) out.push_back(rest);
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.append(sep);
        out.append(parts[i]);
    }
    return out;
}

std::string lowercase_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string strip_punct(std::string_view token, std::string* lead, std::string* trail) {
    std::size_t b = 0, e = token.size();
    while (b < e && is_ascii_punct(static_cast<unsigned char>(token[b]))) ++b;
    while (e > b && is_ascii_punct(static_cast<unsigned char>(token[e - 1]))) --e;
    if (lead) *lead = std::string(token.substr(0, b));
    if (trail) *trail = std::string(token.substr(e));
    return std::string(token.substr(b, e - b));
}

}  // namespace mrforge::text

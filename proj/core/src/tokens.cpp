#include "mrforge/tokens.hpp"

#include "mrforge/text.hpp"

namespace mrforge::executor {

std::size_t count_tokens(std::string_view s) {
    auto cps = text::decode_utf8(s);
    std::size_t tokens = 0;
    std::size_t word_len = 0;
    auto flush = [&] {
        if (word_len > 0) {
            tokens += (word_len + 3) / 4;
            word_len = 0;
        }
    };
    for (char32_t cp : cps) {
        if (text::is_space(cp)) {
            flush();
        } else if (text::is_ascii_punct(cp)) {
            flush();
            tokens += 1;
        } else {
            ++word_len;
        }
    }
    flush();
    return tokens;
}

}  // namespace mrforge::executor

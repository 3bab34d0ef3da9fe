#pragma once

#include <cstddef>
#include <string_view>

namespace mrforge::executor {

/// Deterministic token count: Unicode-aware whitespace split; within a
/// token every ASCII punctuation mark counts 1 and each maximal run of
/// word characters of length L counts ceil(L/4).
std::size_t count_tokens(std::string_view s);

}  // namespace mrforge::executor

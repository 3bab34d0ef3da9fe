#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace mrforge {

/// splitmix64 finalizer; also used to combine seeds and hash integers.
constexpr std::uint64_t mix_u64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic seed derivation: combine(a, b) != combine(b, a).
constexpr std::uint64_t combine_seed(std::uint64_t a, std::uint64_t b) {
    return mix_u64(a ^ (mix_u64(b) + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2)));
}

/// FNV-1a over raw bytes. Stable across platforms; used for content ids
/// and cache keys, never for security.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Seeded splitmix64 stream. The generator is fixed by contract: identical
/// seed and call sequence produce identical outputs on every platform, so
/// std::uniform_*_distribution (which is implementation-defined) is never
/// used on top of it.
///
/// Instances are cheap values; fork() derives an independent child stream
/// from the original seed and a tag, independent of how much of this
/// stream has been consumed.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound). bound must be > 0. Multiply-shift mapping;
    /// bias is < 2^-40 for any bound used here.
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    SeededRng fork(std::uint64_t tag) const { return SeededRng(combine_seed(seed_, tag)); }

    /// Fisher-Yates shuffle driven by this stream.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            using std::swap;
            swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

/// Hash a string key to a double in [0, 1). Drives the surrogate model's
/// deterministic Bernoulli draws.
inline double hash_unit(std::string_view key) {
    return static_cast<double>(mix_u64(fnv1a64(key)) >> 11) * 0x1.0p-53;
}

}  // namespace mrforge

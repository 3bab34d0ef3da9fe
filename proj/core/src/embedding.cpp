#include "mrforge/embedding.hpp"

#include <cmath>

#include "mrforge/rng.hpp"
#include "mrforge/text.hpp"

namespace mrforge::fitness {

std::vector<double> TrigramEmbedder::embed(std::string_view text) const {
    std::vector<double> v(dimension_, 0.0);
    std::string lower = text::lowercase_ascii(text);
    if (lower.empty()) return v;
    if (lower.size() < 3) {
        v[fnv1a64(lower) % dimension_] += 1.0;
    } else {
        for (std::size_t i = 0; i + 3 <= lower.size(); ++i) {
            v[fnv1a64(std::string_view(lower).substr(i, 3)) % dimension_] += 1.0;
        }
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
        for (double& x : v) x /= norm;
    }
    return v;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace mrforge::fitness

#pragma once

#include <string_view>
#include <vector>

namespace mrforge::fitness {

/// Deterministic text-to-vector encoder used for perturbation quality and
/// generation-output comparison.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::vector<double> embed(std::string_view text) const = 0;
    virtual std::size_t dimension() const = 0;
};

/// Default embedder: hashed character-trigram frequencies over the
/// ASCII-lowercased text, 512 buckets, L2-normalized. Texts shorter than a
/// trigram hash as a single feature.
class TrigramEmbedder : public EmbeddingProvider {
public:
    explicit TrigramEmbedder(std::size_t dimension = 512) : dimension_(dimension) {}

    std::vector<double> embed(std::string_view text) const override;
    std::size_t dimension() const override { return dimension_; }

private:
    std::size_t dimension_;
};

/// Cosine similarity; 0 when either vector has zero norm.
double cosine(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace mrforge::fitness

#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "capital/types.hpp"

namespace capital {

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyText : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Produces L2-normalized embeddings for reasoning texts. Every embedding in
// one run has the same dimension; downstream clustering and ranking consume
// only EmbeddingVector, so encoders are interchangeable.
class Encoder {
public:
    virtual ~Encoder() = default;

    // Throws EmptyText for empty input. The returned vector has unit L2 norm.
    virtual EmbeddingVector embed(std::string_view text) = 0;
    virtual std::size_t dim() const = 0;
    virtual std::string id() const = 0;
};

// Deterministic local embedder: character trigram counts hashed into a
// fixed number of buckets, then L2-normalized. No tokens, no state, no
// network; adequate wherever the caller controls which texts are similar.
class HashedNgramEncoder final : public Encoder {
public:
    explicit HashedNgramEncoder(std::size_t dim = 256);

    EmbeddingVector embed(std::string_view text) override;
    std::size_t dim() const override { return dim_; }
    std::string id() const override;

private:
    std::size_t dim_;
};

// Dot product of unit vectors, clamped to [-1, 1] against rounding.
// Throws DimensionMismatch when dimensions differ.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

double squared_distance(const EmbeddingVector& a, const EmbeddingVector& b);

// In-place L2 normalization. Zero vectors are left untouched.
void l2_normalize(EmbeddingVector& v);

}  // namespace capital

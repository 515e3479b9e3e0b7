#include "capital/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "capital/rng.hpp"

namespace capital {

HashedNgramEncoder::HashedNgramEncoder(std::size_t dim) : dim_(dim) {
    if (dim_ == 0) throw std::invalid_argument("encoder dim must be positive");
}

EmbeddingVector HashedNgramEncoder::embed(std::string_view text) {
    if (text.empty()) throw EmptyText("cannot embed empty text");
    EmbeddingVector v;
    v.values.assign(dim_, 0.0);
    if (text.size() < 3) {
        v.values[fnv1a64(text) % dim_] += 1.0;
    } else {
        for (std::size_t i = 0; i + 3 <= text.size(); ++i) {
            v.values[fnv1a64(text.substr(i, 3)) % dim_] += 1.0;
        }
    }
    l2_normalize(v);
    return v;
}

std::string HashedNgramEncoder::id() const {
    return "hashed-ngram-3/" + std::to_string(dim_);
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("cosine: dims " + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()));
    double dot = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) dot += a.values[i] * b.values[i];
    return std::clamp(dot, -1.0, 1.0);
}

double squared_distance(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("squared_distance: dims " +
                                std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
    double acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double d = a.values[i] - b.values[i];
        acc += d * d;
    }
    return acc;
}

void l2_normalize(EmbeddingVector& v) {
    double norm2 = 0.0;
    for (double x : v.values) norm2 += x * x;
    if (norm2 <= 0.0) return;
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v.values) x *= inv;
}

}  // namespace capital

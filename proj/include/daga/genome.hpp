#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "daga/errors.hpp"

namespace daga {

enum class GenomeKind { Binary, Continuous };

/// Fixed-length candidate solution: a bit-vector or a bounded real-vector.
struct Genome {
    GenomeKind kind = GenomeKind::Binary;
    std::vector<std::uint8_t> bits;  // Binary: entries 0/1
    std::vector<double> values;      // Continuous

    static Genome binary(std::vector<std::uint8_t> b) {
        Genome g;
        g.kind = GenomeKind::Binary;
        g.bits = std::move(b);
        return g;
    }

    static Genome continuous(std::vector<double> v) {
        Genome g;
        g.kind = GenomeKind::Continuous;
        g.values = std::move(v);
        return g;
    }

    std::size_t length() const { return kind == GenomeKind::Binary ? bits.size() : values.size(); }

    bool operator==(const Genome& other) const = default;
};

/// FNV-1a over the genome payload; used for dedup during truncation selection.
std::uint64_t genome_hash(const Genome& g);

/// Count of differing bit positions. Both genomes must be Binary and equal length.
int hamming_distance(const Genome& a, const Genome& b);

/// L2 distance. Both genomes must be Continuous and equal length.
double euclidean_distance(const Genome& a, const Genome& b);

/// Genome plus its cached fitness (maximization convention).
struct Individual {
    Genome genome;
    double fitness = 0.0;
};

/// Ordered list of individuals; |members| == capacity after every generation.
struct Population {
    std::vector<Individual> members;
    std::size_t capacity = 0;
};

} // namespace daga

#include "daga/genome.hpp"

#include <cmath>
#include <cstring>

namespace daga {

std::uint64_t genome_hash(const Genome& g) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    };
    const auto kind = static_cast<std::uint8_t>(g.kind);
    mix(&kind, 1);
    if (g.kind == GenomeKind::Binary) {
        mix(g.bits.data(), g.bits.size());
    } else {
        mix(g.values.data(), g.values.size() * sizeof(double));
    }
    return h;
}

int hamming_distance(const Genome& a, const Genome& b) {
    if (a.kind != GenomeKind::Binary || b.kind != GenomeKind::Binary)
        throw GenomeTypeError("hamming_distance requires binary genomes");
    if (a.bits.size() != b.bits.size())
        throw GenomeTypeError("hamming_distance requires equal lengths");
    int d = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) d += a.bits[i] != b.bits[i];
    return d;
}

double euclidean_distance(const Genome& a, const Genome& b) {
    if (a.kind != GenomeKind::Continuous || b.kind != GenomeKind::Continuous)
        throw GenomeTypeError("euclidean_distance requires continuous genomes");
    if (a.values.size() != b.values.size())
        throw GenomeTypeError("euclidean_distance requires equal lengths");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

} // namespace daga

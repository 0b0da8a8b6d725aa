#include "daga/variation.hpp"

#include <algorithm>
#include <cmath>

namespace daga {

DomainScaler::DomainScaler(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size() || lower_.empty())
        throw InvalidConfigError("scaler bounds must be non-empty and equal length");
    for (std::size_t i = 0; i < lower_.size(); ++i)
        if (!(lower_[i] < upper_[i]))
            throw InvalidConfigError("scaler requires lower < upper in every dimension");
}

std::vector<double> DomainScaler::scale(const std::vector<double>& x) const {
    if (x.size() != lower_.size()) throw GenomeTypeError("scale: dimension mismatch");
    std::vector<double> t(x.size());
    bool clamped = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double v = x[i];
        if (v < lower_[i]) {
            v = lower_[i];
            clamped = true;
        } else if (v > upper_[i]) {
            v = upper_[i];
            clamped = true;
        }
        t[i] = (v - lower_[i]) / (upper_[i] - lower_[i]);
    }
    if (clamped) ++clamp_count_;
    return t;
}

std::vector<double> DomainScaler::unscale(const std::vector<double>& t) const {
    if (t.size() != lower_.size()) throw GenomeTypeError("unscale: dimension mismatch");
    std::vector<double> x(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double v = std::min(1.0, std::max(0.0, t[i]));
        x[i] = lower_[i] + v * (upper_[i] - lower_[i]);
    }
    return x;
}

Genome sample_offspring(const std::vector<double>& z, const SamplerConfig& cfg, RandomSource& rng,
                        const DomainScaler* scaler) {
    if (cfg.mode == SamplerMode::Bernoulli) {
        Genome g;
        g.kind = GenomeKind::Binary;
        g.bits.resize(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) g.bits[i] = rng.bernoulli(z[i]) ? 1 : 0;
        return g;
    }
    if (scaler == nullptr || scaler->dimensions() != z.size())
        throw GenomeTypeError("Gaussian sampling requires a matching domain scaler");
    if (cfg.sigma_squared < 0.0)
        throw InvalidConfigError("sampler sigma_squared must be >= 0");
    const double stddev = std::sqrt(cfg.sigma_squared);
    std::vector<double> t(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        double v = stddev > 0.0 ? z[i] + rng.normal(0.0, stddev) : z[i];
        t[i] = std::min(1.0, std::max(0.0, v));
    }
    return Genome::continuous(scaler->unscale(t));
}

double transition_probability(const DenoisingAutoencoder& dae, const Genome& from,
                              const Genome& to) {
    if (from.kind != GenomeKind::Binary || to.kind != GenomeKind::Binary)
        throw GenomeTypeError("transition_probability requires binary genomes");
    if (from.bits.size() != dae.visible_size() || to.bits.size() != dae.visible_size())
        throw GenomeTypeError("transition_probability: genome length != visible size");
    const auto z = dae.reconstruct(genome_to_unit_vector(from));
    double prob = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) prob *= to.bits[i] ? z[i] : 1.0 - z[i];
    return prob;
}

std::vector<double> genome_to_unit_vector(const Genome& g) {
    if (g.kind != GenomeKind::Binary)
        throw GenomeTypeError("genome_to_unit_vector requires a binary genome");
    std::vector<double> v(g.bits.size());
    for (std::size_t i = 0; i < g.bits.size(); ++i) v[i] = g.bits[i] ? 1.0 : 0.0;
    return v;
}

} // namespace daga

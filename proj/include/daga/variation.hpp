#pragma once

#include <vector>

#include "daga/autoencoder.hpp"
#include "daga/genome.hpp"
#include "daga/rng.hpp"

namespace daga {

enum class SamplerMode { Bernoulli, Gaussian };

/// How decoder outputs become offspring. Bernoulli samples bit_i ~ B(z_i);
/// Gaussian adds N(0, sigma_squared) per component in scaled space.
struct SamplerConfig {
    SamplerMode mode = SamplerMode::Bernoulli;
    double sigma_squared = 0.0;
};

/// Affine map between a problem's per-dimension bounds and the model-space
/// cube [0, 1]^n. Out-of-bounds inputs to scale() are clamped and counted.
class DomainScaler {
  public:
    DomainScaler(std::vector<double> lower, std::vector<double> upper);

    std::vector<double> scale(const std::vector<double>& x) const;
    std::vector<double> unscale(const std::vector<double>& t) const;

    long long clamp_count() const { return clamp_count_; }
    std::size_t dimensions() const { return lower_.size(); }

  private:
    std::vector<double> lower_;
    std::vector<double> upper_;
    mutable long long clamp_count_ = 0;
};

/// Sample one offspring genome from decoder outputs z (componentwise in (0,1)).
/// Gaussian mode clamps to [0,1] in model space, then unscales through `scaler`
/// (required for Gaussian, ignored for Bernoulli).
Genome sample_offspring(const std::vector<double>& z, const SamplerConfig& cfg, RandomSource& rng,
                        const DomainScaler* scaler = nullptr);

/// Exact probability that the autoencoder maps `from` to `to` under Bernoulli
/// sampling: prod_i z_i^to_i (1-z_i)^(1-to_i) with z = decode(encode(from)).
double transition_probability(const DenoisingAutoencoder& dae, const Genome& from,
                              const Genome& to);

/// Bits of a binary genome as 0.0/1.0 model inputs.
std::vector<double> genome_to_unit_vector(const Genome& g);

} // namespace daga

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "daga/errors.hpp"
#include "daga/rng.hpp"

namespace daga {

enum class CorruptionKind { BitFlip, GaussianJitter };

/// Input corruption applied before each training reconstruction.
/// BitFlip flips exactly round(rate * n) distinct positions; GaussianJitter adds
/// iid N(0, rate^2) per component and clamps to [0, 1].
struct CorruptionSpec {
    double rate = 0.0;
    CorruptionKind kind = CorruptionKind::BitFlip;
};

enum class LossKind { CrossEntropy, SquaredError };

struct TrainConfig {
    int epochs = 1;
    double learning_rate = 0.1;
    CorruptionSpec corruption;
    LossKind loss = LossKind::CrossEntropy;
    // Examples per gradient update; 0 means the whole batch per update.
    std::size_t minibatch_size = 0;
};

/// Single-hidden-layer denoising autoencoder with logistic-sigmoid encoder and
/// decoder. Decoder outputs are valid Bernoulli parameters: strictly inside (0, 1).
class DenoisingAutoencoder {
  public:
    DenoisingAutoencoder(std::size_t visible, std::size_t hidden, RandomSource& rng);

    std::size_t visible_size() const { return visible_; }
    std::size_t hidden_size() const { return hidden_; }

    /// h = sigmoid(W x + b)
    std::vector<double> encode(const std::vector<double>& x) const;

    /// z = sigmoid(W' h + b'), clamped to [1e-12, 1 - 1e-12]
    std::vector<double> decode(const std::vector<double>& h) const;

    std::vector<double> reconstruct(const std::vector<double>& x) const {
        return decode(encode(x));
    }

    /// `epochs` passes of gradient descent on the reconstruction loss. Each epoch
    /// draws fresh corruption per example (in batch order); examples are processed
    /// in order and gradients averaged per minibatch. Returns the mean
    /// per-component loss of the last epoch (of a clean forward pass when
    /// epochs == 0). Throws NumericError if the loss goes non-finite.
    double train(const std::vector<std::vector<double>>& batch, const TrainConfig& cfg,
                 RandomSource& rng);

    /// Max over parameters of the relative error between the analytic gradient of
    /// the (uncorrupted) reconstruction loss at x and central finite differences.
    double gradient_check(const std::vector<double>& x, LossKind loss, double epsilon);

    void save_weights(const std::string& path) const;
    static DenoisingAutoencoder load_weights(const std::string& path);

    // Flat parameter views, order: W row-major, b, W' row-major, b'.
    std::size_t parameter_count() const;
    std::vector<double> parameters() const;
    void set_parameters(const std::vector<double>& params);

    bool operator==(const DenoisingAutoencoder& other) const = default;

  private:
    DenoisingAutoencoder() = default;

    // Forward pass keeping intermediates; returns total loss against `target`.
    double forward(const std::vector<double>& input, const std::vector<double>& target,
                   LossKind loss, std::vector<double>& hidden_out,
                   std::vector<double>& output_raw) const;

    std::size_t visible_ = 0;
    std::size_t hidden_ = 0;
    std::vector<double> w_;        // hidden x visible, row-major
    std::vector<double> b_;        // hidden
    std::vector<double> w_prime_;  // visible x hidden, row-major
    std::vector<double> b_prime_;  // visible
};

/// Corrupt a [0,1]-vector according to `spec`. Exposed for tests and analysis.
std::vector<double> corrupt(const std::vector<double>& x, const CorruptionSpec& spec,
                            RandomSource& rng);

} // namespace daga

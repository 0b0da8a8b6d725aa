#include <doctest.h>

#include <cmath>
#include <map>

#include "daga/variation.hpp"

using namespace daga;

TEST_SUITE("variation") {

TEST_CASE("bernoulli sampling at degenerate probabilities") {
    RandomSource rng(1);
    const std::vector<double> z(6, 1.0 - 1e-13);
    const SamplerConfig cfg{SamplerMode::Bernoulli, 0.0};
    for (int i = 0; i < 100; ++i) {
        const Genome g = sample_offspring(z, cfg, rng);
        CHECK(g.kind == GenomeKind::Binary);
        CHECK(g.bits == std::vector<std::uint8_t>(6, 1));
    }
}

TEST_CASE("bernoulli sampling at one half is uniform over genomes") {
    RandomSource rng(4);
    const std::vector<double> z(6, 0.5);
    const SamplerConfig cfg{SamplerMode::Bernoulli, 0.0};
    std::map<std::size_t, int> counts;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const Genome g = sample_offspring(z, cfg, rng);
        std::size_t idx = 0;
        for (auto b : g.bits) idx = (idx << 1) | b;
        ++counts[idx];
    }
    // each genome frequency within 3 sigma of 1/64
    const double p = 1.0 / 64.0;
    const double sigma = std::sqrt(p * (1 - p) / draws);
    for (std::size_t idx = 0; idx < 64; ++idx) {
        const double freq = static_cast<double>(counts[idx]) / draws;
        CHECK(std::fabs(freq - p) <= 3.0 * sigma);
    }
}

TEST_CASE("bernoulli per-bit marginals match z") {
    RandomSource rng(3);
    const std::vector<double> z = {0.1, 0.35, 0.5, 0.72, 0.9, 0.04};
    const SamplerConfig cfg{SamplerMode::Bernoulli, 0.0};
    std::vector<long long> ones(z.size(), 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const Genome g = sample_offspring(z, cfg, rng);
        for (std::size_t b = 0; b < z.size(); ++b) ones[b] += g.bits[b];
    }
    for (std::size_t b = 0; b < z.size(); ++b) {
        const double freq = static_cast<double>(ones[b]) / draws;
        const double sigma = std::sqrt(z[b] * (1 - z[b]) / draws);
        CHECK(std::fabs(freq - z[b]) <= 3.0 * sigma);
    }
}

TEST_CASE("gaussian sampling with zero variance is the deterministic unscale") {
    RandomSource rng(4);
    const DomainScaler scaler(std::vector<double>(4, -5.12), std::vector<double>(4, 5.12));
    const std::vector<double> z = {0.5, 0.25, 1.0, 0.0};
    const Genome g = sample_offspring(z, SamplerConfig{SamplerMode::Gaussian, 0.0}, rng, &scaler);
    CHECK(g.kind == GenomeKind::Continuous);
    CHECK(g.values[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(g.values[1] == doctest::Approx(-2.56).epsilon(1e-12));
    CHECK(g.values[2] == 5.12);
    CHECK(g.values[3] == -5.12);
}

TEST_CASE("gaussian sampling always lands inside the bounds") {
    RandomSource rng(5);
    const DomainScaler scaler(std::vector<double>(3, -2.0), std::vector<double>(3, 2.0));
    const std::vector<double> z = {0.01, 0.99, 0.5};
    const SamplerConfig cfg{SamplerMode::Gaussian, 0.5};  // large sigma: clamping must engage
    for (int i = 0; i < 2000; ++i) {
        const Genome g = sample_offspring(z, cfg, rng, &scaler);
        for (double v : g.values) {
            CHECK(v >= -2.0);
            CHECK(v <= 2.0);
        }
    }
    CHECK_THROWS_AS(sample_offspring(z, cfg, rng, nullptr), GenomeTypeError);
}

TEST_CASE("domain scaler maps bounds to the unit cube") {
    const DomainScaler scaler(std::vector<double>(5, -5.12), std::vector<double>(5, 5.12));
    const auto mid = scaler.scale(std::vector<double>(5, 0.0));
    for (double v : mid) CHECK(v == 0.5);
    const auto low = scaler.scale(std::vector<double>(5, -5.12));
    for (double v : low) CHECK(v == 0.0);
    const auto high = scaler.scale(std::vector<double>(5, 5.12));
    for (double v : high) CHECK(v == 1.0);
    CHECK_THROWS_AS(DomainScaler({1.0}, {1.0}), InvalidConfigError);
}

TEST_CASE("scale then unscale round-trips within 1e-12") {
    RandomSource rng(6);
    const DomainScaler scaler(std::vector<double>(8, -2.048), std::vector<double>(8, 2.048));
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> x(8);
        for (auto& v : x) v = rng.uniform(-2.048, 2.048);
        const auto back = scaler.unscale(scaler.scale(x));
        for (std::size_t d = 0; d < x.size(); ++d)
            worst = std::max(worst, std::fabs(back[d] - x[d]));
    }
    CHECK(worst < 1e-12);
    CHECK(scaler.clamp_count() == 0);
}

TEST_CASE("out-of-bounds scale inputs are clamped and counted") {
    const DomainScaler scaler({0.0, 0.0}, {1.0, 2.0});
    const auto t = scaler.scale({1.5, -1.0});
    CHECK(t[0] == 1.0);
    CHECK(t[1] == 0.0);
    CHECK(scaler.clamp_count() == 1);
    scaler.scale({0.5, 0.5});
    CHECK(scaler.clamp_count() == 1);
}

TEST_CASE("transition probabilities form a distribution for any weights") {
    RandomSource rng(7);
    DenoisingAutoencoder uniform_net(6, 6, rng);
    uniform_net.set_parameters(std::vector<double>(uniform_net.parameter_count(), 0.0));

    // zero weights: every transition is exactly 2^-6
    const Genome from = Genome::binary({0, 1, 0, 1, 1, 0});
    for (std::size_t to = 0; to < 64; ++to) {
        std::vector<std::uint8_t> bits(6);
        for (int i = 0; i < 6; ++i) bits[static_cast<std::size_t>(i)] = (to >> (5 - i)) & 1;
        CHECK(transition_probability(uniform_net, from, Genome::binary(bits)) ==
              doctest::Approx(1.0 / 64.0).epsilon(1e-12));
    }

    // random weights: rows still sum to one
    DenoisingAutoencoder net(6, 4, rng);
    for (std::size_t f = 0; f < 64; ++f) {
        std::vector<std::uint8_t> fbits(6);
        for (int i = 0; i < 6; ++i) fbits[static_cast<std::size_t>(i)] = (f >> (5 - i)) & 1;
        const Genome g_from = Genome::binary(fbits);
        double row_sum = 0.0;
        for (std::size_t to = 0; to < 64; ++to) {
            std::vector<std::uint8_t> tbits(6);
            for (int i = 0; i < 6; ++i) tbits[static_cast<std::size_t>(i)] = (to >> (5 - i)) & 1;
            row_sum += transition_probability(net, g_from, Genome::binary(tbits));
        }
        CHECK(std::fabs(row_sum - 1.0) < 1e-9);
    }
}

}

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "daga/autoencoder.hpp"
#include "daga/ingestion.hpp"
#include "daga/rng.hpp"

using namespace daga;

namespace {

std::vector<double> random_unit_vector(std::size_t n, RandomSource& rng, bool binary) {
    std::vector<double> x(n);
    for (auto& v : x) v = binary ? (rng.bernoulli(0.5) ? 1.0 : 0.0) : rng.uniform01();
    return x;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_SUITE("autoencoder") {

TEST_CASE("weight initialization stays inside the fan-in bound") {
    RandomSource rng(1);
    const DenoisingAutoencoder dae(20, 100, rng);
    CHECK(dae.visible_size() == 20);
    CHECK(dae.hidden_size() == 100);
    const auto params = dae.parameters();
    // layout: W (100x20), b (100), W' (20x100), b' (20)
    const double enc_bound = 1.0 / std::sqrt(20.0);
    const double dec_bound = 1.0 / std::sqrt(100.0);
    std::size_t i = 0;
    for (; i < 2000; ++i) CHECK(std::fabs(params[i]) <= enc_bound);
    for (; i < 2100; ++i) CHECK(params[i] == 0.0);
    for (; i < 4100; ++i) CHECK(std::fabs(params[i]) <= dec_bound);
    for (; i < 4120; ++i) CHECK(params[i] == 0.0);
    CHECK(params.size() == 4120);

    RandomSource tiny_rng(2);
    const DenoisingAutoencoder tiny(1, 1, tiny_rng);
    CHECK(tiny.parameters().size() == 4);
    CHECK(tiny.parameters()[1] == 0.0);
    CHECK(tiny.parameters()[3] == 0.0);
    CHECK_THROWS_AS(DenoisingAutoencoder(0, 5, tiny_rng), InvalidConfigError);
}

TEST_CASE("bitflip corruption flips exactly round(rate*n) distinct positions") {
    RandomSource rng(3);
    const auto x = random_unit_vector(20, rng, true);

    const auto same = corrupt(x, {0.0, CorruptionKind::BitFlip}, rng);
    CHECK(same == x);

    const auto flipped = corrupt(std::vector<double>(6, 1.0), {1.0, CorruptionKind::BitFlip}, rng);
    CHECK(flipped == std::vector<double>(6, 0.0));

    for (int trial = 0; trial < 200; ++trial) {
        const auto noisy = corrupt(x, {0.25, CorruptionKind::BitFlip}, rng);
        int differing = 0;
        for (std::size_t i = 0; i < x.size(); ++i) differing += noisy[i] != x[i];
        CHECK(differing == 5);
    }
    CHECK_THROWS_AS(corrupt(x, {1.5, CorruptionKind::BitFlip}, rng), InvalidConfigError);
}

TEST_CASE("gaussian corruption stays in the unit cube") {
    RandomSource rng(4);
    const auto x = random_unit_vector(30, rng, false);
    for (int trial = 0; trial < 100; ++trial) {
        const auto noisy = corrupt(x, {0.3, CorruptionKind::GaussianJitter}, rng);
        for (double v : noisy) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    const auto clean = corrupt(x, {0.0, CorruptionKind::GaussianJitter}, rng);
    CHECK(clean == x);
}

TEST_CASE("encode and decode shapes and ranges") {
    RandomSource rng(5);
    DenoisingAutoencoder dae(6, 6, rng);

    // zero weights: sigmoid(0) = 0.5 everywhere
    dae.set_parameters(std::vector<double>(dae.parameter_count(), 0.0));
    const auto h = dae.encode(std::vector<double>(6, 0.7));
    for (double v : h) CHECK(v == 0.5);
    const auto z = dae.decode(std::vector<double>(6, 0.3));
    for (double v : z) CHECK(v == 0.5);

    CHECK_THROWS_AS(dae.encode(std::vector<double>(5, 0.0)), GenomeTypeError);
    CHECK_THROWS_AS(dae.decode(std::vector<double>(7, 0.0)), GenomeTypeError);

    // saturation: a huge weight drives the sigmoid to 1 within 1e-9
    RandomSource rng1(6);
    DenoisingAutoencoder one(1, 1, rng1);
    one.set_parameters({1000.0, 0.0, 0.0, 0.0});
    CHECK(one.encode({1.0})[0] == doctest::Approx(1.0).epsilon(1e-9));

    // decoder outputs stay strictly inside (0,1) even when saturated
    one.set_parameters({0.0, 0.0, 1e6, 1e6});
    const auto sat = one.decode({1.0});
    CHECK(sat[0] < 1.0);
    CHECK(sat[0] > 0.0);
}

TEST_CASE("training a single target converges") {
    RandomSource rng(7);
    DenoisingAutoencoder dae(6, 6, rng);
    TrainConfig cfg;
    cfg.epochs = 500;
    cfg.learning_rate = 0.1;
    cfg.corruption = {0.05, CorruptionKind::BitFlip};
    const double loss = dae.train({std::vector<double>(6, 1.0)}, cfg, rng);
    CHECK(loss < 0.05);  // mean cross-entropy per component
    const auto z = dae.reconstruct(std::vector<double>(6, 1.0));
    for (double v : z) CHECK(v > 0.9);
}

TEST_CASE("zero epochs reports the loss without touching the weights") {
    RandomSource rng(8);
    DenoisingAutoencoder dae(10, 4, rng);
    const auto before = dae.parameters();
    TrainConfig cfg;
    cfg.epochs = 0;
    auto batch = std::vector<std::vector<double>>{random_unit_vector(10, rng, true)};
    const double loss = dae.train(batch, cfg, rng);
    CHECK(loss >= 0.0);
    CHECK(dae.parameters() == before);
    CHECK_THROWS_AS(dae.train({}, cfg, rng), InvalidConfigError);
}

TEST_CASE("three 6-bit targets all reconstruct") {
    RandomSource rng(9);
    DenoisingAutoencoder dae(6, 6, rng);
    const std::vector<std::vector<double>> targets = {
        {0, 0, 0, 0, 0, 0}, {0, 0, 0, 1, 1, 1}, {1, 1, 1, 1, 1, 1}};
    TrainConfig cfg;
    cfg.epochs = 1000;
    cfg.learning_rate = 0.5;
    cfg.minibatch_size = 1;
    cfg.corruption = {0.05, CorruptionKind::BitFlip};
    dae.train(targets, cfg, rng);
    for (const auto& target : targets) {
        const auto z = dae.reconstruct(target);
        for (std::size_t i = 0; i < 6; ++i) CHECK(std::fabs(z[i] - target[i]) < 0.2);
    }
}

TEST_CASE("training keeps the loss finite and non-negative on typical configs") {
    RandomSource rng(10);
    DenoisingAutoencoder dae(20, 10, rng);
    std::vector<std::vector<double>> batch;
    for (int i = 0; i < 30; ++i) batch.push_back(random_unit_vector(20, rng, true));
    TrainConfig cfg;
    cfg.epochs = 50;
    cfg.learning_rate = 0.1;
    cfg.corruption = {0.1, CorruptionKind::BitFlip};
    const double loss = dae.train(batch, cfg, rng);
    CHECK(loss >= 0.0);
    for (double p : dae.parameters()) CHECK(std::isfinite(p));
}

TEST_CASE("gradient check beats 1e-4 on random nets in both loss modes") {
    RandomSource rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t visible = 1 + rng.uniform_below(20);
        const std::size_t hidden = 1 + rng.uniform_below(20);
        DenoisingAutoencoder dae(visible, hidden, rng);
        const bool binary = trial % 2 == 0;
        const auto x = random_unit_vector(visible, rng, binary);
        const auto loss = binary ? LossKind::CrossEntropy : LossKind::SquaredError;
        CHECK(dae.gradient_check(x, loss, 1e-5) < 1e-4);
    }
}

TEST_CASE("gradient check at a zero-weight net") {
    RandomSource rng(12);
    DenoisingAutoencoder dae(10, 5, rng);
    dae.set_parameters(std::vector<double>(dae.parameter_count(), 0.0));
    const auto x = random_unit_vector(10, rng, true);
    CHECK(dae.gradient_check(x, LossKind::CrossEntropy, 1e-5) < 1e-4);
    CHECK(dae.gradient_check(x, LossKind::SquaredError, 1e-5) < 1e-4);
    CHECK_THROWS_AS(dae.gradient_check(x, LossKind::CrossEntropy, 1e-2), InvalidConfigError);
}

TEST_CASE("weight files round-trip exactly") {
    RandomSource rng(13);
    DenoisingAutoencoder dae(7, 3, rng);
    TrainConfig cfg;
    cfg.epochs = 5;
    std::vector<std::vector<double>> batch = {random_unit_vector(7, rng, true)};
    dae.train(batch, cfg, rng);

    const std::string path = temp_path("daga_weights_test.txt");
    dae.save_weights(path);
    const DenoisingAutoencoder loaded = DenoisingAutoencoder::load_weights(path);
    CHECK(loaded == dae);
    std::filesystem::remove(path);
}

TEST_CASE("weight file corruption is detected") {
    RandomSource rng(14);
    DenoisingAutoencoder dae(4, 4, rng);
    const std::string path = temp_path("daga_weights_corrupt.txt");
    dae.save_weights(path);
    std::string text = read_file(path);

    // truncation
    write_file(path, text.substr(0, text.size() / 2));
    CHECK_THROWS_AS(DenoisingAutoencoder::load_weights(path), ParseError);

    // single flipped hex digit in a parameter: checksum must catch it
    std::string mutated = text;
    const std::size_t body = mutated.find('\n') + 1;
    mutated[body] = mutated[body] == '0' ? '1' : '0';
    write_file(path, mutated);
    CHECK_THROWS_AS(DenoisingAutoencoder::load_weights(path), ParseError);
    try {
        DenoisingAutoencoder::load_weights(path);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("checksum") != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("deterministic training given the seed") {
    const auto run = [] {
        RandomSource rng(99);
        DenoisingAutoencoder dae(12, 6, rng);
        std::vector<std::vector<double>> batch;
        for (int i = 0; i < 8; ++i) batch.push_back(random_unit_vector(12, rng, true));
        TrainConfig cfg;
        cfg.epochs = 20;
        cfg.corruption = {0.25, CorruptionKind::BitFlip};
        dae.train(batch, cfg, rng);
        return dae.parameters();
    };
    CHECK(run() == run());
}

}

#include <doctest.h>

#include <cmath>
#include <set>

#include "daga/genome.hpp"
#include "daga/problems.hpp"
#include "daga/rng.hpp"

using namespace daga;

TEST_SUITE("rng-genome") {

TEST_CASE("identical seeds give identical draw sequences") {
    RandomSource a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
    RandomSource c(42), d(43);
    bool all_equal = true;
    for (int i = 0; i < 64; ++i) all_equal = all_equal && c.next_u64() == d.next_u64();
    CHECK_FALSE(all_equal);
}

TEST_CASE("split streams are disjoint from the parent and each other") {
    RandomSource parent(7);
    RandomSource s0 = parent.split(0);
    RandomSource s1 = parent.split(1);
    RandomSource s0_again = parent.split(0);
    CHECK(s0.next_u64() == s0_again.next_u64());
    CHECK(s0.next_u64() != s1.next_u64());
}

TEST_CASE("uniform_below stays in range and covers all values") {
    RandomSource rng(3);
    std::set<std::size_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const std::size_t v = rng.uniform_below(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("uniform01 lies in [0,1) and is roughly centered") {
    RandomSource rng(5);
    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double v = rng.uniform01();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
        sum += v;
    }
    CHECK(sum / 10000.0 == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("normal draws have the requested moments") {
    RandomSource rng(11);
    double sum = 0.0, sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double v = rng.normal(2.0, 3.0);
        sum += v;
        sq += v * v;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(mean == doctest::Approx(2.0).epsilon(0.05));
    CHECK(var == doctest::Approx(9.0).epsilon(0.08));
}

TEST_CASE("hamming distance`") {
    const auto g = [](std::initializer_list<int> bits) {
        std::vector<std::uint8_t> v;
        for (int b : bits) v.push_back(static_cast<std::uint8_t>(b));
        return Genome::binary(v);
    };
    CHECK(hamming_distance(g({0, 0, 0, 0, 0, 0}), g({0, 0, 0, 0, 0, 0})) == 0);
    CHECK(hamming_distance(g({0, 0, 0, 0, 0, 0}), g({1, 1, 1, 1, 1, 1})) == 6);
    CHECK(hamming_distance(g({0, 0, 0, 1, 1, 1}), g({0, 0, 0, 0, 0, 0})) == 3);
    CHECK_THROWS_AS(hamming_distance(g({0, 1}), g({0, 1, 1})), GenomeTypeError);
    CHECK_THROWS_AS(hamming_distance(g({0, 1}), Genome::continuous({0.0, 1.0})),
                    GenomeTypeError);
}

TEST_CASE("euclidean distance") {
    CHECK(euclidean_distance(Genome::continuous({0, 0}), Genome::continuous({0, 0})) == 0.0);
    CHECK(euclidean_distance(Genome::continuous({3, 4}), Genome::continuous({0, 0})) == 5.0);
    CHECK(euclidean_distance(Genome::continuous({1, 1}), Genome::continuous({2, 2})) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(euclidean_distance(Genome::continuous({1}), Genome::continuous({1, 2})),
                    GenomeTypeError);
}

TEST_CASE("hamming distance is a metric on all 6-bit pairs") {
    std::vector<Genome> genomes;
    for (int v = 0; v < 64; ++v) {
        std::vector<std::uint8_t> bits(6);
        for (int i = 0; i < 6; ++i) bits[static_cast<std::size_t>(i)] = (v >> (5 - i)) & 1;
        genomes.push_back(Genome::binary(bits));
    }
    for (int a = 0; a < 64; ++a) {
        CHECK(hamming_distance(genomes[a], genomes[a]) == 0);
        for (int b = 0; b < 64; ++b) {
            const int dab = hamming_distance(genomes[a], genomes[b]);
            CHECK(dab == hamming_distance(genomes[b], genomes[a]));
            if (a != b) CHECK(dab > 0);
            for (int c = 0; c < 64; ++c)
                CHECK(dab <= hamming_distance(genomes[a], genomes[c]) +
                                 hamming_distance(genomes[c], genomes[b]));
        }
    }
}

TEST_CASE("init_population evaluates everyone and respects shapes") {
    Problem maxones = make_maxones(20);
    Evaluator eval{&maxones};
    RandomSource rng(1);
    const Population pop = init_population(eval, 200, rng);
    CHECK(pop.members.size() == 200);
    CHECK(pop.capacity == 200);
    CHECK(eval.count == 200);
    for (const auto& ind : pop.members) {
        CHECK(ind.genome.bits.size() == 20);
        CHECK(ind.fitness == maxones.evaluate(ind.genome));
    }

    Problem sphere = make_sphere(50);
    Evaluator seval{&sphere};
    const Population spop = init_population(seval, 10, rng);
    for (const auto& ind : spop.members)
        for (double v : ind.genome.values) {
            CHECK(v >= -5.12);
            CHECK(v <= 5.12);
        }

    Evaluator one{&maxones};
    CHECK(init_population(one, 1, rng).members.size() == 1);
    Evaluator zero{&maxones};
    CHECK_THROWS_AS(init_population(zero, 0, rng), InvalidConfigError);
}

TEST_CASE("init_population bit frequency is near one half") {
    Problem maxones = make_maxones(20);
    Evaluator eval{&maxones};
    RandomSource rng(9);
    const Population pop = init_population(eval, 600, rng);  // 12000 bits
    long long ones = 0, total = 0;
    for (const auto& ind : pop.members)
        for (auto b : ind.genome.bits) {
            ones += b;
            ++total;
        }
    CHECK(total >= 10000);
    const double fraction = static_cast<double>(ones) / static_cast<double>(total);
    CHECK(fraction > 0.48);
    CHECK(fraction < 0.52);
}

}

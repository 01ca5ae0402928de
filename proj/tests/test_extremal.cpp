#include <doctest.h>

#include <cmath>
#include <random>

#include "keyaudit/extremal.hpp"
#include "oracles.hpp"

using namespace keyaudit;

TEST_CASE("spike distribution construction") {
  int n = 3;
  CHECK(approx_equal(spike_distribution(n, std::ldexp(1.0, -n), 5),
                     KeyDistribution::uniform(n)));
  CHECK(approx_equal(spike_distribution(n, 1.0, 5),
                     KeyDistribution::point_mass(n, 5)));
  KeyDistribution p = spike_distribution(2, 0.4, 0);
  CHECK(p.prob(0) == doctest::Approx(0.4));
  CHECK(p.prob(1) == doctest::Approx(0.2));
  CHECK(p.prob(2) == doctest::Approx(0.2));
  CHECK(p.prob(3) == doctest::Approx(0.2));
  CHECK_THROWS_AS(spike_distribution(2, 0.1, 0), DistError);
  CHECK_THROWS_AS(spike_distribution(2, 1.1, 0), DistError);
}

TEST_CASE("information-constrained maximum: endpoints and regression") {
  for (int n : {2, 5, 8}) {
    CHECK(max_guess_given_information(n, 0.0).p1_star ==
          doctest::Approx(std::ldexp(1.0, -n)).epsilon(1e-12));
    CHECK(max_guess_given_information(n, static_cast<double>(n)).p1_star ==
          doctest::Approx(1.0));
  }
  // Pinned bisection solution for n = 8, one bit of information.
  ExtremalResult r = max_guess_given_information(8, 1.0);
  CHECK(r.p1_star == doctest::Approx(0.21931281781060096).epsilon(1e-10));
  CHECK(r.l_exponent == doctest::Approx(-std::log2(r.p1_star)));
  CHECK(guessing_probability(r.witness).p1 ==
        doctest::Approx(r.p1_star).epsilon(1e-9));
  // The witness sits on its own constraint boundary.
  CHECK(eve_information(r.witness) == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(max_guess_given_information(4, -0.5), DistError);
  CHECK_THROWS_AS(max_guess_given_information(4, 4.5), DistError);
}

TEST_CASE("information-constrained maximum is monotone in info") {
  int n = 6;
  double prev = 0.0;
  for (int k = 0; k <= 12; ++k) {
    double info = 0.5 * k;
    double p1 = max_guess_given_information(n, info).p1_star;
    CHECK(p1 >= prev - 1e-12);
    prev = p1;
  }
}

TEST_CASE("information-constrained maximum beats a randomized simplex search") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> draw(0.05, 0.95);
  for (int n : {2, 3, 4}) {
    for (int trial = 0; trial < 4; ++trial) {
      double info = draw(rng) * n;
      ExtremalResult r = max_guess_given_information(n, info);
      double found = oracles::max_p1_under_entropy(
          n, static_cast<double>(n) - info, 400, rng);
      CHECK(found <= r.p1_star + 1e-6);
      CHECK(found >= r.p1_star - 1e-6);  // the search reaches the optimum
    }
  }
}

TEST_CASE("vd-constrained maximum") {
  int n = 3;
  CHECK(max_guess_given_vd(n, 0.0).p1_star ==
        doctest::Approx(std::ldexp(1.0, -n)));
  CHECK(max_guess_given_vd(n, 1.0 - std::ldexp(1.0, -n)).p1_star ==
        doctest::Approx(1.0));
  ExtremalResult r = max_guess_given_vd(4, 0.3);
  CHECK(r.p1_star == doctest::Approx(1.0 / 16 + 0.3).epsilon(1e-12));
  CHECK(variational_distance(r.witness, KeyDistribution::uniform(4)) ==
        doctest::Approx(0.3).epsilon(1e-9));
  CHECK_THROWS_AS(max_guess_given_vd(3, -0.1), DistError);
  CHECK_THROWS_AS(max_guess_given_vd(3, 0.9), DistError);
}

TEST_CASE("vd-constrained maximum matches the simplex search") {
  std::mt19937_64 rng(78);
  for (int n : {2, 3, 4}) {
    double eps = 0.1;
    ExtremalResult r = max_guess_given_vd(n, eps);
    double found = oracles::max_p1_under_vd(n, eps, 400, rng);
    CHECK(found <= r.p1_star + 1e-6);
    CHECK(found >= r.p1_star - 1e-6);
  }
}

TEST_CASE("kpa break length") {
  CHECK(kpa_break_length(1, 0.0) == doctest::Approx(0.0));
  CHECK(kpa_break_length(1024, 20.0) == doctest::Approx(30.0));
  CHECK(kpa_break_length(16, 3.0) == doctest::Approx(7.0));
  CHECK_THROWS_AS(kpa_break_length(0, 1.0), DistError);
  CHECK_THROWS_AS(kpa_break_length(4, -1.0), DistError);
}

TEST_CASE("kpa witness family") {
  // Full revelation degenerates to the uniform distribution.
  KpaWitness full = kpa_witness_family(4, 4);
  CHECK(approx_equal(full.distribution, KeyDistribution::uniform(4)));

  KpaWitness w = kpa_witness_family(4, 2);
  CHECK(w.p1_before == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(w.l_prime == 2);
  // Every fiber collapses to a point mass.
  for (std::uint32_t b = 0; b < 4; ++b) {
    SubsetSpec reveal{{0, 1},
                      std::vector<int>{static_cast<int>((b >> 1) & 1),
                                       static_cast<int>(b & 1)}};
    KeyDistribution posterior =
        condition_on_revealed_bits(w.distribution, reveal);
    CHECK(guessing_probability(posterior).p1 == doctest::Approx(1.0));
  }

  KpaWitness w2 = kpa_witness_family(16, 7);
  CHECK(w2.p1_before == doctest::Approx(std::ldexp(1.0, -7)).epsilon(1e-12));
  CHECK(w2.distribution.support().size() == 128);

  CHECK_THROWS_AS(kpa_witness_family(4, 0), DistError);
  CHECK_THROWS_AS(kpa_witness_family(4, 5), DistError);

  // Deterministic in the seed.
  KpaWitness a = kpa_witness_family(8, 3, 42);
  KpaWitness b = kpa_witness_family(8, 3, 42);
  CHECK(approx_equal(a.distribution, b.distribution, 0.0));
}

TEST_CASE("markov average-to-individual conversion") {
  CHECK(markov_individual(0.01, 0.1) == doctest::Approx(0.1));
  CHECK(markov_individual(0.03, 1.0) == doctest::Approx(0.03));
  CHECK(markov_individual(std::ldexp(1.0, -20), std::ldexp(1.0, -10)) ==
        doctest::Approx(std::ldexp(1.0, -10)));
  CHECK_THROWS_AS(markov_individual(0.1, 0.0), DistError);
  CHECK_THROWS_AS(markov_individual(-0.1, 0.5), DistError);
}

TEST_CASE("spike family sits in the p1 ~ I/n regime at large n") {
  // The approximation needs n * p1 to dominate h(p1); report-style check at
  // moderate p1.
  for (int n : {16, 20}) {
    for (double p1 : {0.8, 0.9}) {
      KeyDistribution spike = spike_distribution(n, p1, 0);
      double info = eve_information(spike);
      CHECK(std::abs(info - n * p1) / (n * p1) <= 0.10);
    }
  }
}

TEST_CASE("extremal serialization") {
  ExtremalResult r = max_guess_given_vd(3, 0.2);
  std::string j = extremal_to_json(r);
  CHECK(j.find("p1_star") != std::string::npos);
  KpaWitness w = kpa_witness_family(6, 2, 9);
  std::string k = kpa_witness_to_json(w);
  CHECK(k.find("\"seed\":9") != std::string::npos);
}

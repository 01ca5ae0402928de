#pragma once

#include <cstdint>

#include "keyaudit/dist.hpp"

namespace keyaudit {

/// Maximizer of the guessing probability under a single-number constraint,
/// together with the distribution achieving it.
struct ExtremalResult {
  double p1_star;
  KeyDistribution witness;
  double l_exponent;  // -log2(p1_star)
};

/// Key distribution whose guessing probability collapses to 1 once l_prime
/// bits are revealed.
struct KpaWitness {
  KeyDistribution distribution;
  SubsetSpec revealed;
  double p1_before;
  double p1_after;
  int l_prime;
  std::uint64_t seed;
};

inline constexpr std::uint64_t kDefaultKpaSeed = 0x9e3779b97f4a7c15ull;

/// Mass p1 on spike_index, the remainder spread uniformly.
KeyDistribution spike_distribution(int n_bits, double p1,
                                   std::uint32_t spike_index);

/// Entropy in bits of the spike family member with top mass p1.
double spike_entropy(int n_bits, double p1);

/// Largest guessing probability compatible with H(P) >= n - info_bits.
ExtremalResult max_guess_given_information(int n_bits, double info_bits);

/// Largest guessing probability compatible with delta(P, U) <= epsilon.
ExtremalResult max_guess_given_vd(int n_bits, double epsilon);

/// Bits of revealed key needed to drive the guessing probability to 1.
double kpa_break_length(int n_bits, double l);

KpaWitness kpa_witness_family(int n_bits, int l_prime,
                              std::uint64_t seed = kDefaultKpaSeed);

/// Average-to-individual conversion: the individual bound holds except with
/// probability at most `confidence`.
double markov_individual(double epsilon_avg, double confidence);

std::string extremal_to_json(const ExtremalResult& r);
std::string kpa_witness_to_json(const KpaWitness& w);

}  // namespace keyaudit

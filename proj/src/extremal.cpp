#include "keyaudit/extremal.hpp"

#include <cmath>

#include <json.hpp>

#include "keyaudit/rng.hpp"

namespace keyaudit {

namespace {

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

}  // namespace

KeyDistribution spike_distribution(int n_bits, double p1,
                                   std::uint32_t spike_index) {
  if (n_bits < 1 || n_bits > kMaxDenseBits) {
    throw DistError("spike_distribution: n_bits out of range");
  }
  std::uint64_t n = std::uint64_t{1} << n_bits;
  double floor = 1.0 / static_cast<double>(n);
  if (p1 < floor - kStructuralTol || p1 > 1.0 + kStructuralTol) {
    throw DistError("spike_distribution: p1 out of [2^-n, 1]");
  }
  if (spike_index >= n) {
    throw DistError("spike_distribution: spike index out of range");
  }
  double tail = (n > 1) ? (1.0 - p1) / static_cast<double>(n - 1) : 0.0;
  std::vector<KeyDistribution::Entry> support;
  support.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    support.push_back({i, i == spike_index ? p1 : tail});
  }
  return KeyDistribution(n_bits, std::move(support));
}

double spike_entropy(int n_bits, double p1) {
  std::uint64_t n = std::uint64_t{1} << n_bits;
  double h = binary_entropy(p1);
  if (n > 1) {
    h += (1.0 - p1) * std::log2(static_cast<double>(n - 1));
  }
  return h;
}

ExtremalResult max_guess_given_information(int n_bits, double info_bits) {
  if (n_bits < 1 || n_bits > kMaxDenseBits) {
    throw DistError("max_guess_given_information: n_bits out of range");
  }
  if (info_bits < 0.0 || info_bits > static_cast<double>(n_bits)) {
    throw DistError("max_guess_given_information: info_bits out of [0, n]");
  }
  double floor = std::ldexp(1.0, -n_bits);
  double p1;
  if (info_bits <= 0.0) {
    p1 = floor;
  } else if (info_bits >= static_cast<double>(n_bits)) {
    p1 = 1.0;
  } else {
    // spike_entropy is strictly decreasing in p1 on [2^-n, 1]; bisect for
    // spike_entropy(p1) = n - info_bits.
    double target = static_cast<double>(n_bits) - info_bits;
    double lo = floor, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
      double mid = 0.5 * (lo + hi);
      if (spike_entropy(n_bits, mid) > target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    p1 = 0.5 * (lo + hi);
  }
  KeyDistribution witness = spike_distribution(n_bits, p1, 0);
  return {p1, std::move(witness), -std::log2(p1)};
}

ExtremalResult max_guess_given_vd(int n_bits, double epsilon) {
  if (n_bits < 1 || n_bits > kMaxDenseBits) {
    throw DistError("max_guess_given_vd: n_bits out of range");
  }
  double floor = std::ldexp(1.0, -n_bits);
  if (epsilon < 0.0 || epsilon > 1.0 - floor + kStructuralTol) {
    throw DistError("max_guess_given_vd: epsilon out of [0, 1 - 2^-n]");
  }
  double p1 = floor + epsilon;
  KeyDistribution witness = spike_distribution(n_bits, p1, 0);
  return {p1, std::move(witness), -std::log2(p1)};
}

double kpa_break_length(int n_bits, double l) {
  if (n_bits < 1) {
    throw DistError("kpa_break_length: n_bits must be positive");
  }
  if (l < 0.0) {
    throw DistError("kpa_break_length: l must be non-negative");
  }
  return l + std::log2(static_cast<double>(n_bits));
}

KpaWitness kpa_witness_family(int n_bits, int l_prime, std::uint64_t seed) {
  if (n_bits < 1 || n_bits > kMaxBits) {
    throw DistError("kpa_witness_family: n_bits out of range");
  }
  if (l_prime < 1 || l_prime > n_bits || l_prime > kMaxDenseBits) {
    throw DistError("kpa_witness_family: l_prime out of range");
  }
  int rest = n_bits - l_prime;
  std::uint32_t fibers = std::uint32_t{1} << l_prime;
  std::uint32_t rest_mask =
      rest == 0 ? 0u : ((rest == 32) ? ~0u : ((std::uint32_t{1} << rest) - 1u));
  double mass = 1.0 / static_cast<double>(fibers);
  std::vector<KeyDistribution::Entry> support;
  support.reserve(fibers);
  for (std::uint32_t b = 0; b < fibers; ++b) {
    std::uint32_t tail =
        static_cast<std::uint32_t>(splitmix64(seed ^ (b + 1))) & rest_mask;
    support.push_back({(b << rest) | tail, mass});
  }
  KeyDistribution dist(n_bits, std::move(support));

  SubsetSpec revealed;
  for (int j = 0; j < l_prime; ++j) {
    revealed.positions.push_back(j);
  }
  double p1_before = guessing_probability(dist).p1;
  return {std::move(dist), std::move(revealed), p1_before, 1.0, l_prime, seed};
}

double markov_individual(double epsilon_avg, double confidence) {
  if (confidence <= 0.0 || confidence > 1.0) {
    throw DistError("markov_individual: confidence must be in (0, 1]");
  }
  if (epsilon_avg < 0.0) {
    throw DistError("markov_individual: epsilon_avg must be non-negative");
  }
  return epsilon_avg / confidence;
}

std::string extremal_to_json(const ExtremalResult& r) {
  nlohmann::ordered_json j;
  j["p1_star"] = r.p1_star;
  j["l_exponent"] = r.l_exponent;
  j["witness"] = nlohmann::ordered_json::parse(dist_to_json(r.witness));
  return j.dump();
}

std::string kpa_witness_to_json(const KpaWitness& w) {
  nlohmann::ordered_json j;
  j["l_prime"] = w.l_prime;
  j["p1_before"] = w.p1_before;
  j["p1_after"] = w.p1_after;
  j["seed"] = w.seed;
  j["revealed_positions"] = w.revealed.positions;
  j["distribution"] = nlohmann::ordered_json::parse(dist_to_json(w.distribution));
  return j.dump();
}

}  // namespace keyaudit

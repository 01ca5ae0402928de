#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "keyaudit/dist.hpp"

namespace keyaudit {

inline constexpr int kMaxHashBits = 24;

/// Surjective linear map over GF(2) standing in for the ECC+PAC composition.
/// Row i is a bitmask over the m input bits; output bit i is the parity of
/// the masked input.
struct LinearHash {
  int in_bits;   // m
  int out_bits;  // n <= m
  std::vector<std::uint32_t> rows;
  std::uint64_t seed;
  bool toeplitz;

  void validate() const;
  std::uint32_t apply(std::uint32_t x) const;
};

int gf2_row_rank(std::vector<std::uint32_t> rows);

/// Seeded Toeplitz matrix, re-drawn until full row rank (at most 64 tries).
LinearHash random_toeplitz_hash(int m, int n, std::uint64_t seed);

KeyDistribution pushforward(const KeyDistribution& p_x, const LinearHash& hash);

struct PaInvarianceReport {
  double q1;  // guessing probability on the data X
  double p1;  // guessing probability on the key K
  bool p1_geq_q1;
  bool equality;  // within 1e-12
  std::uint32_t argmax_x;
  std::uint32_t argmax_k;
};

PaInvarianceReport pa_invariance_check(const KeyDistribution& p_x,
                                       const LinearHash& hash);

struct ExtractableBits {
  double l;  // -log2 p1
  double r;  // l / n_bits
};

ExtractableBits extractable_bits(const KeyDistribution& p);

std::string hash_to_json(const LinearHash& h);
LinearHash hash_from_json(const std::string& text);

}  // namespace keyaudit

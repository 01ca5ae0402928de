#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace keyaudit {

inline constexpr int kMaxBits = 30;       // hard cap on key length
inline constexpr int kMaxDenseBits = 20;  // full-enumeration operations stop here
inline constexpr double kStructuralTol = 1e-12;
inline constexpr double kNumericTol = 1e-9;

class DistError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Probability distribution over n-bit strings, stored as a sorted sparse
/// support. Indices are the integer value of the bit string with position 0
/// as the most significant bit.
class KeyDistribution {
public:
  struct Entry {
    std::uint32_t index;
    double prob;
  };

  KeyDistribution(int n_bits, std::vector<Entry> support);

  static KeyDistribution uniform(int n_bits);
  static KeyDistribution point_mass(int n_bits, std::uint32_t index);
  static KeyDistribution from_dense(int n_bits, const std::vector<double>& probs);

  int n_bits() const { return n_bits_; }
  std::uint64_t num_strings() const { return std::uint64_t{1} << n_bits_; }
  const std::vector<Entry>& support() const { return support_; }

  double prob(std::uint32_t index) const;
  std::vector<double> dense() const;  // n_bits <= kMaxDenseBits

  /// Value of bit `position` (0 = most significant) in string `index`.
  int bit_at(std::uint32_t index, int position) const {
    return static_cast<int>((index >> (n_bits_ - 1 - position)) & 1u);
  }

private:
  int n_bits_;
  std::vector<Entry> support_;
};

bool approx_equal(const KeyDistribution& p, const KeyDistribution& q,
                  double tol = kStructuralTol);

/// Ordered subset of bit positions, optionally with values for conditioning.
struct SubsetSpec {
  std::vector<int> positions;
  std::optional<std::vector<int>> values;

  void validate(int n_bits) const;
};

struct GuessResult {
  double p1;
  std::uint32_t argmax;  // smallest index attaining the maximum
};

struct SubsetGap {
  double epsilon;    // |p1 of the marginal - 2^{-k}|
  double p1_subset;  // guessing probability of the marginal
};

double shannon_entropy(const KeyDistribution& p);
double variational_distance(const KeyDistribution& p, const KeyDistribution& q);
GuessResult guessing_probability(const KeyDistribution& p);

KeyDistribution marginal(const KeyDistribution& p, const SubsetSpec& subset);
SubsetGap subset_security_gap(const KeyDistribution& p, const SubsetSpec& subset);
KeyDistribution condition_on_revealed_bits(const KeyDistribution& p,
                                           const SubsetSpec& revealed);

/// Information in bits carried by the posterior: n - H(P).
double eve_information(const KeyDistribution& p);

std::string dist_to_json(const KeyDistribution& p);
KeyDistribution dist_from_json(const std::string& text);

}  // namespace keyaudit

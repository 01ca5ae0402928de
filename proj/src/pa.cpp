#include "keyaudit/pa.hpp"

#include <bit>
#include <cmath>
#include <map>

#include <json.hpp>

#include "keyaudit/rng.hpp"

namespace keyaudit {

void LinearHash::validate() const {
  if (in_bits < 1 || in_bits > kMaxHashBits) {
    throw DistError("LinearHash: in_bits out of range");
  }
  if (out_bits < 1 || out_bits > in_bits) {
    throw DistError("LinearHash: out_bits out of range");
  }
  if (rows.size() != static_cast<std::size_t>(out_bits)) {
    throw DistError("LinearHash: row count mismatch");
  }
  std::uint32_t mask = (in_bits == 32) ? ~0u : ((std::uint32_t{1} << in_bits) - 1u);
  for (std::uint32_t r : rows) {
    if (r & ~mask) {
      throw DistError("LinearHash: row uses bits beyond in_bits");
    }
  }
  if (gf2_row_rank(rows) != out_bits) {
    throw DistError("LinearHash: matrix must have full row rank");
  }
}

std::uint32_t LinearHash::apply(std::uint32_t x) const {
  std::uint32_t k = 0;
  for (int i = 0; i < out_bits; ++i) {
    std::uint32_t par = std::popcount(rows[static_cast<std::size_t>(i)] & x) & 1u;
    k |= par << (out_bits - 1 - i);
  }
  return k;
}

int gf2_row_rank(std::vector<std::uint32_t> rows) {
  int rank = 0;
  for (int col = 31; col >= 0 && rank < static_cast<int>(rows.size()); --col) {
    std::uint32_t bit = std::uint32_t{1} << col;
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (rows[static_cast<std::size_t>(r)] & bit) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[static_cast<std::size_t>(rank)],
              rows[static_cast<std::size_t>(pivot)]);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r != rank && (rows[static_cast<std::size_t>(r)] & bit)) {
        rows[static_cast<std::size_t>(r)] ^=
            rows[static_cast<std::size_t>(rank)];
      }
    }
    ++rank;
  }
  return rank;
}

LinearHash random_toeplitz_hash(int m, int n, std::uint64_t seed) {
  if (m < 1 || m > kMaxHashBits || n < 1 || n > m) {
    throw DistError("random_toeplitz_hash: dimensions out of range");
  }
  for (int attempt = 0; attempt < 64; ++attempt) {
    // m + n - 1 diagonal bits; entry (i, j) = t[i - j + m - 1].
    std::vector<int> diag(static_cast<std::size_t>(m + n - 1));
    for (std::size_t d = 0; d < diag.size(); ++d) {
      diag[d] = static_cast<int>(
          splitmix64(seed ^ (0xc0ffee ^ (static_cast<std::uint64_t>(attempt) << 32) ^ d)) & 1u);
    }
    std::vector<std::uint32_t> rows(static_cast<std::size_t>(n), 0u);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        if (diag[static_cast<std::size_t>(i - j + m - 1)]) {
          rows[static_cast<std::size_t>(i)] |= std::uint32_t{1} << (m - 1 - j);
        }
      }
    }
    if (gf2_row_rank(rows) == n) {
      LinearHash h{m, n, std::move(rows), seed, true};
      h.validate();
      return h;
    }
  }
  throw DistError("random_toeplitz_hash: no full-rank draw in 64 attempts");
}

KeyDistribution pushforward(const KeyDistribution& p_x, const LinearHash& hash) {
  hash.validate();
  if (p_x.n_bits() != hash.in_bits) {
    throw DistError("pushforward: dimension mismatch");
  }
  std::map<std::uint32_t, double> acc;
  for (const auto& e : p_x.support()) {
    acc[hash.apply(e.index)] += e.prob;
  }
  std::vector<KeyDistribution::Entry> support;
  support.reserve(acc.size());
  for (const auto& [k, p] : acc) {
    support.push_back({k, p});
  }
  return KeyDistribution(hash.out_bits, std::move(support));
}

PaInvarianceReport pa_invariance_check(const KeyDistribution& p_x,
                                       const LinearHash& hash) {
  GuessResult before = guessing_probability(p_x);
  KeyDistribution p_k = pushforward(p_x, hash);
  GuessResult after = guessing_probability(p_k);
  return {before.p1,
          after.p1,
          after.p1 >= before.p1 - kStructuralTol,
          std::abs(after.p1 - before.p1) <= kStructuralTol,
          before.argmax,
          after.argmax};
}

ExtractableBits extractable_bits(const KeyDistribution& p) {
  double p1 = guessing_probability(p).p1;
  double l = -std::log2(p1);
  return {l, l / static_cast<double>(p.n_bits())};
}

std::string hash_to_json(const LinearHash& h) {
  nlohmann::ordered_json j;
  j["m"] = h.in_bits;
  j["n"] = h.out_bits;
  j["seed"] = h.seed;
  j["toeplitz"] = h.toeplitz;
  j["rows"] = h.rows;
  return j.dump();
}

LinearHash hash_from_json(const std::string& text) {
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    LinearHash h{j.at("m").get<int>(), j.at("n").get<int>(),
                 j.at("rows").get<std::vector<std::uint32_t>>(),
                 j.value("seed", std::uint64_t{0}),
                 j.value("toeplitz", false)};
    h.validate();
    return h;
  } catch (const nlohmann::json::exception& ex) {
    throw DistError(std::string("invalid hash JSON: ") + ex.what());
  }
}

}  // namespace keyaudit

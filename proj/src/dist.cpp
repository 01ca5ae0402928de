#include "keyaudit/dist.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

namespace keyaudit {

namespace {

void check_bits(int n_bits) {
  if (n_bits < 1 || n_bits > kMaxBits) {
    throw DistError("n_bits must be in [1, " + std::to_string(kMaxBits) + "]");
  }
}

void require_dense_scale(int n_bits, const char* op) {
  if (n_bits > kMaxDenseBits) {
    throw DistError(std::string(op) + " requires n_bits <= " +
                    std::to_string(kMaxDenseBits));
  }
}

}  // namespace

KeyDistribution::KeyDistribution(int n_bits, std::vector<Entry> support)
    : n_bits_(n_bits), support_(std::move(support)) {
  check_bits(n_bits);
  std::sort(support_.begin(), support_.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  double sum = 0.0;
  double comp = 0.0;  // Kahan: large supports would break 1e-12 otherwise
  std::uint64_t limit = num_strings();
  std::uint32_t prev = 0;
  bool first = true;
  std::vector<Entry> cleaned;
  cleaned.reserve(support_.size());
  for (const Entry& e : support_) {
    if (e.index >= limit) {
      throw DistError("support index out of range for n_bits");
    }
    if (!first && e.index == prev) {
      throw DistError("duplicate support index");
    }
    if (e.prob < 0.0) {
      throw DistError("negative probability");
    }
    prev = e.index;
    first = false;
    double y = e.prob - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (e.prob > 0.0) {
      cleaned.push_back(e);
    }
  }
  if (std::abs(sum - 1.0) > kStructuralTol) {
    throw DistError("probabilities sum to " + std::to_string(sum) +
                    ", expected 1");
  }
  support_ = std::move(cleaned);
}

KeyDistribution KeyDistribution::uniform(int n_bits) {
  check_bits(n_bits);
  require_dense_scale(n_bits, "uniform");
  std::uint32_t n = std::uint32_t{1} << n_bits;
  double p = 1.0 / static_cast<double>(n);
  std::vector<Entry> support(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    support[i] = {i, p};
  }
  return KeyDistribution(n_bits, std::move(support));
}

KeyDistribution KeyDistribution::point_mass(int n_bits, std::uint32_t index) {
  return KeyDistribution(n_bits, {{index, 1.0}});
}

KeyDistribution KeyDistribution::from_dense(int n_bits,
                                            const std::vector<double>& probs) {
  check_bits(n_bits);
  if (probs.size() != (std::uint64_t{1} << n_bits)) {
    throw DistError("dense vector length does not match n_bits");
  }
  std::vector<Entry> support;
  support.reserve(probs.size());
  for (std::uint32_t i = 0; i < probs.size(); ++i) {
    support.push_back({i, probs[i]});
  }
  return KeyDistribution(n_bits, std::move(support));
}

double KeyDistribution::prob(std::uint32_t index) const {
  auto it = std::lower_bound(
      support_.begin(), support_.end(), index,
      [](const Entry& e, std::uint32_t i) { return e.index < i; });
  if (it != support_.end() && it->index == index) {
    return it->prob;
  }
  return 0.0;
}

std::vector<double> KeyDistribution::dense() const {
  require_dense_scale(n_bits_, "dense");
  std::vector<double> out(num_strings(), 0.0);
  for (const Entry& e : support_) {
    out[e.index] = e.prob;
  }
  return out;
}

bool approx_equal(const KeyDistribution& p, const KeyDistribution& q,
                  double tol) {
  if (p.n_bits() != q.n_bits()) {
    return false;
  }
  auto pi = p.support().begin();
  auto qi = q.support().begin();
  while (pi != p.support().end() || qi != q.support().end()) {
    if (qi == q.support().end() ||
        (pi != p.support().end() && pi->index < qi->index)) {
      if (std::abs(pi->prob) > tol) return false;
      ++pi;
    } else if (pi == p.support().end() || qi->index < pi->index) {
      if (std::abs(qi->prob) > tol) return false;
      ++qi;
    } else {
      if (std::abs(pi->prob - qi->prob) > tol) return false;
      ++pi;
      ++qi;
    }
  }
  return true;
}

void SubsetSpec::validate(int n_bits) const {
  if (positions.empty()) {
    throw DistError("subset must be non-empty");
  }
  int prev = -1;
  for (int pos : positions) {
    if (pos <= prev) {
      throw DistError("subset positions must be strictly increasing");
    }
    if (pos < 0 || pos >= n_bits) {
      throw DistError("subset position out of range");
    }
    prev = pos;
  }
  if (values) {
    if (values->size() != positions.size()) {
      throw DistError("values length must match positions length");
    }
    for (int v : *values) {
      if (v != 0 && v != 1) {
        throw DistError("values must be bits");
      }
    }
  }
}

double shannon_entropy(const KeyDistribution& p) {
  double h = 0.0;
  for (const auto& e : p.support()) {
    if (e.prob > 0.0) {
      h -= e.prob * std::log2(e.prob);
    }
  }
  return std::max(0.0, h);
}

double variational_distance(const KeyDistribution& p,
                            const KeyDistribution& q) {
  if (p.n_bits() != q.n_bits()) {
    throw DistError("variational_distance: dimension mismatch");
  }
  double sum = 0.0;
  auto pi = p.support().begin();
  auto qi = q.support().begin();
  while (pi != p.support().end() || qi != q.support().end()) {
    if (qi == q.support().end() ||
        (pi != p.support().end() && pi->index < qi->index)) {
      sum += std::abs(pi->prob);
      ++pi;
    } else if (pi == p.support().end() || qi->index < pi->index) {
      sum += std::abs(qi->prob);
      ++qi;
    } else {
      sum += std::abs(pi->prob - qi->prob);
      ++pi;
      ++qi;
    }
  }
  return 0.5 * sum;
}

GuessResult guessing_probability(const KeyDistribution& p) {
  double best = 0.0;
  std::uint32_t arg = 0;
  bool found = false;
  for (const auto& e : p.support()) {
    if (e.prob > best) {
      best = e.prob;
      arg = e.index;
      found = true;
    }
  }
  if (!found) {
    // all-zero support cannot happen for a normalized distribution
    throw DistError("empty distribution");
  }
  return {best, arg};
}

KeyDistribution marginal(const KeyDistribution& p, const SubsetSpec& subset) {
  subset.validate(p.n_bits());
  int k = static_cast<int>(subset.positions.size());
  std::map<std::uint32_t, double> acc;
  for (const auto& e : p.support()) {
    std::uint32_t key = 0;
    for (int j = 0; j < k; ++j) {
      key = (key << 1) | static_cast<std::uint32_t>(
                             p.bit_at(e.index, subset.positions[j]));
    }
    acc[key] += e.prob;
  }
  std::vector<KeyDistribution::Entry> support;
  support.reserve(acc.size());
  for (const auto& [idx, pr] : acc) {
    support.push_back({idx, pr});
  }
  return KeyDistribution(k, std::move(support));
}

SubsetGap subset_security_gap(const KeyDistribution& p,
                              const SubsetSpec& subset) {
  if (subset.values) {
    throw DistError("subset_security_gap takes a pure marginal subset");
  }
  KeyDistribution m = marginal(p, subset);
  double p1 = guessing_probability(m).p1;
  double baseline = std::ldexp(1.0, -static_cast<int>(subset.positions.size()));
  return {std::abs(p1 - baseline), p1};
}

KeyDistribution condition_on_revealed_bits(const KeyDistribution& p,
                                           const SubsetSpec& revealed) {
  revealed.validate(p.n_bits());
  if (!revealed.values) {
    throw DistError("condition_on_revealed_bits requires values");
  }
  std::vector<KeyDistribution::Entry> kept;
  double mass = 0.0;
  for (const auto& e : p.support()) {
    bool match = true;
    for (std::size_t j = 0; j < revealed.positions.size(); ++j) {
      if (p.bit_at(e.index, revealed.positions[j]) != (*revealed.values)[j]) {
        match = false;
        break;
      }
    }
    if (match) {
      kept.push_back(e);
      mass += e.prob;
    }
  }
  if (mass <= kStructuralTol) {
    throw DistError("revealed values have zero probability");
  }
  for (auto& e : kept) {
    e.prob /= mass;
  }
  return KeyDistribution(p.n_bits(), std::move(kept));
}

double eve_information(const KeyDistribution& p) {
  return static_cast<double>(p.n_bits()) - shannon_entropy(p);
}

std::string dist_to_json(const KeyDistribution& p) {
  nlohmann::ordered_json j;
  j["n_bits"] = p.n_bits();
  auto& probs = j["probs"] = nlohmann::json::array();
  for (const auto& e : p.support()) {
    probs.push_back({e.index, e.prob});
  }
  return j.dump();
}

KeyDistribution dist_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw DistError(std::string("invalid distribution JSON: ") + ex.what());
  }
  if (!j.contains("n_bits") || !j.contains("probs")) {
    throw DistError("distribution JSON needs n_bits and probs");
  }
  std::vector<KeyDistribution::Entry> support;
  for (const auto& pair : j["probs"]) {
    if (!pair.is_array() || pair.size() != 2) {
      throw DistError("probs entries must be [index, prob] pairs");
    }
    support.push_back({pair[0].get<std::uint32_t>(), pair[1].get<double>()});
  }
  return KeyDistribution(j["n_bits"].get<int>(), std::move(support));
}

}  // namespace keyaudit

// End-to-end acceptance runner: one PASS/FAIL line per criterion, nonzero
// exit if any fail. Criteria mirror the library's contract: extremal solvers
// against randomized searches, quantum identities against brute force,
// simulator statistics against closed forms, and CLI determinism against a
// pinned golden file.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "keyaudit/extremal.hpp"
#include "keyaudit/loss_sim.hpp"
#include "keyaudit/pa.hpp"
#include "keyaudit/quantum.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace keyaudit;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok,
            const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << number << ": " << name;
  if (!ok && !detail.empty()) {
    std::cout << " (" << detail << ")";
  }
  std::cout << "\n";
  if (!ok) ++g_failures;
}

bool criterion1_info_extremal() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int n : {2, 3, 4}) {
    if (std::abs(max_guess_given_information(n, 0.0).p1_star -
                 std::ldexp(1.0, -n)) > 1e-15) {
      return false;
    }
    if (std::abs(max_guess_given_information(n, static_cast<double>(n)).p1_star -
                 1.0) > 1e-15) {
      return false;
    }
    for (int trial = 0; trial < 20; ++trial) {
      double info = unit(rng) * n;
      double solver = max_guess_given_information(n, info).p1_star;
      double oracle = oracles::max_p1_under_entropy(
          n, static_cast<double>(n) - info, 300, rng);
      if (oracle > solver + 1e-6 || oracle < solver - 1e-6) {
        return false;
      }
    }
  }
  return true;
}

bool criterion2_vd_extremal() {
  std::mt19937_64 rng(1002);
  for (int n : {2, 3, 4}) {
    std::uniform_real_distribution<double> draw(0.0, 1.0 - std::ldexp(1.0, -n));
    for (int trial = 0; trial < 20; ++trial) {
      double eps = draw(rng);
      double solver = max_guess_given_vd(n, eps).p1_star;
      if (std::abs(solver - (std::ldexp(1.0, -n) + eps)) > 1e-12) {
        return false;
      }
      double oracle = oracles::max_p1_under_vd(n, eps, 300, rng);
      if (oracle > solver + 1e-6 || oracle < solver - 1e-6) {
        return false;
      }
    }
  }
  return true;
}

bool criterion3_kpa_witness() {
  for (auto [n, lp] : {std::pair{16, 7}, std::pair{20, 9}}) {
    KpaWitness w = kpa_witness_family(n, lp);
    if (w.p1_before != std::ldexp(1.0, -lp)) {
      return false;
    }
    int rest = n - lp;
    for (const auto& entry : w.distribution.support()) {
      std::vector<int> values;
      for (int j = 0; j < lp; ++j) {
        values.push_back(static_cast<int>((entry.index >> (n - 1 - j)) & 1u));
      }
      (void)rest;
      KeyDistribution posterior = condition_on_revealed_bits(
          w.distribution, SubsetSpec{w.revealed.positions, values});
      if (guessing_probability(posterior).p1 < 1.0 - 1e-9) {
        return false;
      }
    }
  }
  return true;
}

bool criterion4_data_processing() {
  std::mt19937_64 rng(1004);
  for (int trial = 0; trial < 1000; ++trial) {
    int dim = 2 + static_cast<int>(rng() % 7);
    DensityOperator a = testutil::random_density(dim, rng);
    DensityOperator b = testutil::random_density(dim, rng);
    Povm povm = testutil::random_povm(dim, 2 + static_cast<int>(rng() % 3), rng);
    auto pa = measure(a, povm);
    auto pb = measure(b, povm);
    double vd = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
      vd += std::abs(pa[i] - pb[i]);
    }
    if (0.5 * vd > trace_distance(a, b) + 1e-9) {
      return false;
    }
  }
  return true;
}

bool criterion5_blockwise_distance() {
  std::mt19937_64 rng(1005);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 2 + rng() % 7;            // block count
    int dim = 2 + static_cast<int>(rng() % 4);  // probe dimension
    while (n * static_cast<std::size_t>(dim) > 64) {
      n = 2 + rng() % 7;
    }
    std::vector<double> w(n);
    double sum = 0.0;
    std::exponential_distribution<double> exp_draw(1.0);
    for (double& x : w) {
      x = exp_draw(rng);
      sum += x;
    }
    CqEnsemble e;
    for (std::size_t k = 0; k < n; ++k) {
      e.weights.push_back(w[k] / sum);
      e.states.push_back(testutil::random_density(dim, rng));
    }
    auto big = static_cast<Eigen::Index>(n) * dim;
    Matrix rho_ke = Matrix::Zero(big, big);
    Matrix avg = Matrix::Zero(dim, dim);
    for (std::size_t k = 0; k < n; ++k) {
      rho_ke.block(static_cast<Eigen::Index>(k) * dim,
                   static_cast<Eigen::Index>(k) * dim, dim, dim) =
          e.weights[k] * e.states[k].matrix();
      avg += e.weights[k] * e.states[k].matrix();
    }
    Matrix product = Matrix::Zero(big, big);
    for (std::size_t k = 0; k < n; ++k) {
      product.block(static_cast<Eigen::Index>(k) * dim,
                    static_cast<Eigen::Index>(k) * dim, dim, dim) =
          (1.0 / static_cast<double>(n)) * avg;
    }
    if (std::abs(cq_distance(e) - 0.5 * trace_norm(rho_ke - product)) > 1e-9) {
      return false;
    }
  }
  return true;
}

bool criterion6_couplings() {
  std::mt19937_64 rng(1006);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 1 + static_cast<int>(rng() % 6);
    KeyDistribution p = testutil::random_dist(n, rng);
    KeyDistribution q = testutil::random_dist(n, rng);
    double delta = variational_distance(p, q);
    double maximal = maximal_coupling(p, q).mismatch_probability();
    double indep = independent_coupling(p, q).mismatch_probability();
    if (std::abs(maximal - delta) > 1e-12 || indep < maximal - 1e-12) {
      return false;
    }
  }
  return true;
}

bool criterion7_pa_invariance() {
  std::mt19937_64 rng(1007);
  for (int m = 1; m <= 4; ++m) {
    std::uint32_t cells = std::uint32_t{1} << m;
    for (int n = 1; n <= m; ++n) {
      // Every ordered full-rank row tuple, found by counting through all
      // mask tuples.
      std::uint64_t total = std::uint64_t{1} << (m * n);
      for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<std::uint32_t> rows(static_cast<std::size_t>(n));
        std::uint64_t c = code;
        for (int i = 0; i < n; ++i) {
          rows[static_cast<std::size_t>(i)] =
              static_cast<std::uint32_t>(c & (cells - 1));
          c >>= m;
        }
        if (gf2_row_rank(rows) != n) {
          continue;
        }
        LinearHash h{m, n, rows, 0, false};
        for (int trial = 0; trial < 100; ++trial) {
          KeyDistribution p = testutil::random_dist(m, rng);
          PaInvarianceReport r = pa_invariance_check(p, h);
          if (!r.p1_geq_q1) {
            return false;
          }
          // Bijective hashes only relabel: exact equality.
          if (n == m && !r.equality) {
            return false;
          }
        }
        // Point masses stay point masses under any known hash.
        PaInvarianceReport point = pa_invariance_check(
            KeyDistribution::point_mass(m, static_cast<std::uint32_t>(code) &
                                               (cells - 1)),
            h);
        if (!point.equality || point.p1 != 1.0) {
          return false;
        }
      }
    }
  }
  return true;
}

bool criterion8_b92_breach(std::string& detail) {
  ProtocolConfig c;
  c.protocol = Protocol::B92;
  c.overlap_s = 0.5;
  c.n_pulses = 100000;
  c.seed = 90;
  if (breach_threshold(0.5, c) != 0.5) {
    detail = "threshold";
    return false;
  }

  auto rate_sigma = [&](double rate) {
    return std::sqrt(rate * (1.0 - rate) /
                     static_cast<double>(c.n_pulses));
  };

  c.transmittance_eta = 0.4;
  RunTallies honest = run_protocol(c, AttackStrategy{AttackKind::none});
  RunTallies attacked = run_protocol(c, AttackStrategy{AttackKind::usd_resend});
  if (attacked.qber != 0.0 || attacked.eve_known_fraction != 1.0) {
    detail = "qber/eve fraction at eta=0.4";
    return false;
  }
  double sigma = std::sqrt(rate_sigma(honest.detection_rate) *
                               rate_sigma(honest.detection_rate) +
                           rate_sigma(attacked.detection_rate) *
                               rate_sigma(attacked.detection_rate));
  if (attacked.detection_rate < honest.detection_rate - 3.0 * sigma) {
    detail = "rate deficit below threshold";
    return false;
  }

  c.transmittance_eta = 0.55;
  RunTallies honest_hi = run_protocol(c, AttackStrategy{AttackKind::none});
  RunTallies attacked_hi = run_protocol(c, AttackStrategy{AttackKind::usd_resend});
  double sigma_hi = std::sqrt(rate_sigma(honest_hi.detection_rate) *
                                  rate_sigma(honest_hi.detection_rate) +
                              rate_sigma(attacked_hi.detection_rate) *
                                  rate_sigma(attacked_hi.detection_rate));
  if (honest_hi.detection_rate - attacked_hi.detection_rate < 3.0 * sigma_hi) {
    detail = "no detectable deficit above threshold";
    return false;
  }
  return true;
}

bool criterion9_bb84_sanity() {
  ProtocolConfig c;
  c.protocol = Protocol::BB84;
  c.transmittance_eta = 1.0;
  c.n_pulses = 100000;
  c.seed = 91;
  RunTallies t = run_protocol(c, AttackStrategy{AttackKind::intercept_resend});
  double sigma =
      std::sqrt(0.25 * 0.75 / static_cast<double>(t.sifted_bits));
  return std::abs(t.qber - 0.25) <= 3.0 * sigma;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return "<unreadable: " + path + ">";
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool run_cli(const std::string& args, const std::string& out_path) {
  std::string cmd = std::string(KA_CLI_PATH) + " " + args + " --output " +
                    out_path + " >/dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

bool criterion10_cli_determinism(std::string& detail) {
  const std::string data = KA_DATA_DIR;
  struct Invocation {
    std::string name;
    std::string args;
  };
  std::vector<Invocation> calls = {
      {"criteria", "criteria --input " + data + "/demo/dist.json"},
      {"audit", "audit --input " + data + "/demo/claim.json"},
      {"simulate",
       "simulate --input " + data + "/demo/config.json --attack " + data +
           "/demo/attack.json"},
      {"simulate-sweep-csv",
       "simulate --input " + data + "/demo/config.json --attack " + data +
           "/demo/attack.json --sweep " + data +
           "/demo/sweep.json --format csv"},
      {"report", "report --input " + data + "/demo/instance.json"},
      {"report-md",
       "report --input " + data + "/demo/instance.json --format md"},
  };
  for (const auto& call : calls) {
    std::string a = "acc_" + call.name + "_a.out";
    std::string b = "acc_" + call.name + "_b.out";
    if (!run_cli(call.args, a) || !run_cli(call.args, b)) {
      detail = call.name + " invocation failed";
      return false;
    }
    if (read_file(a) != read_file(b)) {
      detail = call.name + " outputs differ between runs";
      return false;
    }
  }
  std::string golden = read_file(data + "/golden/report.md");
  std::string produced = read_file("acc_report-md_a.out");
  if (golden != produced) {
    detail = "table report does not match the golden file";
    return false;
  }
  return true;
}

}  // namespace

int main() {
  std::string detail;
  report(1, "entropy-constrained extremal matches randomized search",
         criterion1_info_extremal());
  report(2, "distance-constrained extremal matches randomized search",
         criterion2_vd_extremal());
  report(3, "break family collapses on every fiber", criterion3_kpa_witness());
  report(4, "measured distance never exceeds trace distance",
         criterion4_data_processing());
  report(5, "blockwise cq distance equals the tensor construction",
         criterion5_blockwise_distance());
  report(6, "maximal coupling achieves the variational distance",
         criterion6_couplings());
  report(7, "known hashes never reduce the guessing probability",
         criterion7_pa_invariance());
  detail.clear();
  report(8, "B92 loss-breach threshold and invisibility",
         criterion8_b92_breach(detail), detail);
  report(9, "BB84 intercept-resend shows 25 percent errors",
         criterion9_bb84_sanity());
  detail.clear();
  report(10, "CLI runs are byte-identical and match the golden report",
         criterion10_cli_determinism(detail), detail);

  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}

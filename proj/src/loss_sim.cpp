#include "keyaudit/loss_sim.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "keyaudit/quantum.hpp"
#include "keyaudit/rng.hpp"

namespace keyaudit {

namespace {

class SimError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

int sample(CounterRng& rng, const std::vector<double>& probs) {
  double u = rng.next_double();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) {
      return static_cast<int>(i);
    }
  }
  return static_cast<int>(probs.size()) - 1;
}

/// The standard B92 receiver: project onto the complement of the wrong
/// state, each branch attempted half the time. Zero misidentification.
Povm b92_receiver(double s) {
  auto [psi0, psi1] = signal_pair(s);
  Vector perp1(2), perp0(2);
  perp1 << psi1(1).real(), -psi1(0).real();
  perp0 << psi0(1).real(), -psi0(0).real();
  perp1.normalize();
  perp0.normalize();
  Matrix e0 = 0.5 * (perp1 * perp1.adjoint());
  Matrix e1 = 0.5 * (perp0 * perp0.adjoint());
  Matrix inc = Matrix::Identity(2, 2) - e0 - e1;
  return Povm({e0, e1, inc});
}

struct B92Tables {
  std::vector<double> bob[2];  // receiver outcome probs per signal state
  std::vector<double> usd[2];  // USD outcome probs per signal state
};

B92Tables b92_tables(double s) {
  auto [psi0, psi1] = signal_pair(s);
  DensityOperator rho0 = DensityOperator::pure(psi0);
  DensityOperator rho1 = DensityOperator::pure(psi1);
  Povm bob = b92_receiver(s);
  auto [usd, usd_success] = usd_povm(s);
  (void)usd_success;
  B92Tables t;
  t.bob[0] = measure(rho0, bob);
  t.bob[1] = measure(rho1, bob);
  t.usd[0] = measure(rho0, usd);
  t.usd[1] = measure(rho1, usd);
  return t;
}

// BB84 signal states indexed basis*2 + bit; outcome probs of a projective
// measurement in each basis.
struct Bb84Tables {
  std::vector<double> prob[4][2];  // [state][measure basis] -> {p0, p1}
};

Bb84Tables bb84_tables() {
  const double r = 1.0 / std::sqrt(2.0);
  Vector states[4] = {Vector(2), Vector(2), Vector(2), Vector(2)};
  states[0] << 1, 0;
  states[1] << 0, 1;
  states[2] << r, r;
  states[3] << r, -r;
  Povm z({(states[0] * states[0].adjoint()).eval(),
          (states[1] * states[1].adjoint()).eval()});
  Povm x({(states[2] * states[2].adjoint()).eval(),
          (states[3] * states[3].adjoint()).eval()});
  Bb84Tables t;
  for (int sidx = 0; sidx < 4; ++sidx) {
    DensityOperator rho = DensityOperator::pure(states[sidx]);
    t.prob[sidx][0] = measure(rho, z);
    t.prob[sidx][1] = measure(rho, x);
  }
  return t;
}

struct PulseResult {
  bool detected = false;
  bool sifted = false;
  int alice_bit = 0;
  int bob_bit = 0;
  bool eve_knows_sifted_bit = false;
  bool eve_knows_at_all = false;
};

void tally(RunTallies& t, const PulseResult& r) {
  ++t.pulses_sent;
  if (r.eve_knows_at_all) {
    ++t.eve_known_sent;
  }
  if (r.detected) {
    ++t.pulses_detected;
  }
  if (r.sifted) {
    ++t.sifted_bits;
    t.joint_ab[r.alice_bit * 2 + r.bob_bit] += 1;
    if (r.bob_bit != r.alice_bit) {
      ++t.error_bits;
    }
    if (r.eve_knows_sifted_bit) {
      ++t.eve_known_sifted;
    }
  }
}

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

}  // namespace

std::vector<std::string> ProtocolConfig::validate() const {
  std::vector<std::string> warnings;
  if (overlap_s < 0.0 || overlap_s >= 1.0) {
    throw SimError("config: overlap_s must be in [0, 1)");
  }
  if (transmittance_eta <= 0.0 || transmittance_eta > 1.0) {
    throw SimError("config: transmittance_eta must be in (0, 1]");
  }
  if (detector_efficiency <= 0.0 || detector_efficiency > 1.0) {
    throw SimError("config: detector_efficiency must be in (0, 1]");
  }
  if (dark_count_prob < 0.0 || dark_count_prob >= 1.0) {
    throw SimError("config: dark_count_prob must be in [0, 1)");
  }
  if (pre_detection_success <= 0.0 || pre_detection_success > 1.0) {
    throw SimError("config: pre_detection_success must be in (0, 1]");
  }
  if (n_pulses < 1) {
    throw SimError("config: n_pulses must be >= 1");
  }
  if (pre_detection_success > transmittance_eta &&
      pre_detection_success < 1.0) {
    warnings.push_back(
        "pre_detection_success exceeds transmittance_eta; the pre-detection "
        "success probability is itself limited by the loss");
  }
  return warnings;
}

double breach_threshold(double overlap_s, const ProtocolConfig& config) {
  if (config.protocol != Protocol::B92) {
    throw SimError("breach_threshold is defined for B92 configs");
  }
  if (overlap_s < 0.0 || overlap_s >= 1.0) {
    throw SimError("breach_threshold: overlap_s must be in [0, 1)");
  }
  // The USD-resend attack succeeds with probability 1 - s and resends over a
  // lossless line; it matches the honest conclusive rate whenever eta <= 1-s.
  return 1.0 - overlap_s;
}

double cloning_success(double overlap_s) {
  if (overlap_s < 0.0 || overlap_s > 1.0) {
    throw SimError("cloning_success: overlap_s must be in [0, 1]");
  }
  return 1.0 / (1.0 + overlap_s);
}

RunTallies run_protocol(const ProtocolConfig& config,
                        const AttackStrategy& attack) {
  config.validate();
  if (config.protocol == Protocol::BB84 &&
      (attack.kind == AttackKind::usd_resend ||
       attack.kind == AttackKind::cloning_resend)) {
    throw SimError("usd_resend and cloning_resend apply to B92 only");
  }

  const double honest_survival = config.transmittance_eta *
                                 config.detector_efficiency *
                                 config.pre_detection_success;
  // Eve's line is lossless: only the receiver-side factors remain.
  const double eve_survival =
      config.detector_efficiency * config.pre_detection_success;
  const double dark = config.dark_count_prob;
  const double clone_p = cloning_success(config.overlap_s);

  RunTallies tallies;

  if (config.protocol == Protocol::B92) {
    B92Tables tab = b92_tables(config.overlap_s);

    auto bob_side = [&](CounterRng& rng, PulseResult& r, int sent_state,
                        double survival) {
      // Conclusive receiver click, else a possible dark count.
      if (rng.bernoulli(survival)) {
        int outcome = sample(rng, tab.bob[sent_state]);
        if (outcome < 2) {
          r.detected = true;
          r.sifted = true;
          r.bob_bit = outcome;
          return;
        }
      }
      if (dark > 0.0 && rng.bernoulli(dark)) {
        r.detected = true;
        r.sifted = true;
        r.bob_bit = rng.bit();
        r.eve_knows_sifted_bit = false;
      }
    };
    auto dark_only = [&](CounterRng& rng, PulseResult& r) {
      if (dark > 0.0 && rng.bernoulli(dark)) {
        r.detected = true;
        r.sifted = true;
        r.bob_bit = rng.bit();
      }
    };

    for (std::uint64_t i = 0; i < config.n_pulses; ++i) {
      CounterRng rng(config.seed, i);
      PulseResult r;
      r.alice_bit = rng.bit();
      switch (attack.kind) {
        case AttackKind::none:
          bob_side(rng, r, r.alice_bit, honest_survival);
          break;
        case AttackKind::usd_resend: {
          int eve_outcome = sample(rng, tab.usd[r.alice_bit]);
          if (eve_outcome < 2) {
            // Unambiguous identification; resend the exact state.
            r.eve_knows_at_all = true;
            bob_side(rng, r, r.alice_bit, eve_survival);
            if (r.sifted) r.eve_knows_sifted_bit = true;
          } else {
            dark_only(rng, r);  // vacuum covers the failure
          }
          break;
        }
        case AttackKind::cloning_resend: {
          if (rng.bernoulli(clone_p)) {
            // Exact clone: one copy to Bob, USD on the kept copy.
            int eve_outcome = sample(rng, tab.usd[r.alice_bit]);
            bool knows = eve_outcome < 2;
            r.eve_knows_at_all = knows;
            bob_side(rng, r, r.alice_bit, eve_survival);
            if (r.sifted) r.eve_knows_sifted_bit = knows;
          } else {
            dark_only(rng, r);
          }
          break;
        }
        case AttackKind::intercept_resend: {
          int eve_outcome = sample(rng, tab.bob[r.alice_bit]);
          if (eve_outcome < 2) {
            r.eve_knows_at_all = true;
            bob_side(rng, r, r.alice_bit, eve_survival);
            if (r.sifted) r.eve_knows_sifted_bit = true;
          } else {
            int resend = rng.bit();
            bob_side(rng, r, resend, eve_survival);
          }
          break;
        }
      }
      tally(tallies, r);
    }
  } else {
    Bb84Tables tab = bb84_tables();

    for (std::uint64_t i = 0; i < config.n_pulses; ++i) {
      CounterRng rng(config.seed, i);
      PulseResult r;
      r.alice_bit = rng.bit();
      int alice_basis = rng.bit();
      int bob_basis = rng.bit();
      int state = alice_basis * 2 + r.alice_bit;

      bool arrived = false;
      int arriving_state = state;
      if (attack.kind == AttackKind::intercept_resend) {
        int eve_basis = rng.bit();
        int eve_result = sample(rng, tab.prob[state][eve_basis]);
        r.eve_knows_at_all = (eve_basis == alice_basis);
        arriving_state = eve_basis * 2 + eve_result;
        arrived = rng.bernoulli(eve_survival);
      } else {
        arrived = rng.bernoulli(honest_survival);
      }

      if (arrived) {
        r.detected = true;
        r.bob_bit = sample(rng, tab.prob[arriving_state][bob_basis]);
      } else if (dark > 0.0 && rng.bernoulli(dark)) {
        r.detected = true;
        r.bob_bit = rng.bit();
        r.eve_knows_at_all = false;
      }
      if (r.detected && bob_basis == alice_basis) {
        r.sifted = true;
        r.eve_knows_sifted_bit = r.eve_knows_at_all;
      }
      tally(tallies, r);
    }
  }

  tallies.detection_rate = static_cast<double>(tallies.pulses_detected) /
                           static_cast<double>(tallies.pulses_sent);
  if (tallies.sifted_bits > 0) {
    tallies.qber = static_cast<double>(tallies.error_bits) /
                   static_cast<double>(tallies.sifted_bits);
    tallies.eve_known_fraction =
        static_cast<double>(tallies.eve_known_sifted) /
        static_cast<double>(tallies.sifted_bits);
    RateReport rates = perceived_vs_real_rates(tallies);
    tallies.perceived_rate = rates.perceived;
    tallies.real_rate_exponent = rates.real_exponent;
  }
  return tallies;
}

std::vector<RunTallies> loss_sweep(const ProtocolConfig& config,
                                   const AttackStrategy& attack,
                                   const std::vector<double>& eta_grid) {
  std::vector<RunTallies> out;
  out.reserve(eta_grid.size());
  for (std::size_t i = 0; i < eta_grid.size(); ++i) {
    ProtocolConfig point = config;
    point.transmittance_eta = eta_grid[i];
    // Counter-based streams decorrelate adjacent seeds; offsetting keeps a
    // singleton sweep identical to a direct run.
    point.seed = config.seed + i;
    try {
      out.push_back(run_protocol(point, attack));
    } catch (const std::exception& ex) {
      throw SimError("sweep point " + std::to_string(i) + ": " + ex.what());
    }
  }
  return out;
}

RateReport perceived_vs_real_rates(const RunTallies& t) {
  if (t.sifted_bits == 0) {
    throw SimError("perceived_vs_real_rates: no sifted bits");
  }
  double n = static_cast<double>(t.sifted_bits);
  // H(A|B) from the empirical sifted joint table.
  double h_ab = 0.0;
  for (int b = 0; b < 2; ++b) {
    double nb = static_cast<double>(t.joint_ab[0 * 2 + b] + t.joint_ab[1 * 2 + b]);
    if (nb > 0.0) {
      double pa = static_cast<double>(t.joint_ab[0 * 2 + b]) / nb;
      h_ab += (nb / n) * binary_entropy(pa);
    }
  }
  // Naive H(A|E): Eve's known fraction taken over all pulses sent, not
  // conditioned on which pulses survived the channel.
  double f_sent = static_cast<double>(t.eve_known_sent) /
                  static_cast<double>(t.pulses_sent);
  double h_ae = 1.0 - f_sent;

  double f_sifted = static_cast<double>(t.eve_known_sifted) / n;
  double per_bit_p1 = f_sifted + (1.0 - f_sifted) * 0.5;

  RateReport r;
  r.h_a_given_b = h_ab;
  r.h_a_given_e = h_ae;
  r.perceived = std::max(0.0, h_ae - h_ab);
  r.per_bit_p1 = per_bit_p1;
  r.real_exponent = -std::log2(per_bit_p1) + 0.0;  // +0.0 normalizes -0.0
  return r;
}

std::string protocol_name(Protocol p) {
  return p == Protocol::B92 ? "B92" : "BB84";
}

std::string attack_name(AttackKind k) {
  switch (k) {
    case AttackKind::none:
      return "none";
    case AttackKind::intercept_resend:
      return "intercept_resend";
    case AttackKind::usd_resend:
      return "usd_resend";
    case AttackKind::cloning_resend:
      return "cloning_resend";
  }
  return "none";
}

std::string config_to_json(const ProtocolConfig& c) {
  nlohmann::ordered_json j;
  j["protocol"] = protocol_name(c.protocol);
  j["overlap_s"] = c.overlap_s;
  j["transmittance_eta"] = c.transmittance_eta;
  j["detector_efficiency"] = c.detector_efficiency;
  j["dark_count_prob"] = c.dark_count_prob;
  j["pre_detection_success"] = c.pre_detection_success;
  j["n_pulses"] = c.n_pulses;
  j["seed"] = c.seed;
  return j.dump();
}

ProtocolConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw SimError(std::string("invalid config JSON: ") + ex.what());
  }
  ProtocolConfig c;
  std::string proto = j.value("protocol", "B92");
  if (proto == "B92") {
    c.protocol = Protocol::B92;
  } else if (proto == "BB84") {
    c.protocol = Protocol::BB84;
  } else {
    throw SimError("config: protocol must be B92 or BB84");
  }
  c.overlap_s = j.value("overlap_s", c.overlap_s);
  c.transmittance_eta = j.value("transmittance_eta", c.transmittance_eta);
  c.detector_efficiency = j.value("detector_efficiency", c.detector_efficiency);
  c.dark_count_prob = j.value("dark_count_prob", c.dark_count_prob);
  c.pre_detection_success =
      j.value("pre_detection_success", c.pre_detection_success);
  c.n_pulses = j.value("n_pulses", c.n_pulses);
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

std::string attack_to_json(const AttackStrategy& a) {
  nlohmann::ordered_json j;
  j["kind"] = attack_name(a.kind);
  j["parameters"] = nlohmann::json::object();
  return j.dump();
}

AttackStrategy attack_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw SimError(std::string("invalid attack JSON: ") + ex.what());
  }
  std::string kind = j.value("kind", "none");
  AttackStrategy a;
  if (kind == "none") {
    a.kind = AttackKind::none;
  } else if (kind == "intercept_resend") {
    a.kind = AttackKind::intercept_resend;
  } else if (kind == "usd_resend") {
    a.kind = AttackKind::usd_resend;
  } else if (kind == "cloning_resend") {
    a.kind = AttackKind::cloning_resend;
  } else {
    throw SimError("attack: unknown kind " + kind);
  }
  return a;
}

std::string tallies_to_json(const RunTallies& t) {
  nlohmann::ordered_json j;
  j["pulses_sent"] = t.pulses_sent;
  j["pulses_detected"] = t.pulses_detected;
  j["sifted_bits"] = t.sifted_bits;
  j["error_bits"] = t.error_bits;
  j["eve_known_sifted"] = t.eve_known_sifted;
  j["eve_known_sent"] = t.eve_known_sent;
  j["joint_ab"] = {t.joint_ab[0], t.joint_ab[1], t.joint_ab[2], t.joint_ab[3]};
  j["detection_rate"] = t.detection_rate;
  j["qber"] = t.qber;
  j["eve_known_fraction"] = t.eve_known_fraction;
  j["perceived_rate"] = t.perceived_rate;
  j["real_rate_exponent"] = t.real_rate_exponent;
  return j.dump();
}

namespace {

std::string num(double v) { return nlohmann::json(v).dump(); }

}  // namespace

std::string tallies_csv_header() {
  return "protocol,attack,overlap_s,transmittance_eta,detector_efficiency,"
         "dark_count_prob,pre_detection_success,n_pulses,seed,pulses_detected,"
         "sifted_bits,error_bits,detection_rate,qber,eve_known_fraction,"
         "perceived_rate,real_rate_exponent";
}

std::string tallies_csv_row(const ProtocolConfig& c, const AttackStrategy& a,
                            const RunTallies& t) {
  std::ostringstream out;
  out << protocol_name(c.protocol) << ',' << attack_name(a.kind) << ','
      << num(c.overlap_s) << ',' << num(c.transmittance_eta) << ','
      << num(c.detector_efficiency) << ',' << num(c.dark_count_prob) << ','
      << num(c.pre_detection_success) << ',' << c.n_pulses << ',' << c.seed
      << ',' << t.pulses_detected << ',' << t.sifted_bits << ','
      << t.error_bits << ',' << num(t.detection_rate) << ',' << num(t.qber)
      << ',' << num(t.eve_known_fraction) << ',' << num(t.perceived_rate)
      << ',' << num(t.real_rate_exponent);
  return out.str();
}

}  // namespace keyaudit

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "keyaudit/dist.hpp"

namespace keyaudit {

enum class Protocol { B92, BB84 };

struct ProtocolConfig {
  Protocol protocol = Protocol::B92;
  double overlap_s = 0.5;  // B92 signal overlap; BB84 bases are fixed
  double transmittance_eta = 1.0;
  double detector_efficiency = 1.0;
  double dark_count_prob = 0.0;
  double pre_detection_success = 1.0;
  std::uint64_t n_pulses = 100000;
  std::uint64_t seed = 1;

  /// Throws on hard violations; returns soft warnings.
  std::vector<std::string> validate() const;
};

enum class AttackKind { none, intercept_resend, usd_resend, cloning_resend };

struct AttackStrategy {
  AttackKind kind = AttackKind::none;
};

struct RunTallies {
  std::uint64_t pulses_sent = 0;
  std::uint64_t pulses_detected = 0;
  std::uint64_t sifted_bits = 0;
  std::uint64_t error_bits = 0;
  std::uint64_t eve_known_sifted = 0;  // sifted bits Eve knows with certainty
  std::uint64_t eve_known_sent = 0;    // over all pulses, detected or not
  std::uint64_t joint_ab[4] = {0, 0, 0, 0};  // sifted counts, index a*2 + b

  double qber = 0.0;
  double detection_rate = 0.0;
  double eve_known_fraction = 0.0;
  double perceived_rate = 0.0;
  double real_rate_exponent = 0.0;
};

struct RateReport {
  double h_a_given_b;       // empirical, over sifted bits
  double h_a_given_e;       // naive: not conditioned on which pulses survive
  double perceived;         // max(0, H(A|E) - H(A|B))
  double real_exponent;     // -log2 of Eve's per-sifted-bit guessing probability
  double per_bit_p1;
};

RunTallies run_protocol(const ProtocolConfig& config,
                        const AttackStrategy& attack);

/// Transmittance below which the USD-resend attack fully covers its losses.
double breach_threshold(double overlap_s, const ProtocolConfig& config);

/// Maximal success probability of probabilistic exact cloning of two
/// equiprobable pure states with overlap s.
double cloning_success(double overlap_s);

std::vector<RunTallies> loss_sweep(const ProtocolConfig& config,
                                   const AttackStrategy& attack,
                                   const std::vector<double>& eta_grid);

RateReport perceived_vs_real_rates(const RunTallies& tallies);

std::string config_to_json(const ProtocolConfig& c);
ProtocolConfig config_from_json(const std::string& text);
std::string attack_to_json(const AttackStrategy& a);
AttackStrategy attack_from_json(const std::string& text);
std::string tallies_to_json(const RunTallies& t);

std::string tallies_csv_header();
std::string tallies_csv_row(const ProtocolConfig& c, const AttackStrategy& a,
                            const RunTallies& t);

std::string protocol_name(Protocol p);
std::string attack_name(AttackKind k);

}  // namespace keyaudit

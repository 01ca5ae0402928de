#include "keyaudit/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "keyaudit/dist.hpp"
#include "keyaudit/extremal.hpp"
#include "keyaudit/loss_sim.hpp"
#include "keyaudit/pa.hpp"
#include "keyaudit/quantum.hpp"

namespace keyaudit {

namespace {

using Json = nlohmann::ordered_json;

Json parse(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw DistError(std::string("invalid ") + what + " JSON: " + ex.what());
  }
}

Json audit_claim_impl(const Json& claim) {
  std::string criterion = claim.at("criterion").get<std::string>();
  int n_bits = claim.at("n_bits").get<int>();
  double uniform_p1 = std::ldexp(1.0, -n_bits);

  Json out;
  out["criterion"] = criterion;
  out["n_bits"] = n_bits;

  if (criterion == "info") {
    double info = claim.at("value").get<double>();
    ExtremalResult ext = max_guess_given_information(n_bits, info);
    out["value"] = info;
    out["perceived_p1"] = uniform_p1;
    out["real_p1"] = ext.p1_star;
    out["l_exponent"] = ext.l_exponent;
    // Where the witness sits relative to p1 ~ I/n.
    if (info > 0.0) {
      out["p1_times_n_over_info"] =
          ext.p1_star * static_cast<double>(n_bits) / info;
    }
    out["witness_entropy"] = shannon_entropy(ext.witness);
    return out;
  }

  double epsilon;
  if (criterion == "vd") {
    epsilon = claim.at("value").get<double>();
  } else if (criterion == "trace") {
    if (claim.contains("ensemble")) {
      CqEnsemble e = ensemble_from_json(claim["ensemble"].dump());
      epsilon = cq_distance(e);
      out["cq_distance"] = epsilon;
    } else {
      epsilon = claim.at("value").get<double>();
    }
    // A trace-distance bound caps the variational distance of every
    // measurement, so the vd-extremal witness applies.
    epsilon = std::min(epsilon, 1.0 - uniform_p1);
  } else {
    throw DistError("claim criterion must be info, vd or trace");
  }

  GapReport gap = interpretation_gap_report(epsilon, n_bits);
  out["value"] = claim.contains("value") ? claim.at("value").get<double>()
                                         : epsilon;
  out["epsilon"] = epsilon;
  out["perceived_p1"] = gap.perceived_p1_bound;
  out["real_p1"] = gap.actual_p1;
  out["l_exponent"] = -std::log2(gap.actual_p1);
  out["ratio_vs_uniform"] = gap.ratio_vs_uniform;
  out["subset_gaps"] = Json::parse(gap_report_to_json(gap))["subset_gaps"];
  return out;
}

Json audit_claim(const Json& claim) {
  try {
    return audit_claim_impl(claim);
  } catch (const nlohmann::json::exception& ex) {
    throw DistError(std::string("malformed claim: ") + ex.what());
  }
}

}  // namespace

std::string criteria_report_json(const std::string& dist_json) {
  KeyDistribution p = dist_from_json(dist_json);
  GuessResult guess = guessing_probability(p);
  ExtractableBits bits = extractable_bits(p);

  Json out;
  out["schema_version"] = 1;
  out["n_bits"] = p.n_bits();
  out["entropy"] = shannon_entropy(p);
  out["eve_information"] = eve_information(p);
  if (p.n_bits() <= kMaxDenseBits) {
    out["delta_to_uniform"] =
        variational_distance(p, KeyDistribution::uniform(p.n_bits()));
  }
  out["p1"] = guess.p1;
  out["argmax"] = guess.argmax;
  out["l"] = bits.l;
  out["r"] = bits.r;
  auto& gaps = out["singleton_gaps"] = Json::array();
  for (int i = 0; i < p.n_bits(); ++i) {
    SubsetGap g = subset_security_gap(p, SubsetSpec{{i}, std::nullopt});
    gaps.push_back(
        {{"position", i}, {"epsilon", g.epsilon}, {"p1_subset", g.p1_subset}});
  }
  return out.dump();
}

std::string audit_report_json(const std::string& claim_json) {
  Json claim = parse(claim_json, "claim");
  Json out;
  out["schema_version"] = 1;
  out["audit"] = audit_claim(claim);
  return out.dump();
}

std::string simulate_json(const std::string& config_json,
                          const std::string& attack_json,
                          const std::string& grid_json) {
  ProtocolConfig config = config_from_json(config_json);
  AttackStrategy attack = attack_from_json(attack_json);

  std::vector<double> grid;
  if (!grid_json.empty()) {
    Json g = parse(grid_json, "grid");
    if (!g.is_array()) {
      throw DistError("grid must be a JSON array of transmittance values");
    }
    grid = g.get<std::vector<double>>();
  }

  Json out;
  out["schema_version"] = 1;
  out["config"] = Json::parse(config_to_json(config));
  out["attack"] = Json::parse(attack_to_json(attack));
  auto& rows = out["rows"] = Json::array();
  std::ostringstream csv;
  csv << tallies_csv_header() << '\n';
  if (grid.empty()) {
    RunTallies t = run_protocol(config, attack);
    rows.push_back(Json::parse(tallies_to_json(t)));
    csv << tallies_csv_row(config, attack, t) << '\n';
  } else {
    std::vector<RunTallies> result = loss_sweep(config, attack, grid);
    for (std::size_t i = 0; i < result.size(); ++i) {
      Json row = Json::parse(tallies_to_json(result[i]));
      row["transmittance_eta"] = grid[i];
      rows.push_back(row);
      ProtocolConfig point = config;
      point.transmittance_eta = grid[i];
      csv << tallies_csv_row(point, attack, result[i]) << '\n';
    }
  }
  out["csv"] = csv.str();
  return out.dump();
}

std::string table_report_json(const std::string& instance_json) {
  Json instance = parse(instance_json, "instance");
  for (const char* member :
       {"claim", "distribution", "hash", "protocol_config", "attack"}) {
    if (!instance.contains(member)) {
      throw DistError(std::string("instance bundle missing member: ") + member);
    }
  }

  Json claim = instance["claim"];
  KeyDistribution dist = dist_from_json(instance["distribution"].dump());
  LinearHash hash = hash_from_json(instance["hash"].dump());
  ProtocolConfig config = config_from_json(instance["protocol_config"].dump());
  AttackStrategy attack = attack_from_json(instance["attack"].dump());

  Json audit = audit_claim(claim);
  double l_exponent = audit["l_exponent"].get<double>();

  Json rows = Json::array();

  // 1. Raw security during key generation.
  rows.push_back(
      {{"aspect", "raw_security"},
       {"perceived",
        {{"p1_bound", audit["perceived_p1"]},
         {"reading", "criterion bound implies K near-uniform"}}},
       {"real",
        {{"p1", audit["real_p1"]},
         {"reading", "a consistent attacker reaches this guessing "
                     "probability on the whole key"}}},
       {"instance_params", claim}});

  // 2. Composition security under known-plaintext attack.
  int n_claim = claim.at("n_bits").get<int>();
  double lp = kpa_break_length(n_claim, l_exponent);
  int l_prime = std::clamp(static_cast<int>(std::ceil(lp)), 1,
                           std::min(n_claim, kMaxDenseBits));
  KpaWitness kpa = kpa_witness_family(std::min(n_claim, kMaxDenseBits), l_prime);
  rows.push_back(
      {{"aspect", "kpa_security"},
       {"perceived",
        {{"p1_after_reveal", audit["perceived_p1"]},
         {"reading", "revealed bits do not endanger the rest of K"}}},
       {"real",
        {{"l_prime", l_prime},
         {"p1_before", kpa.p1_before},
         {"p1_after", kpa.p1_after},
         {"reading", "revealing l_prime = l + log2(n) bits can determine "
                     "the whole key"}}},
       {"instance_params", {{"n_bits", n_claim}, {"l", l_exponent}}}});

  // 3. Privacy amplification.
  PaInvarianceReport pa = pa_invariance_check(dist, hash);
  rows.push_back(
      {{"aspect", "privacy_amplification"},
       {"perceived",
        {{"reading", "hashing to fewer bits improves security"},
         {"uniform_p1_out", std::ldexp(1.0, -hash.out_bits)}}},
       {"real",
        {{"q1", pa.q1},
         {"p1", pa.p1},
         {"p1_geq_q1", pa.p1_geq_q1},
         {"reading",
          "a known hash cannot decrease the maximum probability"}}},
       {"instance_params", {{"m", hash.in_bits}, {"n", hash.out_bits}}}});

  // 4. Key generation rate.
  RunTallies attacked = run_protocol(config, attack);
  rows.push_back(
      {{"aspect", "key_generation_rate"},
       {"perceived", {{"rate", attacked.perceived_rate}}},
       {"real", {{"p1_exponent_per_bit", attacked.real_rate_exponent}}},
       {"instance_params",
        {{"protocol", protocol_name(config.protocol)},
         {"attack", attack_name(attack.kind)},
         {"qber", attacked.qber}}}});

  // 5. How security should be determined.
  GuessResult guess = guessing_probability(dist);
  rows.push_back(
      {{"aspect", "security_determination"},
       {"perceived",
        {{"entropy", shannon_entropy(dist)},
         {"reading", "entropy-style quantities certify the key"}}},
       {"real",
        {{"p1", guess.p1},
         {"l", -std::log2(guess.p1)},
         {"reading", "bound the attacker's success probabilities"}}},
       {"instance_params", {{"n_bits", dist.n_bits()}}}});

  // 6. Effect of transmission loss.
  AttackStrategy honest{AttackKind::none};
  RunTallies honest_run = run_protocol(config, honest);
  Json loss_row = {{"aspect", "transmission_loss"},
                   {"perceived",
                    {{"honest_detection_rate", honest_run.detection_rate},
                     {"reading", "loss lowers throughput, not security"}}},
                   {"instance_params",
                    {{"transmittance_eta", config.transmittance_eta},
                     {"overlap_s", config.overlap_s}}}};
  Json loss_real = {{"attacked_detection_rate", attacked.detection_rate},
                    {"attacked_qber", attacked.qber},
                    {"eve_known_fraction", attacked.eve_known_fraction},
                    {"reading", "below threshold the attack covers its "
                                "losses completely"}};
  if (config.protocol == Protocol::B92) {
    loss_real["breach_threshold_eta"] =
        breach_threshold(config.overlap_s, config);
  }
  loss_row["real"] = loss_real;
  rows.push_back(loss_row);

  // 7. Detector modeling. Qualitative: receiver electronics are part of the
  // cryptosystem model, outside this tool's numerics.
  rows.push_back(
      {{"aspect", "detector_modeling"},
       {"perceived", "detector imperfections are a side channel to be patched"},
       {"real", "the detector is part of the main channel; its model belongs "
                "to the cryptosystem representation"},
       {"instance_params", Json::object()}});

  Json out;
  out["schema_version"] = 1;
  out["rows"] = rows;
  return out.dump();
}

namespace {

std::string scalarize(const Json& v) {
  if (v.is_string()) {
    return v.get<std::string>();
  }
  if (v.is_object()) {
    std::ostringstream s;
    bool first = true;
    for (const auto& [key, val] : v.items()) {
      if (!first) s << "; ";
      first = false;
      s << key << "=" << (val.is_string() ? val.get<std::string>() : val.dump());
    }
    return s.str();
  }
  return v.dump();
}

}  // namespace

std::string table_report_to_markdown(const std::string& report_json) {
  Json report = Json::parse(report_json);
  std::ostringstream out;
  out << "| Aspect | Perceived | Real |\n";
  out << "| --- | --- | --- |\n";
  for (const auto& row : report["rows"]) {
    out << "| " << row["aspect"].get<std::string>() << " | "
        << scalarize(row["perceived"]) << " | " << scalarize(row["real"])
        << " |\n";
  }
  return out.str();
}

std::string table_report_to_csv(const std::string& report_json) {
  Json report = Json::parse(report_json);
  std::ostringstream out;
  out << "aspect,perceived,real\n";
  for (const auto& row : report["rows"]) {
    auto quote = [](std::string s) {
      std::string q = "\"";
      for (char c : s) {
        if (c == '"') q += '"';
        q += c;
      }
      q += '"';
      return q;
    };
    out << row["aspect"].get<std::string>() << ','
        << quote(scalarize(row["perceived"])) << ','
        << quote(scalarize(row["real"])) << '\n';
  }
  return out.str();
}

}  // namespace keyaudit

#include "keyaudit.h"

#include <cstring>
#include <string>

#include "keyaudit/dist.hpp"
#include "keyaudit/extremal.hpp"
#include "keyaudit/loss_sim.hpp"
#include "keyaudit/report.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
ka_status guarded(Fn&& fn) {
  try {
    fn();
    return KA_OK;
  } catch (const keyaudit::DistError& ex) {
    g_last_error = ex.what();
    return KA_EINVAL;
  } catch (const std::runtime_error& ex) {
    g_last_error = ex.what();
    return KA_EINVAL;
  } catch (const std::exception& ex) {
    g_last_error = ex.what();
    return KA_ERUNTIME;
  }
}

ka_status require(bool ok, const char* msg) {
  if (!ok) {
    g_last_error = msg;
    return KA_EINVAL;
  }
  return KA_OK;
}

}  // namespace

struct ka_dist {
  keyaudit::KeyDistribution dist;
};

extern "C" {

const char* ka_last_error(void) { return g_last_error.c_str(); }

void ka_string_free(char* s) { delete[] s; }

ka_status ka_dist_parse(const char* json, ka_dist** out) {
  if (ka_status st = require(json && out, "null argument"); st != KA_OK) return st;
  return guarded([&] {
    *out = new ka_dist{keyaudit::dist_from_json(json)};
  });
}

ka_status ka_dist_uniform(int n_bits, ka_dist** out) {
  if (ka_status st = require(out != nullptr, "null argument"); st != KA_OK) return st;
  return guarded([&] {
    *out = new ka_dist{keyaudit::KeyDistribution::uniform(n_bits)};
  });
}

ka_status ka_dist_spike(int n_bits, double p1, uint32_t spike_index,
                        ka_dist** out) {
  if (ka_status st = require(out != nullptr, "null argument"); st != KA_OK) return st;
  return guarded([&] {
    *out = new ka_dist{keyaudit::spike_distribution(n_bits, p1, spike_index)};
  });
}

void ka_dist_free(ka_dist* d) { delete d; }

ka_status ka_dist_to_json(const ka_dist* d, char** out_json) {
  if (ka_status st = require(d && out_json, "null argument"); st != KA_OK) return st;
  return guarded([&] { *out_json = dup_string(keyaudit::dist_to_json(d->dist)); });
}

ka_status ka_dist_entropy(const ka_dist* d, double* out) {
  if (ka_status st = require(d && out, "null argument"); st != KA_OK) return st;
  return guarded([&] { *out = keyaudit::shannon_entropy(d->dist); });
}

ka_status ka_dist_eve_information(const ka_dist* d, double* out) {
  if (ka_status st = require(d && out, "null argument"); st != KA_OK) return st;
  return guarded([&] { *out = keyaudit::eve_information(d->dist); });
}

ka_status ka_dist_guessing_probability(const ka_dist* d, double* p1,
                                       uint32_t* argmax) {
  if (ka_status st = require(d && p1 && argmax, "null argument"); st != KA_OK) return st;
  return guarded([&] {
    keyaudit::GuessResult g = keyaudit::guessing_probability(d->dist);
    *p1 = g.p1;
    *argmax = g.argmax;
  });
}

ka_status ka_dist_variational_distance(const ka_dist* a, const ka_dist* b,
                                       double* out) {
  if (ka_status st = require(a && b && out, "null argument"); st != KA_OK) return st;
  return guarded([&] {
    *out = keyaudit::variational_distance(a->dist, b->dist);
  });
}

ka_status ka_max_guess_given_information(int n_bits, double info_bits,
                                         char** out_json) {
  if (ka_status st = require(out_json != nullptr, "null argument"); st != KA_OK) return st;
  return guarded([&] {
    *out_json = dup_string(keyaudit::extremal_to_json(
        keyaudit::max_guess_given_information(n_bits, info_bits)));
  });
}

ka_status ka_max_guess_given_vd(int n_bits, double epsilon, char** out_json) {
  if (ka_status st = require(out_json != nullptr, "null argument"); st != KA_OK) return st;
  return guarded([&] {
    *out_json = dup_string(keyaudit::extremal_to_json(
        keyaudit::max_guess_given_vd(n_bits, epsilon)));
  });
}

ka_status ka_kpa_break_length(int n_bits, double l, double* out) {
  if (ka_status st = require(out != nullptr, "null argument"); st != KA_OK) return st;
  return guarded([&] { *out = keyaudit::kpa_break_length(n_bits, l); });
}

ka_status ka_kpa_witness(int n_bits, int l_prime, uint64_t seed,
                         char** out_json) {
  if (ka_status st = require(out_json != nullptr, "null argument"); st != KA_OK) return st;
  return guarded([&] {
    *out_json = dup_string(keyaudit::kpa_witness_to_json(
        keyaudit::kpa_witness_family(n_bits, l_prime, seed)));
  });
}

ka_status ka_breach_threshold(double overlap_s, double* out) {
  if (ka_status st = require(out != nullptr, "null argument"); st != KA_OK) return st;
  return guarded([&] {
    keyaudit::ProtocolConfig config;
    config.overlap_s = overlap_s;
    *out = keyaudit::breach_threshold(overlap_s, config);
  });
}

ka_status ka_cloning_success(double overlap_s, double* out) {
  if (ka_status st = require(out != nullptr, "null argument"); st != KA_OK) return st;
  return guarded([&] { *out = keyaudit::cloning_success(overlap_s); });
}

ka_status ka_criteria_report(const char* dist_json, char** out_json) {
  if (ka_status st = require(dist_json && out_json, "null argument"); st != KA_OK) return st;
  return guarded([&] {
    *out_json = dup_string(keyaudit::criteria_report_json(dist_json));
  });
}

ka_status ka_audit_report(const char* claim_json, char** out_json) {
  if (ka_status st = require(claim_json && out_json, "null argument"); st != KA_OK) return st;
  return guarded([&] {
    *out_json = dup_string(keyaudit::audit_report_json(claim_json));
  });
}

ka_status ka_simulate(const char* config_json, const char* attack_json,
                      const char* grid_json, char** out_json) {
  if (ka_status st = require(config_json && attack_json && out_json, "null argument");
      st != KA_OK) {
    return st;
  }
  return guarded([&] {
    *out_json = dup_string(keyaudit::simulate_json(
        config_json, attack_json, grid_json ? grid_json : ""));
  });
}

ka_status ka_table_report(const char* instance_json, char** out_json) {
  if (ka_status st = require(instance_json && out_json, "null argument"); st != KA_OK) return st;
  return guarded([&] {
    *out_json = dup_string(keyaudit::table_report_json(instance_json));
  });
}

ka_status ka_table_report_markdown(const char* report_json, char** out_text) {
  if (ka_status st = require(report_json && out_text, "null argument"); st != KA_OK) return st;
  return guarded([&] {
    *out_text = dup_string(keyaudit::table_report_to_markdown(report_json));
  });
}

ka_status ka_table_report_csv(const char* report_json, char** out_text) {
  if (ka_status st = require(report_json && out_text, "null argument"); st != KA_OK) return st;
  return guarded([&] {
    *out_text = dup_string(keyaudit::table_report_to_csv(report_json));
  });
}

}  // extern "C"

/* C interface to the keyaudit library.
 *
 * All functions return ka_status; KA_OK means success. On failure the
 * thread-local message from ka_last_error() describes the problem. Strings
 * returned through char** are heap-allocated and must be released with
 * ka_string_free(). Handles are opaque and freed with their _free function.
 */
#ifndef KEYAUDIT_H
#define KEYAUDIT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  KA_OK = 0,
  KA_EINVAL = 1,  /* bad input: parse failure, range violation */
  KA_ERUNTIME = 2 /* internal failure */
} ka_status;

const char* ka_last_error(void);
void ka_string_free(char* s);

/* ---- distributions (opaque handle) ---- */

typedef struct ka_dist ka_dist;

ka_status ka_dist_parse(const char* json, ka_dist** out);
ka_status ka_dist_uniform(int n_bits, ka_dist** out);
ka_status ka_dist_spike(int n_bits, double p1, uint32_t spike_index,
                        ka_dist** out);
void ka_dist_free(ka_dist* d);

ka_status ka_dist_to_json(const ka_dist* d, char** out_json);
ka_status ka_dist_entropy(const ka_dist* d, double* out);
ka_status ka_dist_eve_information(const ka_dist* d, double* out);
ka_status ka_dist_guessing_probability(const ka_dist* d, double* p1,
                                       uint32_t* argmax);
ka_status ka_dist_variational_distance(const ka_dist* a, const ka_dist* b,
                                       double* out);

/* ---- extremal constructions ---- */

ka_status ka_max_guess_given_information(int n_bits, double info_bits,
                                         char** out_json);
ka_status ka_max_guess_given_vd(int n_bits, double epsilon, char** out_json);
ka_status ka_kpa_break_length(int n_bits, double l, double* out);
ka_status ka_kpa_witness(int n_bits, int l_prime, uint64_t seed,
                         char** out_json);

/* ---- loss simulation ---- */

ka_status ka_breach_threshold(double overlap_s, double* out);
ka_status ka_cloning_success(double overlap_s, double* out);

/* ---- JSON-in / JSON-out report surface (what the CLI uses) ---- */

ka_status ka_criteria_report(const char* dist_json, char** out_json);
ka_status ka_audit_report(const char* claim_json, char** out_json);
/* grid_json may be NULL or "" for a single run. */
ka_status ka_simulate(const char* config_json, const char* attack_json,
                      const char* grid_json, char** out_json);
ka_status ka_table_report(const char* instance_json, char** out_json);
ka_status ka_table_report_markdown(const char* report_json, char** out_text);
ka_status ka_table_report_csv(const char* report_json, char** out_text);

#ifdef __cplusplus
}
#endif

#endif /* KEYAUDIT_H */

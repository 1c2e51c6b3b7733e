/* C interface to the online bilevel optimization library.
 *
 * All functions return an obl_status; 0 means success. Opaque handles are
 * created and destroyed by matching alloc/free pairs. Functions returning
 * heap strings hand ownership to the caller; release them with
 * obl_string_free. On failure, obl_last_error() returns a thread-local
 * description of the most recent error.
 */
#ifndef OBILEVEL_OBILEVEL_H
#define OBILEVEL_OBILEVEL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t obl_status;

enum {
  OBL_OK = 0,
  OBL_E_NULL = 1,
  OBL_E_CONFIG = 2,    /* invalid or unparsable configuration */
  OBL_E_DIVERGED = 3,  /* a run diverged; partial CSVs were flushed */
  OBL_E_DIMENSION = 4,
  OBL_E_NONFINITE = 5,
  OBL_E_INFEASIBLE = 6,
  OBL_E_UNSUPPORTED = 7,
  OBL_E_SOLVER = 8,
  OBL_E_IO = 9,
  OBL_E_INTERNAL = 10
};

typedef struct obl_config_s obl_config_t;

/* Configuration lifecycle. The JSON document schema is described in the
 * project README. */
obl_status obl_config_from_json(const char* json_utf8, obl_config_t** out);
obl_status obl_config_from_file(const char* path, obl_config_t** out);
void obl_config_free(obl_config_t* cfg);

/* Optional overrides applied after parsing. */
obl_status obl_config_override_seeds(obl_config_t* cfg, const uint64_t* seeds, size_t count);
obl_status obl_config_set_output_dir(obl_config_t* cfg, const char* dir);

/* Validation: fills *diagnostics_json with a JSON array of human-readable
 * diagnostics (empty array iff the document is runnable). Returns OBL_OK
 * whenever validation itself could execute. */
obl_status obl_validate_json(const char* json_utf8, char** diagnostics_json);

/* Execute the configured runs. Writes one CSV per seed plus summary.json in
 * the output directory and returns the summary document. Returns
 * OBL_E_DIVERGED (with a complete summary) if any seed diverged. */
obl_status obl_run(const obl_config_t* cfg, char** summary_json);

/* Derived-constant ledger for a smoothness profile JSON object
 * {"mu_g":..,"ell_f0":..,"ell_f1":..,"ell_g1":..,"ell_g2":..}. When d1 and d2
 * are >= 1 the zeroth-order ledger for those dimensions is included. */
obl_status obl_constants(const char* profile_json, int d1, int d2, char** ledger_json);

const char* obl_status_message(obl_status status);
const char* obl_last_error(void);
void obl_string_free(char* str);

#ifdef __cplusplus
}
#endif

#endif /* OBILEVEL_OBILEVEL_H */

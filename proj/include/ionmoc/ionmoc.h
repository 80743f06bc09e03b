/* Copyright (c) 2026 ionmoc developers. */
/* SPDX-License-Identifier: Apache-2.0 */

#ifndef IONMOC_IONMOC_H
#define IONMOC_IONMOC_H

#ifdef __cplusplus
extern "C" {
#endif

/*
 * C interface to the ionmoc transport solver. Every int-returning call
 * reports a status shared with the CLI exit codes: 0 success, 1
 * configuration error, 2 solver failure, 3 I/O error.
 */

/* Library version, e.g. "1.0.0". */
const char* ionmoc_version(void);

/* Message for the last failing call on the calling thread; an empty string
 * when the last call succeeded. The pointer stays valid until the next
 * ionmoc call on the same thread. */
const char* ionmoc_last_error(void);

/* Runs one experiment against a config file. subcommand is one of bench,
 * iterate, hg, angular, coupling, carbon. out_dir may be NULL to keep the
 * config value or the built-in default; threads <= 0 keeps the config
 * value. Writes the experiment's CSV artifacts plus a run_metadata file. */
int ionmoc_run(const char* subcommand, const char* config_path, const char* out_dir,
               int threads);

/* Parses and validates a config without solving or writing anything. The
 * config must carry run.experiment so the key vocabulary is known. */
int ionmoc_validate(const char* config_path);

/* Power-law stopping model R(E) = alpha E^p, either from parameters or fit
 * to a range-energy table (CSV rows Energy_MeV,Range_cm) over the energy
 * window [e_lo, e_hi]. A NULL return means failure; see ionmoc_last_error. */
typedef struct ionmoc_stopping ionmoc_stopping;

ionmoc_stopping* ionmoc_stopping_power_law(double alpha, double p);
ionmoc_stopping* ionmoc_stopping_fit(const char* table_path, double e_lo, double e_hi);
void ionmoc_stopping_free(ionmoc_stopping* model);

/* Stopping power S(E), range R(E), and the inverse range map. */
int ionmoc_stopping_eval(const ionmoc_stopping* model, double energy, double* out);
int ionmoc_stopping_range(const ionmoc_stopping* model, double energy, double* out);
int ionmoc_stopping_inverse_range(const ionmoc_stopping* model, double range,
                                  double* out);
int ionmoc_stopping_params(const ionmoc_stopping* model, double* alpha, double* p);

/* Henyey-Greenstein phase function on the circle at angle theta, for
 * anisotropy gamma in (-1, 1). Returns NaN on a bad gamma. */
double ionmoc_hg_phase(double gamma, double theta);

#ifdef __cplusplus
}
#endif

#endif /* IONMOC_IONMOC_H */

/* SPDX-License-Identifier: Apache-2.0 */

/*
 * ringqed C interface.
 *
 * Every fallible call returns an rq_status; on failure the message is
 * available from rq_last_error_message() on the same thread until the next
 * call into the library. Handles are opaque and owned by the caller, who
 * releases them with the matching *_free function. Strings returned by the
 * library stay valid until the owning handle is freed (or, for the error
 * message, until the next call on that thread).
 *
 * Units: rates in rad/s, wavelengths and heights in nm, volumes in µm^3,
 * powers in mW, frequencies in THz.
 */

#ifndef RINGQED_RINGQED_H
#define RINGQED_RINGQED_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RINGQED_BUILDING)
#    define RQ_API __declspec(dllexport)
#  else
#    define RQ_API __declspec(dllimport)
#  endif
#else
#  define RQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rq_status
{
  RQ_OK = 0,
  RQ_INVALID_ARGUMENT = 1,
  RQ_RANGE = 2,
  RQ_NO_MODE = 3,
  RQ_NUMERIC = 4,
  RQ_GEOMETRY = 5,
  RQ_CONFIG = 6,
  RQ_SINGULARITY = 7,
  RQ_NOT_FOUND = 8,
  RQ_FIT = 9,
  RQ_INSUFFICIENT_SIGNAL = 10,
  RQ_UNTRAPPED = 11,
  RQ_UNDEFINED = 12,
  RQ_IO = 13,
  RQ_INTERNAL = 99
} rq_status;

typedef struct rq_project rq_project;
typedef struct rq_report rq_report;

RQ_API const char *rq_version(void);
RQ_API const char *rq_status_name(rq_status status);
RQ_API const char *rq_last_error_message(void);
/* Source line of the last configuration error, 0 when unknown. */
RQ_API int rq_last_error_line(void);

/* ---- project configuration ---- */

RQ_API rq_status rq_project_defaults(rq_project **out);
RQ_API rq_status rq_project_load(const char *path, rq_project **out);
/* base_dir resolves a relative materials path; NULL means ".". */
RQ_API rq_status rq_project_parse(const char *yaml_text, const char *base_dir, rq_project **out);
RQ_API void rq_project_free(rq_project *project);

/* ---- subcommands ---- */

RQ_API size_t rq_command_count(void);
RQ_API const char *rq_command_name(size_t index);
RQ_API const char *rq_command_help(size_t index);
/* Parameter names accepted by a command; NULL when index is out of range. */
RQ_API size_t rq_command_param_count(size_t index);
RQ_API const char *rq_command_param(size_t index, size_t param);

typedef struct rq_run_options
{
  double grid_pitch_nm; /* <= 0 keeps the configured pitch */
  int jobs;             /* worker threads, >= 1 */
  uint64_t seed;
  const char *const *param_keys; /* command-specific parameters */
  const char *const *param_values;
  size_t param_count;
} rq_run_options;

RQ_API void rq_run_options_init(rq_run_options *options);
RQ_API rq_status rq_run(const rq_project *project, const char *command, const rq_run_options *options,
                        rq_report **out);

/* ---- reports ---- */

/* format is "csv" or "json". */
RQ_API rq_status rq_report_write(const rq_report *report, const char *dir, const char *format);
/* Reads a <command>.json report or a <command>_summary.json manifest. */
RQ_API rq_status rq_report_read(const char *path, rq_report **out);
RQ_API void rq_report_free(rq_report *report);

RQ_API const char *rq_report_command(const rq_report *report);
RQ_API const char *rq_report_summary_json(const rq_report *report);
/* Number lookup by JSON pointer into the summary, e.g. "/trap/height_nm".
 * Null entries read as NaN. */
RQ_API rq_status rq_report_summary_number(const rq_report *report, const char *pointer, double *out);
RQ_API size_t rq_report_table_count(const rq_report *report);
RQ_API const char *rq_report_table_name(const rq_report *report, size_t table);
RQ_API rq_status rq_report_table_shape(const rq_report *report, size_t table, size_t *rows, size_t *cols);
RQ_API const char *rq_report_column_name(const rq_report *report, size_t table, size_t col);
/* Row-major copy; capacity is the number of doubles available in buf. */
RQ_API rq_status rq_report_table_data(const rq_report *report, size_t table, double *buf, size_t capacity);

/* ---- scalar physics ---- */

RQ_API rq_status rq_t_res(double kappa_c, double kappa_i, double *out);
/* Under-coupled ratio kappa_c/kappa_i for a resonant transmission in [0, 1);
 * the over-coupled branch is its reciprocal. */
RQ_API rq_status rq_invert_t_res(double t, double *under_ratio, double *over_ratio);
RQ_API rq_status rq_empty_ring_transmission(double kappa_c, double kappa_i, double detuning_ghz, double *out);
RQ_API rq_status rq_atom_transmission(double g, double gamma, double kappa_c, double kappa_i, double detuning,
                                      double *out);
RQ_API rq_status rq_q_to_kappa(double q, double frequency_thz, double *out);
RQ_API rq_status rq_kappa_to_q(double kappa, double frequency_thz, double *out);
RQ_API rq_status rq_cooperativity(double q, double mode_volume_um3, double wavelength_nm, double *out);
/* Cesium D2 coupling strength (rad/s) for a mode volume at a carrier frequency. */
RQ_API rq_status rq_coupling_strength(double mode_volume_um3, double frequency_thz, double *out);
/* Atom-surface potential in µK at z nm from a planar dielectric. */
RQ_API rq_status rq_casimir_polder(double z_nm, double *out);
/* Cesium ground-state scalar polarizability in atomic units. */
RQ_API rq_status rq_polarizability(double wavelength_nm, double *out_au);
/* SiO2/Si3N4 membrane in vacuum: reflectance and first antinode height. */
RQ_API rq_status rq_membrane_point(const rq_project *project, double oxide_um, double nitride_um,
                                   double wavelength_nm, double *reflectance, double *first_antinode_nm);

#ifdef __cplusplus
}
#endif

#endif /* RINGQED_RINGQED_H */

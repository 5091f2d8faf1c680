/* C interface to the matrix Allen-Cahn engine.
 *
 * Every function returns a mac_status; on failure mac_last_error() holds a
 * message for the calling thread until its next failing call. Handles are
 * opaque, owned by the caller, and released with the matching *_free
 * function (NULL is accepted). "Borrowed" outputs stay valid until their
 * owning handle is freed. */

#ifndef MACFLOW_H
#define MACFLOW_H

#include <stddef.h>
#include <stdint.h>

#if defined(MACFLOW_BUILDING)
#define MAC_API __attribute__((visibility("default")))
#else
#define MAC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mac_status {
  MAC_OK = 0,
  MAC_ERR_USAGE = 1,     /* bad argument, config, or file contents */
  MAC_ERR_NUMERICAL = 2, /* non-finite values or SVD non-convergence */
  MAC_ERR_IO = 3,        /* file system failure */
  MAC_ERR_INTERNAL = 4
} mac_status;

typedef struct mac_config mac_config;
typedef struct mac_field mac_field;
typedef struct mac_timeline mac_timeline;
typedef struct mac_run_result mac_run_result;
typedef struct mac_compare_result mac_compare_result;
typedef struct mac_order_table mac_order_table;
typedef struct mac_check_report mac_check_report;

typedef struct mac_record {
  double t;
  double energy;
  double modified_energy;
  double max_frobenius;
  double max_abs_det;
  double h1_seminorm_sq;
} mac_record;

typedef struct mac_check_entry {
  const char* name;      /* borrowed */
  const char* statement; /* borrowed */
  uint64_t samples;
  uint64_t violations;
  double slack;
  double worst_margin;
  const char* first_violation; /* borrowed; "" when none */
} mac_check_entry;

MAC_API const char* mac_last_error(void);
MAC_API const char* mac_status_name(mac_status s);
MAC_API const char* mac_version(void);

/* Configuration: flat "key = value" pairs, see config.hpp for the keys. */
MAC_API mac_status mac_config_new(mac_config** out);
MAC_API mac_status mac_config_preset(const char* name, mac_config** out);
MAC_API mac_status mac_config_load(mac_config* cfg, const char* path);
MAC_API mac_status mac_config_parse(mac_config* cfg, const char* text);
MAC_API mac_status mac_config_set(mac_config* cfg, const char* key, const char* value);
MAC_API mac_status mac_config_validate(const mac_config* cfg);
/* Copies the canonical text (NUL-terminated) into buf when it fits;
 * *needed receives the byte count including the terminator. */
MAC_API mac_status mac_config_serialize(const mac_config* cfg, char* buf, size_t cap, size_t* needed);
MAC_API void mac_config_free(mac_config* cfg);

/* Fields: node-major, row-major m x m blocks. */
MAC_API mac_status mac_field_initial(const mac_config* cfg, mac_field** out);
MAC_API mac_status mac_field_from_data(int d, int n, double length, int m, const double* data, size_t count,
                                       mac_field** out);
MAC_API mac_status mac_field_info(const mac_field* u, int* d, int* n, double* length, int* m, size_t* count);
MAC_API mac_status mac_field_data(const mac_field* u, const double** data, size_t* count);
MAC_API mac_status mac_field_read_snapshot(const char* path, mac_field** out, double* t);
MAC_API mac_status mac_field_write_snapshot(const mac_field* u, double t, const char* path);
/* One step of the scheme configured in cfg. */
MAC_API mac_status mac_field_step(const mac_field* u, const mac_config* cfg, mac_field** out);
MAC_API mac_status mac_field_diagnose(const mac_field* u, const mac_config* cfg, double t, mac_record* out);
MAC_API mac_status mac_field_l2_difference(const mac_field* a, const mac_field* b, double* out);
MAC_API void mac_field_free(mac_field* u);

MAC_API mac_status mac_timeline_size(const mac_timeline* tl, size_t* out);
MAC_API mac_status mac_timeline_record(const mac_timeline* tl, size_t i, mac_record* out);
MAC_API mac_status mac_timeline_steps(const mac_timeline* tl, size_t* steps, size_t* near_singular_nodes);
MAC_API mac_status mac_timeline_write_csv(const mac_timeline* tl, const char* path);

/* run: the configured scheme from the configured initial data, writing
 * outputs under the config's "out" directory when set. */
MAC_API mac_status mac_run(const mac_config* cfg, mac_run_result** out);
MAC_API mac_status mac_run_result_timeline(const mac_run_result* r, const mac_timeline** out);
MAC_API mac_status mac_run_result_final_field(const mac_run_result* r, mac_field** out);
MAC_API mac_status mac_run_result_issue_count(const mac_run_result* r, size_t* out);
MAC_API mac_status mac_run_result_issue(const mac_run_result* r, size_t i, const char** out);
MAC_API mac_status mac_run_result_file_count(const mac_run_result* r, size_t* out);
MAC_API mac_status mac_run_result_file(const mac_run_result* r, size_t i, const char** out);
MAC_API void mac_run_result_free(mac_run_result* r);

/* compare: Strang and thresholding side by side (rescaled mode). */
MAC_API mac_status mac_compare(const mac_config* cfg, mac_compare_result** out);
/* which = 0 for Strang, 1 for thresholding. */
MAC_API mac_status mac_compare_result_timeline(const mac_compare_result* r, int which, const mac_timeline** out);
MAC_API mac_status mac_compare_result_size(const mac_compare_result* r, size_t* out);
MAC_API mac_status mac_compare_result_difference(const mac_compare_result* r, size_t i, double* t, double* diff);
MAC_API mac_status mac_compare_result_issue_count(const mac_compare_result* r, size_t* out);
MAC_API mac_status mac_compare_result_issue(const mac_compare_result* r, size_t i, const char** out);
MAC_API mac_status mac_compare_result_file_count(const mac_compare_result* r, size_t* out);
MAC_API mac_status mac_compare_result_file(const mac_compare_result* r, size_t i, const char** out);
MAC_API void mac_compare_result_free(mac_compare_result* r);

/* converge: temporal order table; order is NaN on the last row. */
MAC_API mac_status mac_converge(const mac_config* cfg, mac_order_table** out);
MAC_API mac_status mac_order_table_size(const mac_order_table* t, size_t* out);
MAC_API mac_status mac_order_table_row(const mac_order_table* t, size_t i, double* tau, double* error, double* order);
MAC_API void mac_order_table_free(mac_order_table* t);

/* check: randomized inequality suites. */
MAC_API mac_status mac_check(uint64_t samples, uint64_t seed, mac_check_report** out);
MAC_API mac_status mac_check_report_size(const mac_check_report* r, size_t* out);
MAC_API mac_status mac_check_report_entry(const mac_check_report* r, size_t i, mac_check_entry* out);
MAC_API void mac_check_report_free(mac_check_report* r);

#ifdef __cplusplus
}
#endif

#endif /* MACFLOW_H */

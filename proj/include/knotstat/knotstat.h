#ifndef KNOTSTAT_KNOTSTAT_H
#define KNOTSTAT_KNOTSTAT_H

#include <stddef.h>
#include <stdint.h>

#if defined(KNOTSTAT_BUILDING_LIBRARY)
#define KS_API __attribute__((visibility("default")))
#else
#define KS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/*
 * Status codes. KS_ERR_USAGE, KS_ERR_DATA and KS_ERR_NUMERIC match the CLI
 * exit codes 1, 2 and 3.
 */
typedef enum ks_status {
  KS_OK = 0,
  KS_ERR_USAGE = 1,
  KS_ERR_DATA = 2,
  KS_ERR_NUMERIC = 3,
  KS_ERR_IO = 4,
  KS_ERR_INTERNAL = 5
} ks_status;

typedef struct ks_dataset ks_dataset;
typedef struct ks_model ks_model;

KS_API const char* ks_version(void);
KS_API int ks_schema_version(void);

/* Message of the last failing call on this thread; "" if none. */
KS_API const char* ks_last_error(void);

/* Releases strings returned through char** out-parameters. NULL is ignored. */
KS_API void ks_string_free(char* s);

/* ---- datasets ---------------------------------------------------------- */

/* format: "csv", "json" or NULL to pick by file extension. */
KS_API ks_status ks_dataset_load(const char* path, const char* format, ks_dataset** out);
KS_API ks_status ks_dataset_parse(const char* text, size_t length, const char* format,
                                  ks_dataset** out);
KS_API void ks_dataset_free(ks_dataset* ds);
KS_API ks_status ks_dataset_size(const ks_dataset* ds, size_t* out);
/* knot_class: "all", "alt" or "nonalt". */
KS_API ks_status ks_dataset_filter(const ks_dataset* ds, const char* knot_class, ks_dataset** out);
KS_API ks_status ks_dataset_serialize(const ks_dataset* ds, const char* format, char** out);

/* ---- polynomial primitives ----------------------------------------------
 * A Laurent polynomial is passed as its lowest exponent and the dense
 * coefficient array from that exponent upward.
 */
KS_API ks_status ks_poly_eval(int min_exp, const int64_t* coeffs, size_t n, double re, double im,
                              double* out_re, double* out_im);
KS_API ks_status ks_poly_determinant(int min_exp, const int64_t* coeffs, size_t n, int64_t* out);
KS_API ks_status ks_poly_mahler(int min_exp, const int64_t* coeffs, size_t n, size_t n_points,
                                double* out);
KS_API ks_status ks_poly_root_of_unity_modulus(int min_exp, const int64_t* coeffs, size_t n, int k,
                                               int root_n, double* out);

/* Phase in radians from "k/n", "Xpi/Y", "pi" or a plain number. */
KS_API ks_status ks_parse_phase(const char* text, double* out);

/* ---- commands -----------------------------------------------------------
 * command: validate, derive, correlate, tables, train-ann, distill, sweep,
 * scatter. request_json is a JSON object of options (NULL for defaults).
 * format: "json", "text" or "csv". *out receives the rendered document.
 */
KS_API ks_status ks_run(const char* command, const ks_dataset* ds, const char* request_json,
                        const char* format, char** out);

/* ---- trained networks -------------------------------------------------- */

/* Trains an ANN (options as for the train-ann command). *report receives the
 * rendered train-ann document, which embeds the model; report may be NULL. */
KS_API ks_status ks_model_train(const ks_dataset* ds, const char* request_json, const char* format,
                                ks_model** out, char** report);
/* Accepts a bare model object or a full train-ann JSON document. */
KS_API ks_status ks_model_from_json(const char* text, ks_model** out);
KS_API ks_status ks_model_to_json(const ks_model* model, char** out);
KS_API void ks_model_free(ks_model* model);
KS_API ks_status ks_model_input_width(const ks_model* model, size_t* out);
/* features: row-major n_rows x input_width, before input standardization. */
KS_API ks_status ks_model_predict(const ks_model* model, const double* features, size_t n_rows,
                                  double* out);
KS_API ks_status ks_model_evaluate(const ks_model* model, const ks_dataset* ds,
                                   const char* request_json, const char* format, char** out);

#ifdef __cplusplus
}
#endif

#endif /* KNOTSTAT_KNOTSTAT_H */

/* C API for the complex Finsler connection and classification library.
 *
 * All functions return fin_status; results travel through out-parameters.
 * Strings returned through char** are heap-allocated and must be released
 * with fin_string_free(); metric handles with fin_metric_free(). Handles are
 * immutable after creation and safe to share across threads.
 */

#ifndef FINSLER_H
#define FINSLER_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct fin_metric fin_metric;

typedef enum {
    FIN_OK = 0,
    FIN_ERR_SYNTAX = 1,
    FIN_ERR_SCHEMA = 2,
    FIN_ERR_VALIDATION = 3,
    FIN_ERR_DOMAIN = 4,
    FIN_ERR_SINGULAR = 5,
    FIN_ERR_BAD_ARGUMENT = 6,
    FIN_ERR_UNKNOWN_ID = 7,
    FIN_ERR_INTERNAL = 8
} fin_status;

typedef struct {
    uint64_t seed;
    int z_count;
    int eta_count;
    double radius;
} fin_plan;

/* 8 z-points x 8 eta-points, seed 42, polydisc radius 0.5. */
fin_plan fin_plan_default(void);

const char* fin_version(void);

/* Parses and validates a metric-JSON document. */
fin_status fin_metric_load_json(const char* json_text, fin_metric** out, char** err_msg);

/* Builds a zoo entry. params_json may be NULL or a JSON object with optional
 * fields {"n": int, "sigma": str, "a": [[str]], "b": [str],
 * "base_point": [2n reals]}. */
fin_status fin_metric_from_zoo(const char* id, const char* params_json, fin_metric** out,
                               char** err_msg);

fin_status fin_metric_to_json(const fin_metric* metric, char** out_json);
int fin_metric_dimension(const fin_metric* metric);
void fin_metric_free(fin_metric* metric);

/* Classifies over the plan. format is "json" or "csv". out_inconsistent (may
 * be NULL) is set to 1 when any theorem cross-check reports a split verdict. */
fin_status fin_classify(const fin_metric* metric, const fin_plan* plan, double tolerance,
                        const char* format, char** out_text, int* out_inconsistent,
                        char** err_msg);

/* Identity suites: "homogeneity", "eq1.3", "lemma2.1", "lemma2.2". out_pass
 * (may be NULL) is set to 1 when every identity is below tolerance. */
fin_status fin_check(const fin_metric* metric, const char* suite, const fin_plan* plan,
                     double tolerance, const char* format, char** out_text, int* out_pass,
                     char** err_msg);

/* Connection bundle at one sample; coords holds 4n reals:
 * Re z1, Im z1, .., Re zn, Im zn, Re eta1, Im eta1, .., Re etan, Im etan. */
fin_status fin_dump(const fin_metric* metric, const double* coords, char** out_json,
                    char** err_msg);

void fin_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* FINSLER_H */

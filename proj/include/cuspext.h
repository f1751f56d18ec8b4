/* cuspext: plane homeomorphisms of finite distortion extending the complex
 * square map off model cusp domains, plus the distortion-integrability
 * analysis toolkit behind them.
 *
 * C surface: opaque handles and integer error codes. Every function returns
 * CUSPEXT_OK on success unless documented otherwise. Strings returned through
 * char** are heap-allocated; release them with cuspext_string_free.
 */
#ifndef CUSPEXT_H
#define CUSPEXT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct cuspext_scenario cuspext_scenario;

enum {
    CUSPEXT_OK = 0,
    CUSPEXT_ERR_INVALID_ARGUMENT = 1,
    CUSPEXT_ERR_OUT_OF_DOMAIN = 2,
    CUSPEXT_ERR_IO = 3,
    CUSPEXT_ERR_NUMERIC = 4,
    CUSPEXT_ERR_VERIFY_FAILED = 5,
    CUSPEXT_ERR_INTERNAL = 6
};

const char* cuspext_version(void);
const char* cuspext_error_name(int code);
void cuspext_string_free(char* s);

/* Configuration JSON, all fields optional:
 *   {"domain":"ms"|"cardioid", "s":1.5, "j0":6,
 *    "construction":"simple"|"squeezed", "delta":"exp"|"powerlog", "p":2.0,
 *    "seed":12345, "threads":0}
 * Returns NULL on error and, when err is non-NULL, writes a message there. */
cuspext_scenario* cuspext_scenario_create(const char* config_json, char* err, size_t errlen);
void cuspext_scenario_destroy(cuspext_scenario* sc);
int cuspext_scenario_describe(const cuspext_scenario* sc, char** json_out);
int cuspext_set_threads(cuspext_scenario* sc, int threads);

typedef struct {
    double image_x, image_y;
    char region[24]; /* "Ms_closure" | "Omega1(j)" | "Omega2" | "boundary" */
    int cell_index;  /* dyadic index, -1 outside the cell band */
    int has_jacobian;
    double jac[4]; /* row-major d(image)/d(input) */
    int has_distortion;
    double distortion;
} cuspext_eval_result;

/* Evaluate the plane extension at (x, y). */
int cuspext_eval(const cuspext_scenario* sc, double x, double y, cuspext_eval_result* out);

/* Cardioid scenarios only: the extension of z -> (z+1)^2, i.e. the input is
 * shifted by one before evaluation. */
int cuspext_eval_shifted(const cuspext_scenario* sc, double x, double y,
                         cuspext_eval_result* out);

/* Boundary curve export: CSV "branch,u,x,y" with branch in {upper,lower,arc}.
 * Model-family scenarios only. */
int cuspext_boundary_csv(const cuspext_scenario* sc, int samples_per_branch, const char* path);

#define CUSPEXT_MAX_SERIES 64

typedef struct {
    int jmin, jmax;
    double exponent;
    int count;
    double log2_integral[CUSPEXT_MAX_SERIES];
    double integral[CUSPEXT_MAX_SERIES]; /* may underflow double; log2 is exact */
    double slope;
    char verdict[16]; /* converges | diverges | critical | inconclusive */
} cuspext_series_result;

/* quantity in {"Kf","Kfinv","Df","Dfinv","J"} */
int cuspext_series(const cuspext_scenario* sc, const char* quantity, double exponent, int jmin,
                   int jmax, cuspext_series_result* out);

typedef struct {
    double exponent;
    double slope;
    double uncertainty;
    int iterations;
} cuspext_scan_result;

int cuspext_scan(const cuspext_scenario* sc, const char* quantity, double lo, double hi, int jmin,
                 int jmax, cuspext_scan_result* out);

/* Batch driver: config JSON
 *   {"jmin":6,"jmax":14,
 *    "quantities":[{"name":"Kf","exponents":[1,2,3],"scan":[0.5,4.0]}, ...]}
 * Writes per-run CSV ("j,integral,log2_ratio") and JSON reports into out_dir
 * and returns the aggregate summary JSON. */
int cuspext_exponents(const cuspext_scenario* sc, const char* config_json, const char* out_dir,
                      char** summary_json);

/* Render spec JSON:
 *   {"mode":"grid"|"heatmap","x0":-2,"x1":2,"y0":-2,"y1":2,
 *    "width":512,"height":512,"grid_density":24}
 * Output is binary PPM (P6). */
int cuspext_render(const cuspext_scenario* sc, const char* spec_json, const char* path);

/* Runs the invariant suite. Returns CUSPEXT_OK when every check passes,
 * CUSPEXT_ERR_VERIFY_FAILED otherwise; the JSON report is produced in both
 * cases. full=0 skips the slope spot checks. */
int cuspext_verify(const cuspext_scenario* sc, int full, char** report_json);

/* Closed-form critical exponents; s and optional p are exact rationals like
 * "3/2". Pass NULL for p to skip the combined threshold. */
int cuspext_thresholds(const char* s, const char* p, char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* CUSPEXT_H */

/* C interface to the wandering-domain construction library.
 *
 * Every function returns a wander_status; on anything but WANDER_OK the
 * message of the failure is available from wander_last_error() (per thread,
 * valid until the next call on that thread). Handles are opaque and owned by
 * the caller; release them with the matching *_free function.
 */
#ifndef WANDER_H
#define WANDER_H

#include <stddef.h>

#if defined(_WIN32)
#define WANDER_API __declspec(dllexport)
#else
#define WANDER_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wander_status {
  WANDER_OK = 0,
  WANDER_DEGENERATE_REGION = 1,
  WANDER_RESOLUTION_TOO_COARSE = 2,
  WANDER_NO_ROOM = 3,
  WANDER_COLLISION = 4,
  WANDER_OVERFLOW = 5,
  WANDER_ILL_CONDITIONED = 6,
  WANDER_DEGREE_CAP_EXCEEDED = 7,
  WANDER_PIECES_OVERLAP = 8,
  WANDER_CONSTRUCTION_FAILED = 9,
  WANDER_CONFIG_ERROR = 10,
  WANDER_IO_ERROR = 11,
  WANDER_INVALID_ARGUMENT = 12,
  WANDER_INTERNAL_ERROR = 99
} wander_status;

typedef struct wander_poly wander_poly;
typedef struct wander_scenario wander_scenario;

WANDER_API const char* wander_last_error(void);
WANDER_API const char* wander_status_name(wander_status s);
/* process exit code for a status: 0 ok, 1 I/O, 2 construction failure, 3 config error */
WANDER_API int wander_exit_code(wander_status s);

/* polynomials */
WANDER_API wander_status wander_poly_load(const char* path, wander_poly** out);
WANDER_API wander_status wander_poly_from_coeffs(const double* re, const double* im, size_t count, wander_poly** out);
WANDER_API wander_status wander_poly_save(const wander_poly* p, const char* path);
WANDER_API wander_status wander_poly_degree(const wander_poly* p, int* degree);
WANDER_API wander_status wander_poly_eval(const wander_poly* p, double re, double im, double* out_re, double* out_im);
WANDER_API void wander_poly_free(wander_poly* p);

/* scenarios (JSON configuration) */
WANDER_API wander_status wander_scenario_load(const char* path, wander_scenario** out);
WANDER_API wander_status wander_scenario_parse(const char* json_text, wander_scenario** out);
WANDER_API wander_status wander_scenario_stages(const wander_scenario* s, int* stages);
WANDER_API void wander_scenario_free(wander_scenario* s);

/* runs the construction and writes f_k.poly checkpoints plus report.json into
 * out_dir. Returns WANDER_OK only if every certificate passed. */
WANDER_API wander_status wander_construct(const wander_scenario* s, const char* out_dir);

/* re-runs all checks on the polynomial at poly_path. *all_pass receives 1 or 0;
 * the return value reports errors (a mode mismatch with the artifact's report
 * is WANDER_CONFIG_ERROR). */
WANDER_API wander_status wander_verify(const char* poly_path, const wander_scenario* s, int* all_pass);

/* P6 images */
WANDER_API wander_status wander_render_figure(const wander_poly* p, const wander_scenario* s, const char* out_path);
/* basin over the mode's default viewport, width pixels across */
WANDER_API wander_status wander_render_basin(const wander_poly* p, const wander_scenario* s, int width, const char* out_path);
WANDER_API wander_status wander_render_basin_viewport(const wander_poly* p, double x0, double x1, double y0, double y1,
                                                      int width, int height, double p0_re, double p0_im,
                                                      const char* out_path);

#ifdef __cplusplus
}
#endif

#endif

#ifndef RANGESETS_H
#define RANGESETS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum RsStatus {
  RS_STATUS_OK = 0,
  RS_STATUS_NULL_POINTER = 1,
  RS_STATUS_INVALID_ARGUMENT = 2,
  RS_STATUS_TOO_FEW_POINTS = 3,
  RS_STATUS_ALL_COLLINEAR = 4,
  RS_STATUS_NON_FINITE = 5,
  RS_STATUS_IO = 6,
  RS_STATUS_PIPELINE = 7,
  RS_STATUS_INTERNAL = 99,
} RsStatus;

/**
 * Immutable set of 2D points.
 */
typedef struct RsPointSet RsPointSet;

/**
 * Rangeset of one attribute.
 */
typedef struct RsRangeset RsRangeset;

/**
 * Delaunay triangulation of a point set.
 */
typedef struct RsTriangulation RsTriangulation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread; do not free it.
 */
const char *rs_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *rs_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void rs_string_free(char *s);

/**
 * Copies `n` points from the coordinate arrays `xs` and `ys`.
 *
 * # Safety
 * `xs` and `ys` must point to `n` readable doubles; `out` must be writable.
 */
enum RsStatus rs_pointset_new(const double *xs,
                              const double *ys,
                              size_t n,
                              struct RsPointSet **out);

/**
 * # Safety
 * `ps` must be NULL or a handle from `rs_pointset_new` not yet freed.
 */
void rs_pointset_free(struct RsPointSet *ps);

/**
 * Number of points; 0 for NULL.
 *
 * # Safety
 * `ps` must be NULL or a live handle.
 */
size_t rs_pointset_len(const struct RsPointSet *ps);

/**
 * Suggested filter threshold from the spanning-tree edge lengths.
 *
 * # Safety
 * `ps` must be a live handle and `out` writable.
 */
enum RsStatus rs_suggest_epsilon(const struct RsPointSet *ps, double *out);

/**
 * Delaunay triangulation of `ps`.
 *
 * # Safety
 * `ps` must be a live handle and `out` writable.
 */
enum RsStatus rs_triangulate(const struct RsPointSet *ps, struct RsTriangulation **out);

/**
 * # Safety
 * `t` must be NULL or a live handle.
 */
void rs_triangulation_free(struct RsTriangulation *t);

/**
 * # Safety
 * `t` must be NULL or a live handle.
 */
size_t rs_triangulation_triangle_count(const struct RsTriangulation *t);

/**
 * Copies up to `capacity` triangles into `buf` as consecutive vertex-id
 * triples (counter-clockwise). Writes the number of triangles copied to
 * `written`.
 *
 * # Safety
 * `t` must be a live handle; `buf` must hold `3 * capacity` values.
 */
enum RsStatus rs_triangulation_triangles(const struct RsTriangulation *t,
                                         size_t *buf,
                                         size_t capacity,
                                         size_t *written);

/**
 * Longest Delaunay edge; 0 for NULL.
 *
 * # Safety
 * `t` must be NULL or a live handle.
 */
double rs_triangulation_max_edge_length(const struct RsTriangulation *t);

/**
 * Rangeset of a continuous attribute: `values` (one per point) are cut into
 * `bins` equal-width bins over their range and every bin is filtered at
 * `epsilon`. A negative `epsilon` selects the suggested value. Missing values
 * are NaN.
 *
 * # Safety
 * `ps` must be a live handle, `values` must point to `rs_pointset_len(ps)`
 * doubles, and `out` must be writable.
 */
enum RsStatus rs_rangeset_compute(const struct RsPointSet *ps,
                                  const double *values,
                                  size_t bins,
                                  double epsilon,
                                  struct RsRangeset **out);

/**
 * # Safety
 * `r` must be NULL or a live handle.
 */
void rs_rangeset_free(struct RsRangeset *r);

/**
 * Threshold the rangeset was computed at; NaN for NULL.
 *
 * # Safety
 * `r` must be NULL or a live handle.
 */
double rs_rangeset_epsilon(const struct RsRangeset *r);

/**
 * # Safety
 * `r` must be NULL or a live handle.
 */
size_t rs_rangeset_bin_count(const struct RsRangeset *r);

/**
 * Total number of contours over all bins.
 *
 * # Safety
 * `r` must be NULL or a live handle.
 */
size_t rs_rangeset_polygon_count(const struct RsRangeset *r);

/**
 * Outliers in bin `bin`; 0 when out of range.
 *
 * # Safety
 * `r` must be NULL or a live handle.
 */
size_t rs_rangeset_outlier_count(const struct RsRangeset *r, size_t bin);

/**
 * JSON serialization of the rangeset. Free the result with `rs_string_free`.
 *
 * # Safety
 * `r` must be a live handle and `out` writable.
 */
enum RsStatus rs_rangeset_to_json(const struct RsRangeset *r, char **out);

/**
 * Runs the batch pipeline for the TOML config at `config_path` and returns
 * the rangeset document as JSON. Free the result with `rs_string_free`.
 *
 * # Safety
 * `config_path` must be a NUL-terminated UTF-8 path and `out` writable.
 */
enum RsStatus rs_pipeline_run(const char *config_path, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RANGESETS_H */

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef FINTRACE_H
#define FINTRACE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FtStatus {
  FT_STATUS_OK = 0,
  FT_STATUS_NULL_POINTER = 1,
  FT_STATUS_INVALID_ARGUMENT = 2,
  FT_STATUS_IO = 3,
  FT_STATUS_DECODE = 4,
  // End point is not right of the start point.
  FT_STATUS_ORIENTATION = 5,
  FT_STATUS_OUT_OF_BOUNDS = 6,
  FT_STATUS_PANIC = 99,
} FtStatus;

typedef enum FtFamily {
  FT_FAMILY_A = 0,
  FT_FAMILY_B = 1,
  FT_FAMILY_C = 2,
} FtFamily;

typedef enum FtTier {
  FT_TIER_AUTO = 0,
  FT_TIER_APPROACH1 = 1,
  FT_TIER_APPROACH2 = 2,
} FtTier;

typedef enum FtMethod {
  FT_METHOD_NONE = 0,
  FT_METHOD_APPROACH1 = 1,
  FT_METHOD_APPROACH2 = 2,
  FT_METHOD_MANUAL = 3,
} FtMethod;

// Opaque RGB image.
typedef struct FtImage FtImage;

// Opaque trace result.
typedef struct FtResult FtResult;

typedef struct FtEndpoints {
  int32_t start_x;
  int32_t start_y;
  int32_t end_x;
  int32_t end_y;
} FtEndpoints;

typedef struct FtRect {
  uint32_t x;
  uint32_t y;
  uint32_t w;
  uint32_t h;
} FtRect;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last non-OK status on this thread; empty after success.
// Valid until the next call into this library on the same thread.
const char *ft_last_error(void);

// Library version as a static NUL-terminated string.
const char *ft_version(void);

// Loads a PNG or JPEG file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum FtStatus ft_image_load(const char *path, struct FtImage **out);

// Copies a packed 8-bit RGB buffer of `width * height * 3` bytes.
//
// # Safety
// `data` must point to `len` readable bytes; `out` must be writable.
enum FtStatus ft_image_from_rgb(const uint8_t *data,
                                size_t len,
                                uint32_t width,
                                uint32_t height,
                                struct FtImage **out);

// # Safety
// `img` must be null or a live handle.
uint32_t ft_image_width(const struct FtImage *img);

// # Safety
// `img` must be null or a live handle.
uint32_t ft_image_height(const struct FtImage *img);

// # Safety
// `img` must be null or a handle not yet freed.
void ft_image_free(struct FtImage *img);

// Generates a seeded synthetic fin scene and its ground-truth endpoints.
//
// # Safety
// `out` and `endpoints` must be writable.
enum FtStatus ft_synth_scene(enum FtFamily family,
                             uint64_t seed,
                             struct FtImage **out,
                             struct FtEndpoints *endpoints);

// Traces the fin between the endpoints (full-resolution pixels).
// `viewport` may be null. `FT_STATUS_OK` only means the request was
// valid; check [`ft_result_succeeded`].
//
// # Safety
// `img` must be a live handle, `viewport` null or readable, `out` writable.
enum FtStatus ft_trace(const struct FtImage *img,
                       struct FtEndpoints endpoints,
                       const struct FtRect *viewport,
                       enum FtTier tier,
                       struct FtResult **out);

// # Safety
// `res` must be null or a live handle.
bool ft_result_succeeded(const struct FtResult *res);

// Method of the last approach attempted.
//
// # Safety
// `res` must be null or a live handle.
enum FtMethod ft_result_method(const struct FtResult *res);

// Threshold of the last approach attempted, or -1 if none was chosen.
//
// # Safety
// `res` must be null or a live handle.
int32_t ft_result_threshold(const struct FtResult *res);

// Number of outline points (0 on failure).
//
// # Safety
// `res` must be null or a live handle.
size_t ft_result_point_count(const struct FtResult *res);

// Copies up to `capacity` points as interleaved `x, y` pairs into `xy`
// (which must hold `2 * capacity` ints). Returns the number copied.
//
// # Safety
// `res` must be a live handle and `xy` writable for `2 * capacity` ints.
size_t ft_result_points(const struct FtResult *res, int32_t *xy, size_t capacity);

// Full result, diagnostics included, as JSON. Free with
// [`ft_string_free`]. Null if `res` is null.
//
// # Safety
// `res` must be null or a live handle.
char *ft_result_json(const struct FtResult *res);

// # Safety
// `res` must be null or a handle not yet freed.
void ft_result_free(struct FtResult *res);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void ft_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FINTRACE_H */

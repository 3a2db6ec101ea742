#ifndef TRISBF_H
#define TRISBF_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TrisbfDamping {
  // Weight exp(-p^2 k).
  TRISBF_DAMPING_EXP = 0,
  // Weight exp(-(p k)^2).
  TRISBF_DAMPING_GAUSS = 1,
} TrisbfDamping;

typedef enum TrisbfMethod {
  // Nested sums for Gaussian odd or low powers, recursion otherwise.
  TRISBF_METHOD_AUTO = 0,
  TRISBF_METHOD_RECURSION = 1,
  TRISBF_METHOD_HANKEL_BOWMAN = 2,
  TRISBF_METHOD_QUADRATURE = 3,
} TrisbfMethod;

// Outcome of a call.
typedef enum TrisbfStatus {
  TRISBF_STATUS_OK = 0,
  TRISBF_STATUS_NULL_POINTER = 1,
  // Input violates a documented constraint.
  TRISBF_STATUS_INVALID_INPUT = 2,
  // Reality, convergence or tolerance failure.
  TRISBF_STATUS_NUMERICAL = 3,
  // Order, power or cost caps exceeded.
  TRISBF_STATUS_LIMIT_EXCEEDED = 4,
  // Output buffer too small.
  TRISBF_STATUS_BUFFER_TOO_SMALL = 5,
  // Internal panic, caught at the boundary.
  TRISBF_STATUS_INTERNAL = 6,
} TrisbfStatus;

// Opaque evaluation context holding the kernel caches.
typedef struct TrisbfEvaluator TrisbfEvaluator;

// `∫ k^n w(k) j_l1(k r1) j_l2(k r2) j_l3(k r3) dk`.
typedef struct TrisbfSpec {
  int32_t ell[3];
  double r[3];
  enum TrisbfDamping damping;
  double p;
  uint32_t n;
} TrisbfSpec;

typedef struct TrisbfResult {
  double value;
  double im_residual;
  double error_estimate;
  uint64_t kernel_calls;
  // The method that produced the value.
  int32_t method;
  // Non-zero when the result carries quality flags.
  int32_t flagged;
} TrisbfResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// New evaluator; free it with [`trisbf_evaluator_free`].
struct TrisbfEvaluator *trisbf_evaluator_new(void);

// # Safety
// `ev` must come from [`trisbf_evaluator_new`] and not be used again.
// Null is ignored.
void trisbf_evaluator_free(struct TrisbfEvaluator *ev);

// Drops cached kernels.
//
// # Safety
// `ev` must be a live evaluator or null.
enum TrisbfStatus trisbf_evaluator_clear(struct TrisbfEvaluator *ev);

// Evaluates one integral. `ev` may be null to use a process-wide
// evaluator. `tol` is only read for quadrature.
//
// # Safety
// `spec` and `out` must be valid pointers; `ev` live or null.
enum TrisbfStatus trisbf_eval(const struct TrisbfEvaluator *ev,
                              const struct TrisbfSpec *spec,
                              enum TrisbfMethod method,
                              double tol,
                              struct TrisbfResult *out);

// Evaluates over a regular grid, `axes` holding (start, stop, count)
// per radius with counts as doubles. Values are written row-major with
// `r1` outermost; `len` must be at least the product of the counts.
// `threads` of zero uses the default pool.
//
// # Safety
// `ev` live or null; `axes` points to 9 doubles; `values` to `len`
// doubles.
enum TrisbfStatus trisbf_grid(const struct TrisbfEvaluator *ev,
                              const double *axes,
                              const int32_t *ell,
                              enum TrisbfDamping damping_kind,
                              double p,
                              uint32_t n,
                              uint32_t threads,
                              double *values,
                              uintptr_t len);

// Copies the calling thread's last error message into `buf` as a
// NUL-terminated string, truncating to fit. Returns the full message
// length excluding the terminator.
//
// # Safety
// `buf` must hold `len` bytes, or be null with `len` zero.
uintptr_t trisbf_last_error_message(char *buf, uintptr_t len);

// Library version as a static NUL-terminated string.
const char *trisbf_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TRISBF_H */

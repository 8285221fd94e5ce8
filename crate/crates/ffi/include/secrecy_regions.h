#ifndef SECRECY_REGIONS_H
#define SECRECY_REGIONS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum SrStatus {
  SR_STATUS_OK = 0,
  SR_STATUS_NULL_POINTER = 1,
  SR_STATUS_INVALID_UTF8 = 2,
  SR_STATUS_PARSE = 3,
  SR_STATUS_INVALID_INPUT = 4,
  SR_STATUS_UNKNOWN_REGION = 5,
  SR_STATUS_RESOURCE_LIMIT = 6,
  SR_STATUS_SOLVER = 7,
  SR_STATUS_PANIC = 8,
} SrStatus;

// Opaque joint distribution.
typedef struct SrJoint SrJoint;

// Opaque inequality system.
typedef struct SrSystem SrSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. Valid until the
// next failing call on the same thread; do not free.
const char *sr_last_error(void);

// Library version as a static string; do not free.
const char *sr_version(void);

// # Safety
// `s` must come from this library and not have been freed; null is a no-op.
void sr_string_free(char *s);

// Parses a system in the text format.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a writable pointer.
enum SrStatus sr_system_parse(const char *text, struct SrSystem **out);

// Builtin system by id; parameterized regions also need `tau1`, `tau2`
// (pass NaN otherwise).
//
// # Safety
// `id` must be a NUL-terminated string and `out` a writable pointer.
enum SrStatus sr_system_builtin(const char *id, double tau1, double tau2, struct SrSystem **out);

// # Safety
// `sys` must come from this library and not have been freed; null is a no-op.
void sr_system_free(struct SrSystem *sys);

// Number of rate inequalities and of assumptions.
//
// # Safety
// `sys` must be a live handle; the outputs must be writable.
enum SrStatus sr_system_counts(const struct SrSystem *sys,
                               uintptr_t *n_ineqs,
                               uintptr_t *n_assumptions);

// Canonical text form; free the result with `sr_string_free`.
//
// # Safety
// `sys` must be a live handle and `out` writable.
enum SrStatus sr_system_format(const struct SrSystem *sys, char **out);

// JSON form; free the result with `sr_string_free`.
//
// # Safety
// `sys` must be a live handle and `out` writable.
enum SrStatus sr_system_to_json(const struct SrSystem *sys, char **out);

// Eliminates the comma separated `eliminate` variables from `raw`.
// `mode` is `"farkas"` or `"farkas+shannon"` (null selects the latter).
// When `target` is non-null the result is compared with it and
// `equal` receives 1 or 0; otherwise `equal` is left untouched and may be null.
//
// # Safety
// Handles must be live or null where allowed; strings NUL-terminated;
// `out` writable.
enum SrStatus sr_derive(const struct SrSystem *raw,
                        const char *eliminate,
                        const char *mode,
                        const struct SrSystem *target,
                        struct SrSystem **out,
                        int32_t *equal);

// Joint from JSON, either `{variables, probs}` or a factorization
// `{variables, factors}`.
//
// # Safety
// `json` must be NUL-terminated and `out` writable.
enum SrStatus sr_joint_from_json(const char *json, struct SrJoint **out);

// # Safety
// `joint` must come from this library and not have been freed; null is a no-op.
void sr_joint_free(struct SrJoint *joint);

// Value in bits of an information expression such as `I(X;Y|Z) - H(X)`.
//
// # Safety
// `joint` must be a live handle, `expr` NUL-terminated and `out` writable.
enum SrStatus sr_info_eval(const struct SrJoint *joint, const char *expr, double *out);

// Evaluates a region on a joint. `region` is a builtin id or system text;
// `binding_json` maps region symbols to joint variables and may be null.
// Writes the evaluation as JSON and sets `assumptions_hold` to 1 or 0.
//
// # Safety
// Handles live, strings NUL-terminated or null where allowed, outputs writable.
enum SrStatus sr_evaluate(const char *region,
                          const struct SrJoint *joint,
                          const char *binding_json,
                          double tau1,
                          double tau2,
                          char **out_json,
                          int32_t *assumptions_hold);

// Codebook counting experiment; configuration and result are JSON.
//
// # Safety
// `config_json` NUL-terminated, `out_json` writable.
enum SrStatus sr_simulate_lemma1(const char *config_json, char **out_json);

// Random binning experiment; configuration and result are JSON.
//
// # Safety
// `config_json` NUL-terminated, `out_json` writable.
enum SrStatus sr_simulate_osrb(const char *config_json, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SECRECY_REGIONS_H */

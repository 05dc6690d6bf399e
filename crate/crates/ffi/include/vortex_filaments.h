#ifndef VORTEX_FILAMENTS_H
#define VORTEX_FILAMENTS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes returned by every fallible call.
 */
typedef enum VfStatus {
  VF_STATUS_OK = 0,
  VF_STATUS_NULL_POINTER = 1,
  VF_STATUS_INVALID_ARGUMENT = 2,
  VF_STATUS_COLLISION = 3,
  VF_STATUS_NEAR_BOUNDARY = 4,
  VF_STATUS_RESOLUTION = 5,
  VF_STATUS_NOT_CONVERGED = 6,
  VF_STATUS_SAMPLING_FAILED = 7,
  VF_STATUS_IO = 8,
  VF_STATUS_MALFORMED = 9,
  VF_STATUS_BUFFER_TOO_SMALL = 10,
  VF_STATUS_PANIC = 11,
} VfStatus;

typedef enum VfDomainKind {
  VF_DOMAIN_KIND_DISK = 0,
  VF_DOMAIN_KIND_RECTANGLE = 1,
} VfDomainKind;

typedef enum VfRadialMode {
  VF_RADIAL_MODE_CORE_MIN = 0,
  VF_RADIAL_MODE_ZETA = 1,
} VfRadialMode;

/*
 Opaque 2D field on a grid.
 */
typedef struct VfField VfField;

/*
 Opaque filament configuration.
 */
typedef struct VfFilaments VfFilaments;

typedef struct VfPoint {
  double x;
  double y;
} VfPoint;

/*
 A weighted point mass.
 */
typedef struct VfAtom {
  double x;
  double y;
  double weight;
} VfAtom;

/*
 A disk of radius `a`, or the rectangle `[−a, a] × [−b, b]`.
 */
typedef struct VfDomain {
  enum VfDomainKind kind;
  double a;
  double b;
} VfDomain;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Copies the calling thread's last error message, NUL-terminated, into
 `buf`; returns the full message length in bytes (excluding the NUL).

 # Safety
 `buf` must be null or valid for `len` bytes.
 */
uintptr_t vf_last_error_message(char *buf, uintptr_t len);

/*
 `h_ε = |log ε|^{−1/2}` for `0 < ε < 1`.

 # Safety
 `result` must be a valid pointer.
 */
enum VfStatus vf_h_eps(double epsilon, double *result);

/*
 Builds filaments from `(segments + 1) · n` node-major positions.

 # Safety
 `positions` must hold `(segments + 1) · n` points; `handle` must be valid.
 */
enum VfStatus vf_filaments_new(uintptr_t n,
                               double height,
                               uintptr_t segments,
                               const struct VfPoint *positions,
                               struct VfFilaments **handle);

/*
 Releases a filament handle; null is ignored.

 # Safety
 `handle` must come from this library and not be used afterwards.
 */
void vf_filaments_free(struct VfFilaments *handle);

/*
 Writes the filament count and node count.

 # Safety
 All pointers must be valid.
 */
enum VfStatus vf_filaments_shape(const struct VfFilaments *handle, uintptr_t *n, uintptr_t *nodes);

/*
 Copies the node-major positions into `buf` (capacity `len` points).

 # Safety
 `buf` must be valid for `len` points.
 */
enum VfStatus vf_filaments_positions(const struct VfFilaments *handle,
                                     struct VfPoint *buf,
                                     uintptr_t len);

/*
 Discrete reduced energy; `+∞` when a node has coinciding filaments.

 # Safety
 All pointers must be valid.
 */
enum VfStatus vf_g0_energy(const struct VfFilaments *handle, double *result);

/*
 Minimizes the reduced energy between the endpoint sets `bottom` and `top`
 starting from straight filaments.

 # Safety
 `bottom` and `top` must hold `n` points; `handle` must be valid.
 */
enum VfStatus vf_minimize(uintptr_t n,
                          const struct VfPoint *bottom,
                          const struct VfPoint *top,
                          double height,
                          uintptr_t segments,
                          double tolerance,
                          struct VfFilaments **handle);

/*
 Relabeling-quotient distance between two `n`-point sets; the optimal
 matching sends `p[i]` to `q[permutation[i]]`. `permutation` may be null.

 # Safety
 `p`, `q` must hold `n` points and `permutation` (if not null) `n` entries.
 */
enum VfStatus vf_dx_distance(uintptr_t n,
                             const struct VfPoint *p,
                             const struct VfPoint *q,
                             double *distance,
                             uintptr_t *permutation);

/*
 Flat norm of `μ − ν` for atomic measures.

 # Safety
 `mu` and `nu` must hold `mu_len` and `nu_len` atoms.
 */
enum VfStatus vf_flat_norm(const struct VfAtom *mu,
                           uintptr_t mu_len,
                           const struct VfAtom *nu,
                           uintptr_t nu_len,
                           double *result);

/*
 Extrapolated core constant `γ` from a strictly decreasing ε list (at least 3).

 # Safety
 `epsilons` must hold `len` values.
 */
enum VfStatus vf_gamma_constant(const double *epsilons, uintptr_t len, double *result);

/*
 Renormalized energy of distinct points in a disk of the given radius.

 # Safety
 `points_ptr` must hold `n` points.
 */
enum VfStatus vf_w_omega_disk(double radius,
                              const struct VfPoint *points_ptr,
                              uintptr_t n,
                              double *result);

/*
 Trial field with unit vortices at `points_ptr` on a uniform grid.

 # Safety
 `points_ptr` must hold `n` points; `handle` must be valid.
 */
enum VfStatus vf_trial_slice(struct VfDomain dom,
                             double spacing,
                             const struct VfPoint *points_ptr,
                             uintptr_t n,
                             double epsilon,
                             enum VfRadialMode mode,
                             struct VfField **handle);

/*
 Releases a field handle; null is ignored.

 # Safety
 `handle` must come from this library and not be used afterwards.
 */
void vf_field_free(struct VfField *handle);

/*
 `∫_ω e_ε` of a field.

 # Safety
 All pointers must be valid.
 */
enum VfStatus vf_field_energy(const struct VfField *handle, double *result);

/*
 Detected vortices as atoms of weight `π·degree`. `count` receives the
 number of atoms; if it exceeds `len` nothing is copied and
 `BufferTooSmall` is returned.

 # Safety
 `buf` must be valid for `len` atoms (may be null when `len` is 0).
 */
enum VfStatus vf_detect_vortices(const struct VfField *handle,
                                 struct VfAtom *buf,
                                 uintptr_t len,
                                 uintptr_t *count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VORTEX_FILAMENTS_H */

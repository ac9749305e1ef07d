/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef HCB_ENTROPY_H
#define HCB_ENTROPY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum HcbStatus {
  HCB_STATUS_OK = 0,
  HCB_STATUS_DOMAIN = 1,
  HCB_STATUS_SHAPE = 2,
  HCB_STATUS_SECTOR = 3,
  HCB_STATUS_BLOCK_LABEL = 4,
  HCB_STATUS_TOO_LARGE = 5,
  HCB_STATUS_CLUSTER_AMBIGUITY = 6,
  HCB_STATUS_NO_CONVERGENCE = 7,
  HCB_STATUS_ARGUMENT = 8,
  HCB_STATUS_NULL_POINTER = 9,
  HCB_STATUS_INDEX_OUT_OF_RANGE = 10,
  HCB_STATUS_PANIC = 11,
} HcbStatus;

// How sector spectra are combined at finite temperature.
typedef enum HcbThermalMode {
  HCB_THERMAL_MODE_MEAN_OF_ENTROPIES = 0,
  HCB_THERMAL_MODE_ENTROPY_OF_MEAN = 1,
} HcbThermalMode;

// Arithmetic used for the eigenvalue tables.
typedef enum HcbBackend {
  // Rational up to L = 200, log-space floats above.
  HCB_BACKEND_AUTO = 0,
  HCB_BACKEND_RATIONAL = 1,
  HCB_BACKEND_LOG_FLOAT = 2,
} HcbBackend;

// Eigenvalue table of one sector.
typedef struct HcbSpectrum HcbSpectrum;

// Cached sector spectra for temperature sweeps.
typedef struct HcbThermalModel HcbThermalModel;

// One row of a sector spectrum.
typedef struct HcbEigenvalue {
  size_t k;
  size_t s;
  double lambda;
  // May round for very large blocks.
  double degeneracy;
} HcbEigenvalue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *hcb_last_error_message(void);

// Clears the stored error message.
void hcb_clear_error(void);

// Library version as a static NUL-terminated string.
const char *hcb_version(void);

// Binary entropy in bits.
//
// # Safety
// `out` must be valid for writes.
enum HcbStatus hcb_binary_entropy(double x, double *out);

// Inverse temperature at which the chemical-potential parameter equals `mu`.
//
// # Safety
// `out` must be valid for writes.
enum HcbStatus hcb_beta_star(double mu, double *out);

// # Safety
// `out` must be valid for writes.
enum HcbStatus hcb_critical_temperature(double p, double *out);

// # Safety
// `out` must be valid for writes.
enum HcbStatus hcb_mu_star(double beta, double p, double *out);

// # Safety
// `out` must be valid for writes.
enum HcbStatus hcb_order_parameter(double p, double mu, double *out);

// # Safety
// `out` must be valid for writes.
enum HcbStatus hcb_free_energy_density(double beta, double p, double *out);

// Block entropy in bits of `n` sites in the thermodynamic limit.
//
// # Safety
// `out` must be valid for writes.
enum HcbStatus hcb_limit_block_entropy(double p, double mu, size_t n, double *out);

// # Safety
// `out` must be valid for writes.
enum HcbStatus hcb_sector_energy(size_t sites, size_t particles, size_t r, double *out);

// Block entropy in bits of a finite lattice at inverse temperature `beta`
// (`INFINITY` for the ground state).
//
// # Safety
// `out` must be valid for writes.
enum HcbStatus hcb_thermal_block_entropy(size_t sites,
                                         size_t particles,
                                         size_t block,
                                         double beta,
                                         enum HcbThermalMode thermal_mode,
                                         enum HcbBackend arith,
                                         double *out);

// Builds the eigenvalue table of sector `r`.
//
// # Safety
// `out` must be valid for writes. The handle is released with
// [`hcb_spectrum_free`].
enum HcbStatus hcb_spectrum_new(size_t sites,
                                size_t particles,
                                size_t block,
                                size_t r,
                                enum HcbBackend arith,
                                struct HcbSpectrum **out);

// # Safety
// `spectrum` must come from [`hcb_spectrum_new`] and not be used afterwards.
void hcb_spectrum_free(struct HcbSpectrum *spectrum);

// Number of rows; 0 for a NULL handle.
//
// # Safety
// `spectrum` must be NULL or a live handle.
size_t hcb_spectrum_len(const struct HcbSpectrum *spectrum);

// # Safety
// `spectrum` must be a live handle and `out` valid for writes.
enum HcbStatus hcb_spectrum_get(const struct HcbSpectrum *spectrum,
                                size_t index,
                                struct HcbEigenvalue *out);

// Exact eigenvalue of row `index` as a `"num/den"` string, or NULL for the
// float backend. Release with [`hcb_string_free`].
//
// # Safety
// `spectrum` must be NULL or a live handle.
char *hcb_spectrum_exact(const struct HcbSpectrum *spectrum, size_t index);

// # Safety
// `spectrum` must be a live handle and `out` valid for writes.
enum HcbStatus hcb_spectrum_trace(const struct HcbSpectrum *spectrum, double *out);

// # Safety
// `spectrum` must be a live handle and `out` valid for writes.
enum HcbStatus hcb_spectrum_entropy(const struct HcbSpectrum *spectrum, double *out);

// # Safety
// `s` must be NULL or a string returned by this library.
void hcb_string_free(char *s);

// # Safety
// `out` must be valid for writes. Release with [`hcb_thermal_model_free`].
enum HcbStatus hcb_thermal_model_new(size_t sites,
                                     size_t particles,
                                     size_t block,
                                     enum HcbBackend arith,
                                     struct HcbThermalModel **out);

// # Safety
// `model` must be a live handle and `out` valid for writes.
enum HcbStatus hcb_thermal_model_entropy(const struct HcbThermalModel *model,
                                         double beta,
                                         enum HcbThermalMode thermal_mode,
                                         double *out);

// # Safety
// `model` must come from [`hcb_thermal_model_new`] and not be used afterwards.
void hcb_thermal_model_free(struct HcbThermalModel *model);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HCB_ENTROPY_H */

#ifndef SPINKINK_H
#define SPINKINK_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum SkBoundary {
  SK_BOUNDARY_FIXED = 0,
  SK_BOUNDARY_PERIODIC = 1,
} SkBoundary;

typedef enum SkStatus {
  SK_STATUS_OK = 0,
  SK_STATUS_INVALID_ARGUMENT = 1,
  SK_STATUS_REGIME = 2,
  SK_STATUS_NUMERICAL = 3,
  SK_STATUS_IO = 4,
  SK_STATUS_NULL_POINTER = 5,
  SK_STATUS_PANIC = 6,
} SkStatus;

typedef struct SkKinkSpectrum SkKinkSpectrum;

typedef struct SkM0Engine SkM0Engine;

typedef struct SkSpinChain SkSpinChain;

// Chain parameters: exchange J, anisotropy D, field g mu_B B, lattice constant a, hbar.
typedef struct SkChainParams {
  double j;
  double d;
  double gmub_b;
  double a;
  double hbar;
} SkChainParams;

// Quantization scales: Feynman time t, mass scale r, transverse extent l, hbar, dimension d.
typedef struct SkQuantParams {
  double t;
  double r;
  double l;
  double hbar;
  uint32_t d;
} SkQuantParams;

typedef struct SkComplexCorrection {
  double re;
  double im;
  double error_bar;
} SkComplexCorrection;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL-terminated, truncated to `len`).
// Returns the full message length without the NUL, or 0 when there is none.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t sk_last_error_message(char *buf, size_t len);

void sk_clear_error(void);

// Library version as a static NUL-terminated string.
const char *sk_version(void);

// K(m) and E(m) for m < 1.
//
// # Safety
// `k` and `e` must be valid for writes.
enum SkStatus sk_complete_elliptic(double m, double *k, double *e);

// sn, cn, dn of (u | m) for m < 1.
//
// # Safety
// `out` must be valid for three writes.
enum SkStatus sk_jacobi_sncndn(double u, double m, double *out);

// Printed kink energy 11 J m V^2 / 12 for the chain parameters and time scale `t`.
//
// # Safety
// `out` must be valid for writes.
enum SkStatus sk_kink_energy(struct SkChainParams params, double t, double *out);

// Closed-form one-loop correction in rescaled variables; `q.r <= 0` selects the mass scale |A m^2| = 1.
//
// # Safety
// `out` must be valid for writes.
enum SkStatus sk_delta_e_closed_form(struct SkChainParams params,
                                     double time_scale,
                                     struct SkQuantParams q,
                                     double *out);

// Closed-form correction in chain parameters (independent of hbar).
//
// # Safety
// `out` must be valid for writes.
enum SkStatus sk_delta_e_physical(uint32_t d, struct SkChainParams params, double l, double *out);

// Subtracted heat trace of the kink fluctuation operator in closed form.
double sk_kink_trace(double m, double tau);

// Finite-difference spectrum of -d^2 + 4m^2 - 6m^2 sech^2(mz) on [-L, L] with `n` interior points.
//
// # Safety
// `out` must be valid for writes; the handle is released with `sk_kink_spectrum_free`.
enum SkStatus sk_kink_spectrum_new(double m,
                                   double half_width,
                                   size_t n,
                                   struct SkKinkSpectrum **out);

// Number of eigenvalues below the continuum edge.
//
// # Safety
// `s` must be a live handle or null.
size_t sk_kink_spectrum_bound_count(const struct SkKinkSpectrum *s);

// Copies up to `len` eigenvalues starting at index `first` (ascending) into `buf`; returns the count copied.
//
// # Safety
// `s` must be a live handle or null; `buf` valid for `len` writes.
size_t sk_kink_spectrum_eigenvalues(const struct SkKinkSpectrum *s,
                                    size_t first,
                                    double *buf,
                                    size_t len);

// Lowest eigenvalue at or above 4m^2, NaN for a null handle.
//
// # Safety
// `s` must be a live handle or null.
double sk_kink_spectrum_continuum_lowest(const struct SkKinkSpectrum *s);

// # Safety
// `s` must come from `sk_kink_spectrum_new` and not be used afterwards.
void sk_kink_spectrum_free(struct SkKinkSpectrum *s);

// Chain of `n` spins, all along +x (the field direction).
//
// # Safety
// `out` must be valid for writes; release with `sk_spin_chain_free`.
enum SkStatus sk_spin_chain_new(size_t n,
                                struct SkChainParams params,
                                enum SkBoundary boundary,
                                struct SkSpinChain **out);

// Replaces the state by the static kink V tanh(z/w) centred mid-chain; `eom_width` picks
// w = sqrt(2)/m instead of 1/m.
//
// # Safety
// `c` must be a live handle.
enum SkStatus sk_spin_chain_embed_kink(struct SkSpinChain *c, bool eom_width);

// Sets one spin (normalized on entry).
//
// # Safety
// `c` must be a live handle.
enum SkStatus sk_spin_chain_set_site(struct SkSpinChain *c, size_t i, double x, double y, double z);

// Advances by `steps` RK4 steps of size `dt`.
//
// # Safety
// `c` must be a live handle.
enum SkStatus sk_spin_chain_step(struct SkSpinChain *c, double dt, size_t steps);

// Lattice energy of the current state.
//
// # Safety
// `c` must be a live handle; `out` valid for writes.
enum SkStatus sk_spin_chain_energy(const struct SkSpinChain *c, double *out);

// Number of sites, 0 for a null handle.
//
// # Safety
// `c` must be a live handle or null.
size_t sk_spin_chain_len(const struct SkSpinChain *c);

// Elapsed evolution time, NaN for a null handle.
//
// # Safety
// `c` must be a live handle or null.
double sk_spin_chain_time(const struct SkSpinChain *c);

// Copies the spins as x0 y0 z0 x1 ... into `buf` (length at least 3 n).
//
// # Safety
// `c` must be a live handle; `buf` valid for `len` writes.
enum SkStatus sk_spin_chain_sites(const struct SkSpinChain *c, double *buf, size_t len);

// # Safety
// `c` must come from `sk_spin_chain_new` and not be used afterwards.
void sk_spin_chain_free(struct SkSpinChain *c);

// Bromwich inversion for the m^2 = 0 sn wave of scale `b`. The line sits at
// `abscissa_factor` * 2 sqrt(3) b^2; `t_cut` is in units of b^2.
//
// # Safety
// `out` must be valid for writes; release with `sk_m0_engine_free`.
enum SkStatus sk_m0_engine_new(double b,
                               double abscissa_factor,
                               double t_cut,
                               size_t n_nodes,
                               struct SkM0Engine **out);

// Subtracted heat trace gamma(tau) of -d^2 - 6b^2 sn^2(bz; i) over one period.
//
// # Safety
// `e` must be a live handle; `out` valid for writes.
enum SkStatus sk_m0_gamma(const struct SkM0Engine *e, double tau, double *out);

// Laplace transform of the trace in closed form at complex p.
//
// # Safety
// `e` must be a live handle; `re`, `im` valid for writes.
enum SkStatus sk_m0_gamma_hat(const struct SkM0Engine *e,
                              double p_re,
                              double p_im,
                              double *re,
                              double *im);

// One-loop correction of the static sn wave with exchange `j` and anisotropy `d` (< 0).
// Complex because of the unstable band.
//
// # Safety
// `e` must be a live handle; `out` valid for writes.
enum SkStatus sk_m0_delta_e(const struct SkM0Engine *e,
                            double j,
                            double d,
                            struct SkQuantParams q,
                            struct SkComplexCorrection *out);

// # Safety
// `e` must come from `sk_m0_engine_new` and not be used afterwards.
void sk_m0_engine_free(struct SkM0Engine *e);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINKINK_H */

/*
 * C interface to the triwave library.
 *
 * All objects are opaque handles created by a *_create / producer function
 * and released with the matching *_destroy function. Every fallible call
 * returns a tw_status; on failure tw_last_error() describes the problem for
 * the calling thread. Output buffers follow the size-query convention: pass
 * a buffer and its capacity, receive the required count in *needed; a
 * buffer that is too small yields TW_ERR_BUFFER without partial writes.
 */
#ifndef TRIWAVE_H
#define TRIWAVE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TW_API __declspec(dllexport)
#elif defined(__GNUC__)
#define TW_API __attribute__((visibility("default")))
#else
#define TW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tw_status {
  TW_OK = 0,
  TW_ERR_INVALID = 1,   /* rejected input: bad parameters, parse errors */
  TW_ERR_NUMERICAL = 2, /* eigensolver non-convergence */
  TW_ERR_LIMIT = 3,     /* dimension limit exceeded */
  TW_ERR_BUFFER = 4,    /* output buffer too small */
  TW_ERR_INTERNAL = 5
} tw_status;

typedef enum tw_model_kind { TW_TRILINEAR = 0, TW_MICROSCOPIC = 1 } tw_model_kind;

typedef struct tw_model tw_model;
typedef struct tw_spectrum tw_spectrum;
typedef struct tw_scan tw_scan;
typedef struct tw_state tw_state;
typedef struct tw_evolver tw_evolver;
typedef struct tw_operator tw_operator;

TW_API const char* tw_last_error(void);
TW_API const char* tw_version(void);

/* ---- models ---- */

typedef struct tw_microscopic_desc {
  double omega_a, omega_b, omega_c;
  double e0, e1, e2;
  double g_a, g_b, g_c;
} tw_microscopic_desc;

TW_API tw_status tw_model_create_trilinear(double omega_a, double omega_b, double omega_c,
                                           double kappa_re, double kappa_im, tw_model** out);
TW_API tw_status tw_model_create_microscopic(const tw_microscopic_desc* desc, tw_model** out);
TW_API void tw_model_destroy(tw_model* model);
TW_API tw_model_kind tw_model_kind_of(const tw_model* model);

/* Trilinear only: canonical |kappa|, absorbed phase, omega_a - omega_b - omega_c. */
TW_API tw_status tw_model_trilinear_info(const tw_model* model, double* omega, double* kappa,
                                         double* kappa_phase, double* detuning);

/* Microscopic only: atom eliminated to third order. */
TW_API tw_status tw_model_effective(const tw_model* microscopic, tw_model** trilinear_out,
                                    double* kappa_signed, double* stark_a, double* stark_b);
TW_API tw_status tw_model_dispersive_ratios(const tw_model* microscopic, int n_a, int n_b,
                                            double* ratio_a, double* ratio_b);

/* Basis of block (m1, m2): four ints per state (atom level or -1, n_a, n_b, n_c). */
TW_API tw_status tw_model_block_basis(const tw_model* model, int m1, int m2, int* states,
                                      size_t capacity, size_t* needed);

/* ---- spectra ---- */

TW_API tw_status tw_model_block_spectrum(const tw_model* model, int m1, int m2, double tol,
                                         tw_spectrum** out);
TW_API void tw_spectrum_destroy(tw_spectrum* spectrum);
TW_API size_t tw_spectrum_size(const tw_spectrum* spectrum);
TW_API tw_status tw_spectrum_eigenvalues(const tw_spectrum* spectrum, double* values,
                                         size_t capacity, size_t* needed);
TW_API tw_status tw_spectrum_eigenvector(const tw_spectrum* spectrum, size_t index,
                                         double* vector, size_t capacity, size_t* needed);
/* max_i ||A v_i - lambda_i v_i|| and max |v_i . v_j| */
TW_API double tw_spectrum_residual(const tw_spectrum* spectrum);
TW_API double tw_spectrum_orthogonality(const tw_spectrum* spectrum);

/* ---- ground-energy scans ---- */

typedef struct tw_scan_entry {
  int n;
  int block_m1, block_m2;
  double ground_energy;
  double estimate;     /* large-N estimate; trilinear scans only */
  int has_lower_bound; /* microscopic scans */
  double lower_bound;
} tw_scan_entry;

TW_API tw_status tw_model_ground_scan(const tw_model* model, int n_max, tw_scan** out);
TW_API void tw_scan_destroy(tw_scan* scan);
TW_API size_t tw_scan_count(const tw_scan* scan);
TW_API tw_status tw_scan_entry_at(const tw_scan* scan, size_t index, tw_scan_entry* out);
/* *has_crossing = 0 when every ground energy stayed non-negative. */
TW_API void tw_scan_crossing(const tw_scan* scan, int* has_crossing, int* crossing_n);
TW_API void tw_scan_estimate_crossing(const tw_scan* scan, int* has_estimate, double* estimate);
TW_API int tw_scan_bound_respected(const tw_scan* scan);

/* ---- closed-form coherent-state energies ---- */

TW_API tw_status tw_coherent_energy_trilinear(const tw_model* model, const double field[6],
                                              double* energy);
TW_API tw_status tw_worst_phase_energy(const tw_model* model, double r, double* energy);
TW_API tw_status tw_eq7_estimate(const tw_model* model, int n, double* energy);
/* field = {re a, im a, re b, im b, re c, im c}; atom = {re c0, im c0, ..., im c2} */
TW_API tw_status tw_coherent_energy_microscopic(const tw_model* model, const double field[6],
                                                const double atom[6], double* energy);
TW_API tw_status tw_min_atom_energy_microscopic(const tw_model* model, double alpha, double beta,
                                                double gamma, double* energy);
TW_API tw_status tw_microscopic_energy_lower_bound(const tw_model* model, double r,
                                                   double* bound);

/* ---- states and evolution ---- */

/* atom_level is ignored for the trilinear model. */
TW_API tw_status tw_state_create_fock(tw_model_kind kind, int atom_level, int n_a, int n_b,
                                      int n_c, tw_state** out);
TW_API tw_status tw_state_create_coherent(tw_model_kind kind, const double field[6],
                                          double tail_epsilon, tw_state** out);
TW_API void tw_state_destroy(tw_state* state);
TW_API size_t tw_state_block_count(const tw_state* state);
TW_API double tw_state_tail_bound(const tw_state* state);

typedef struct tw_record {
  double t;
  double n_a, n_b, n_c;
  double m1, m2;
  double re_bc, im_bc;
  double abs_b, abs_c;
  double energy;
  double tail_bound;
} tw_record;

/* Diagonalizes every block of `initial`; evolution is exact from t = 0. */
TW_API tw_status tw_evolver_create(const tw_model* model, const tw_state* initial, double tol,
                                   tw_evolver** out);
TW_API void tw_evolver_destroy(tw_evolver* evolver);
TW_API tw_status tw_evolver_observe(const tw_evolver* evolver, double t, tw_record* out);
/* Atom level populations at time t (zeros for the trilinear model). */
TW_API tw_status tw_evolver_atom_populations(const tw_evolver* evolver, double t,
                                             double populations[3]);

/* ---- operator DSL ---- */

/* modes: comma-separated letters, or NULL for the letters used in `text`. */
TW_API tw_status tw_operator_parse(const char* text, const char* modes, tw_operator** out);
TW_API void tw_operator_destroy(tw_operator* op);
TW_API size_t tw_operator_mode_count(const tw_operator* op);
TW_API size_t tw_operator_monomial_count(const tw_operator* op);
/* NUL-terminated strings; *needed includes the terminator. */
/* Mode letters in order, e.g. "abc". */
TW_API tw_status tw_operator_modes(const tw_operator* op, char* buffer, size_t capacity,
                                   size_t* needed);
TW_API tw_status tw_operator_canonical(const tw_operator* op, char* buffer, size_t capacity,
                                       size_t* needed);
/* Row-major (monomials x modes). */
TW_API tw_status tw_operator_net_changes(const tw_operator* op, int64_t* values, size_t capacity,
                                         size_t* needed);
/* Row-major (basis size x modes); *needed / mode count gives the basis size. */
TW_API tw_status tw_operator_invariants(const tw_operator* op, int64_t* values, size_t capacity,
                                        size_t* needed);
TW_API tw_status tw_operator_resonance_defects(const tw_operator* op, double* values,
                                               size_t capacity, size_t* needed);

/* A max_dimension of 0 selects the default limit (200000). */
typedef struct tw_sparse_info {
  size_t dimension;
  size_t nonzeros;
  size_t boundary_states;
} tw_sparse_info;

TW_API tw_status tw_operator_sparse_info(const tw_operator* op, const int* cutoffs,
                                         size_t max_dimension, tw_sparse_info* out);
TW_API tw_status tw_operator_commutator_norm(const tw_operator* op, const int64_t* lambda,
                                             const int* cutoffs, size_t max_dimension,
                                             double* out);

typedef struct tw_block_audit {
  size_t dimension;
  size_t blocks;
  size_t cross_block_entries;
  double max_abs_deviation;
} tw_block_audit;

/* Trilinear only: generic sparse assembly versus the block builder. */
TW_API tw_status tw_model_audit_blocks(const tw_model* model, const int cutoffs[3],
                                       size_t max_dimension, tw_block_audit* out);

#ifdef __cplusplus
}
#endif

#endif /* TRIWAVE_H */

#ifndef QAS_H
#define QAS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QasStatus {
  QAS_OK = 0,
  QAS_NULL_POINTER = 1,
  QAS_INVALID_ARGUMENT = 2,
  QAS_INDEX = 3,
  QAS_CAPABILITY = 4,
  QAS_NUMERIC = 5,
  QAS_CONFIG = 6,
  QAS_IO = 7,
  QAS_BUFFER_TOO_SMALL = 8,
  QAS_PANIC = 9,
} QasStatus;

typedef struct QasHamiltonian QasHamiltonian;

typedef struct QasSpace QasSpace;

/**
 * A supernet parameter store bound to the space it was created for.
 */
typedef struct QasStore QasStore;

/**
 * Depolarizing noise: `p1` after single-qubit gates, `p2` after CNOTs.
 * Ignored unless `enabled` is non-zero.
 */
typedef struct QasNoise {
  double p1;
  double p2;
  int32_t enabled;
} QasNoise;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *qas_version(void);

/**
 * Copies the calling thread's last error message into `buf`.
 *
 * # Safety
 * `buf` must be writable for `len` bytes (or null); `needed` null or writable.
 */
enum QasStatus qas_last_error_message(char *buf, size_t len, size_t *needed);

/**
 * The four-qubit H2 Hamiltonian. Release with [`qas_hamiltonian_free`].
 */
struct QasHamiltonian *qas_hamiltonian_h2(void);

/**
 * # Safety
 * `h` must come from this library and not be used afterwards; null is ignored.
 */
void qas_hamiltonian_free(struct QasHamiltonian *h);

/**
 * Smallest eigenvalue by dense diagonalization.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum QasStatus qas_hamiltonian_exact_energy(const struct QasHamiltonian *h, double *out);

/**
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum QasStatus qas_hamiltonian_num_qubits(const struct QasHamiltonian *h, size_t *out);

/**
 * 3 qubits, `RY` pool, pairs (0,1) (0,2) (1,2), three layers.
 */
struct QasSpace *qas_space_classification(void);

/**
 * 4 qubits, `RY`/`RZ` pool, CNOT chain, three layers.
 */
struct QasSpace *qas_space_vqe(void);

/**
 * 4 qubits, `RY`/`RZ` pool, six directed device pairs, three layers.
 */
struct QasSpace *qas_space_vqe_rc(void);

/**
 * Parses a JSON space description.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum QasStatus qas_space_from_json(const char *json, struct QasSpace **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards; null is ignored.
 */
void qas_space_free(struct QasSpace *s);

/**
 * Number of trainable angles of any subnet.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum QasStatus qas_space_num_params(const struct QasSpace *s, size_t *out);

/**
 * Number of subnets; `QAS_NUMERIC` when it does not fit 64 bits.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum QasStatus qas_space_size(const struct QasSpace *s, uint64_t *out);

/**
 * Writes the text form of a uniformly sampled subnet.
 *
 * # Safety
 * `s` must be a live handle; `buf`/`needed` as for [`qas_last_error_message`].
 */
enum QasStatus qas_space_sample(const struct QasSpace *s,
                                uint64_t seed,
                                char *buf,
                                size_t len,
                                size_t *needed);

/**
 * Parses an architecture and writes back its canonical text form.
 *
 * # Safety
 * `s` a live handle, `text` NUL-terminated; `buf`/`needed` as above.
 */
enum QasStatus qas_arch_normalize(const struct QasSpace *s,
                                  const char *text,
                                  char *buf,
                                  size_t len,
                                  size_t *needed);

/**
 * Fresh store with angles uniform in `[0, 2π)`, derived from `seed`.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum QasStatus qas_store_new(const struct QasSpace *s, uint64_t seed, struct QasStore **out);

/**
 * Loads a store saved by the command-line tool; the space must match.
 *
 * # Safety
 * `s` a live handle, `json` NUL-terminated, `out` writable.
 */
enum QasStatus qas_store_from_json(const struct QasSpace *s,
                                   const char *json,
                                   struct QasStore **out);

/**
 * # Safety
 * `st` must come from this library and not be used afterwards; null is ignored.
 */
void qas_store_free(struct QasStore *st);

/**
 * Energy `<H>` of subnet `arch` with the store's shared angles.
 *
 * # Safety
 * Handles live, `arch` NUL-terminated, `noise` null (noiseless) or valid, `out` writable.
 */
enum QasStatus qas_store_evaluate(const struct QasStore *st,
                                  const char *arch,
                                  const struct QasHamiltonian *h,
                                  const struct QasNoise *noise,
                                  double *out);

/**
 * Spearman rank correlation with average ranks for ties.
 *
 * # Safety
 * `r` and `s` readable for `n` doubles, `out` writable.
 */
enum QasStatus qas_spearman(const double *r, const double *s, size_t n, double *out);

/**
 * Kendall's tau-a.
 *
 * # Safety
 * `r` and `s` readable for `n` doubles, `out` writable.
 */
enum QasStatus qas_kendall(const double *r, const double *s, size_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QAS_H */

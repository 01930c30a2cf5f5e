#ifndef LEE_LATTICE_H
#define LEE_LATTICE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. Zero is success.
 */
typedef enum LlStatus {
  LL_STATUS_OK = 0,
  LL_STATUS_NULL_ARGUMENT = 1,
  LL_STATUS_INVALID_ARGUMENT = 2,
  LL_STATUS_PARSE = 3,
  LL_STATUS_BUDGET_EXCEEDED = 4,
  LL_STATUS_PRECONDITION = 5,
  LL_STATUS_IO = 6,
  LL_STATUS_PANIC = 7,
} LlStatus;

typedef enum LlMetric {
  LL_METRIC_LEE = 0,
  LL_METRIC_HAMMING = 1,
} LlMetric;

/**
 * A linear code over Z_m.
 */
typedef struct LlCode LlCode;

/**
 * A full-rank integer lattice in canonical form.
 */
typedef struct LlLattice LlLattice;

/**
 * A weighing matrix.
 */
typedef struct LlMatrix LlMatrix;

/**
 * The discrete transform of a weighing matrix, with its coset table.
 */
typedef struct LlTransform LlTransform;

/**
 * Work limits; see [`ll_budgets_default`].
 */
typedef struct LlBudgets {
  size_t max_order;
  uint64_t coset_budget;
  uint64_t node_budget;
  uint64_t enum_budget;
} LlBudgets;

/**
 * A distance search outcome. `exact` is set when `lower == upper` was
 * certified; otherwise the search ran out of budget.
 */
typedef struct LlDistance {
  uint64_t lower;
  uint64_t upper;
  bool exact;
} LlDistance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` and returns
 * its length in bytes, excluding the NUL. Empty after a successful call.
 *
 * # Safety
 * `buf` is null or points to `cap` writable bytes.
 */
size_t ll_last_error(char *buf, size_t cap);

struct LlBudgets ll_budgets_default(void);

/**
 * Builds a named matrix: `sylvester:M`, `paley-i:Q`, `paley-ii:Q`,
 * `conference:Q` or `doubling:<name>`.
 *
 * # Safety
 * `name` is a NUL-terminated string; `out` is writable.
 */
enum LlStatus ll_matrix_named(const char *name, size_t max_order, struct LlMatrix **out);

/**
 * Parses the text format: a header line `n w` then `n` rows of entries.
 *
 * # Safety
 * `source` is a NUL-terminated string; `out` is writable.
 */
enum LlStatus ll_matrix_parse(const char *source, struct LlMatrix **out);

/**
 * Builds a matrix from `n * n` row-major entries in {-1, 0, 1}.
 *
 * # Safety
 * `entries` points to `n * n` readable values; `out` is writable.
 */
enum LlStatus ll_matrix_from_entries(size_t n, const int64_t *entries, struct LlMatrix **out);

/**
 * # Safety
 * `m` is null or a live matrix handle.
 */
size_t ll_matrix_order(const struct LlMatrix *m);

/**
 * # Safety
 * `m` is null or a live matrix handle.
 */
size_t ll_matrix_weight(const struct LlMatrix *m);

/**
 * Copies the `order * order` row-major entries into `buf`.
 *
 * # Safety
 * `m` is a live matrix handle; `buf` points to `len` writable values.
 */
enum LlStatus ll_matrix_entries(const struct LlMatrix *m, int8_t *buf, size_t len);

/**
 * Negates and permutes columns so the first row reads `0...0 1...1`.
 *
 * # Safety
 * `m` is a live matrix handle; `out` is writable.
 */
enum LlStatus ll_matrix_normal_form(const struct LlMatrix *m, struct LlMatrix **out);

/**
 * # Safety
 * `m` is null or a handle not yet freed.
 */
void ll_matrix_free(struct LlMatrix *m);

/**
 * The lattice `{x : W x = 0 mod w}` of a weighing matrix of weight `w`.
 *
 * # Safety
 * `m` is a live matrix handle; `out` is writable.
 */
enum LlStatus ll_lattice_of_matrix(const struct LlMatrix *m, struct LlLattice **out);

/**
 * The Sylvester lattice with parameters `m >= j >= 0`.
 *
 * # Safety
 * `out` is writable.
 */
enum LlStatus ll_lattice_sylvester(uint32_t m,
                                   uint32_t j,
                                   size_t max_order,
                                   struct LlLattice **out);

/**
 * A lattice from `n` basis rows given row-major.
 *
 * # Safety
 * `rows` points to `n * n` readable values; `out` is writable.
 */
enum LlStatus ll_lattice_from_basis(size_t n, const int64_t *rows, struct LlLattice **out);

/**
 * # Safety
 * `l` is null or a live lattice handle.
 */
size_t ll_lattice_dimension(const struct LlLattice *l);

/**
 * Writes the volume as a decimal string and stores its length in `len`.
 *
 * # Safety
 * `l` is a live lattice handle; `buf` is null or has `cap` writable bytes;
 * `len` is writable.
 */
enum LlStatus ll_lattice_volume(const struct LlLattice *l, char *buf, size_t cap, size_t *len);

/**
 * Copies the canonical (row Hermite) basis, row-major, into `buf`.
 *
 * # Safety
 * `l` is a live lattice handle; `buf` points to `len` writable values.
 */
enum LlStatus ll_lattice_canonical_basis(const struct LlLattice *l, int64_t *buf, size_t len);

/**
 * # Safety
 * `l` is a live lattice handle; `x` points to `n` readable values;
 * `out` is writable.
 */
enum LlStatus ll_lattice_contains(const struct LlLattice *l, const int64_t *x, size_t n, bool *out);

/**
 * Minimum Manhattan norm of a nonzero lattice point. When `witness` is
 * non-null it receives a point achieving `upper`.
 *
 * # Safety
 * `l` is a live lattice handle; `witness` is null or has `dimension`
 * writable values; `out` is writable.
 */
enum LlStatus ll_lattice_min_distance(const struct LlLattice *l,
                                      uint64_t node_budget,
                                      int64_t *witness,
                                      struct LlDistance *out);

/**
 * Exact covering radius by breadth-first search over `Z^n / L`.
 *
 * # Safety
 * `l` is a live lattice handle; `out` is writable.
 */
enum LlStatus ll_lattice_covering_radius(const struct LlLattice *l,
                                         uint64_t coset_budget,
                                         uint32_t *out);

/**
 * # Safety
 * `l` is null or a handle not yet freed.
 */
void ll_lattice_free(struct LlLattice *l);

/**
 * The code over Z_`modulus` spanned by `k` generators of length `n`.
 *
 * # Safety
 * `generators` points to `k * n` readable values; `out` is writable.
 */
enum LlStatus ll_code_from_generators(uint64_t modulus,
                                      size_t k,
                                      size_t n,
                                      const uint64_t *generators,
                                      struct LlCode **out);

/**
 * The code over Z_`modulus` spanned by the rows of a weighing matrix.
 *
 * # Safety
 * `m` is a live matrix handle; `out` is writable.
 */
enum LlStatus ll_code_of_matrix(const struct LlMatrix *m, uint64_t modulus, struct LlCode **out);

/**
 * The Sylvester code: the Z_{2^j} reduction of the Sylvester lattice.
 *
 * # Safety
 * `out` is writable.
 */
enum LlStatus ll_code_sylvester(uint32_t m, uint32_t j, size_t max_order, struct LlCode **out);

/**
 * # Safety
 * `c` is null or a live code handle.
 */
size_t ll_code_length(const struct LlCode *c);

/**
 * # Safety
 * `c` is null or a live code handle.
 */
uint64_t ll_code_modulus(const struct LlCode *c);

/**
 * Number of rows of the Howell form.
 *
 * # Safety
 * `c` is null or a live code handle.
 */
size_t ll_code_rank(const struct LlCode *c);

/**
 * # Safety
 * `c` is a live code handle; `out` is writable.
 */
enum LlStatus ll_code_is_self_dual(const struct LlCode *c, bool *out);

/**
 * # Safety
 * `c` is a live code handle; `out` is writable.
 */
enum LlStatus ll_code_dual(const struct LlCode *c, struct LlCode **out);

/**
 * Minimum weight of a nonzero codeword. Enumerates when the code has at
 * most `enum_budget` words, otherwise runs the pruned search.
 *
 * # Safety
 * `c` is a live code handle; `witness` is null or has `length` writable
 * values; `out` is writable.
 */
enum LlStatus ll_code_min_distance(const struct LlCode *c,
                                   enum LlMetric metric,
                                   struct LlBudgets budgets,
                                   uint64_t *witness,
                                   struct LlDistance *out);

/**
 * # Safety
 * `c` is null or a handle not yet freed.
 */
void ll_code_free(struct LlCode *c);

/**
 * Builds the discrete transform of a symmetric or skew weighing matrix
 * whose weight is a perfect square. Materializes the coset table, so the
 * coset budget applies.
 *
 * # Safety
 * `m` is a live matrix handle; `out` is writable.
 */
enum LlStatus ll_transform_new(const struct LlMatrix *m,
                               struct LlBudgets budgets,
                               struct LlTransform **out);

/**
 * # Safety
 * `t` is null or a live transform handle.
 */
size_t ll_transform_dimension(const struct LlTransform *t);

/**
 * Maps `x` to `y`; applying the transform twice returns `x`.
 *
 * # Safety
 * `t` is a live transform handle; `x` and `y` each hold `n` values.
 */
enum LlStatus ll_transform_apply(const struct LlTransform *t,
                                 const int64_t *x,
                                 size_t n,
                                 int64_t *y);

/**
 * # Safety
 * `t` is null or a handle not yet freed.
 */
void ll_transform_free(struct LlTransform *t);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEE_LATTICE_H */

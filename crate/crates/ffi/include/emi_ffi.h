#ifndef EMI_FFI_H
#define EMI_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum EmiStatus {
  EmiStatus_Ok = 0,
  EmiStatus_NullPointer = 1,
  EmiStatus_InvalidUtf8 = 2,
  EmiStatus_Parse = 3,
  EmiStatus_InvalidArgument = 4,
  EmiStatus_DivisionByZero = 5,
  EmiStatus_Domain = 6,
  EmiStatus_AmbiguousRounding = 7,
  EmiStatus_DigitCapExceeded = 8,
  EmiStatus_SelfCheckFailed = 9,
  EmiStatus_InsufficientScale = 10,
  EmiStatus_Panic = 99,
} EmiStatus;

/**
 * Opaque two-term Machin-like formula.
 */
typedef struct EmiMachin EmiMachin;

/**
 * Opaque decimal fixed-point real.
 */
typedef struct EmiReal EmiReal;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *emi_last_error_message(void);

/**
 * Parses a decimal such as `-1.25e-3`.
 *
 * # Safety
 * `s` must be a NUL-terminated string and `out` a writable pointer.
 */
enum EmiStatus emi_real_from_str(const char *s, struct EmiReal **out);

/**
 * # Safety
 * `r` must be null or a handle from this library, not yet freed.
 */
void emi_real_free(struct EmiReal *r);

/**
 * Renders `r` truncated to `digits` fractional digits.
 *
 * # Safety
 * `r` must be a live handle and `out` a writable pointer. Free the result
 * with [`emi_string_free`].
 */
enum EmiStatus emi_real_to_string(const struct EmiReal *r, uint32_t digits, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void emi_string_free(char *s);

/**
 * `atan(x)` with `subintervals` nodes and `n_max` terms per node, carried
 * to `digits` digits plus guard.
 *
 * # Safety
 * `x` must be a live handle and `out` a writable pointer.
 */
enum EmiStatus emi_atan(const struct EmiReal *x,
                        uint32_t subintervals,
                        uint32_t n_max,
                        uint32_t digits,
                        struct EmiReal **out);

/**
 * `atan(x)` correct to `digits` digits, choosing `n_max` automatically.
 *
 * # Safety
 * `x` must be a live handle and `out` a writable pointer.
 */
enum EmiStatus emi_atan_to_precision(const struct EmiReal *x,
                                     uint32_t subintervals,
                                     uint32_t digits,
                                     struct EmiReal **out);

/**
 * Pi to `digits` digits from the generated formula for `k` (floor gamma,
 * fixed-point second argument), verified against the self-check pair.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum EmiStatus emi_pi(uint32_t k, uint32_t subintervals, uint32_t digits, struct EmiReal **out);

/**
 * `gamma` for `k` on a `10^-grain` grid, written as `num/den`.
 *
 * # Safety
 * `out` must be a writable pointer. Free the result with [`emi_string_free`].
 */
enum EmiStatus emi_gamma_select(uint32_t k, uint32_t grain, bool ceil, uint32_t digits, char **out);

/**
 * Generates the formula for `k`. With `exact`, the second argument is kept
 * as a rational (fails with `DigitCapExceeded` past a million digits).
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum EmiStatus emi_machin_generate(uint32_t k,
                                   uint32_t grain,
                                   bool ceil,
                                   bool exact,
                                   uint32_t digits,
                                   struct EmiMachin **out);

/**
 * `k=<int> gamma=<num>/<den> second_arg=<num>/<den>|fixed:<decimal> digits=<p>`
 *
 * # Safety
 * `f` must be a live handle and `out` a writable pointer. Free the result
 * with [`emi_string_free`].
 */
enum EmiStatus emi_machin_to_record(const struct EmiMachin *f, char **out);

/**
 * Parses a record produced by [`emi_machin_to_record`].
 *
 * # Safety
 * `s` must be a NUL-terminated string and `out` a writable pointer.
 */
enum EmiStatus emi_machin_from_record(const char *s, struct EmiMachin **out);

/**
 * `4 (2^(k-1) atan(1/gamma) + atan(second_arg))` with `n_max` terms per node.
 *
 * # Safety
 * `f` must be a live handle and `out` a writable pointer.
 */
enum EmiStatus emi_machin_eval(const struct EmiMachin *f,
                               uint32_t subintervals,
                               uint32_t n_max,
                               uint32_t digits,
                               struct EmiReal **out);

/**
 * # Safety
 * `f` must be null or a handle from this library, not yet freed.
 */
void emi_machin_free(struct EmiMachin *f);

/**
 * Pi from two independent formulas that must agree to `digits` digits.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum EmiStatus emi_self_check_pi(uint32_t digits, struct EmiReal **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EMI_FFI_H */

#ifndef PI_FORGE_BBP_HPP
#define PI_FORGE_BBP_HPP

/* Single hexadecimal digit extraction for pi.
 *
 * Based on the base-16 series
 *
 *   pi = sum_{i>=0} 16^-i ( 4/(8i+1) - 2/(8i+4) - 1/(8i+5) - 1/(8i+6) )
 *
 * the fractional part of 16^d * pi is reconstructed modulo 1 from four
 * scaled sub-sums S_k (k in {1,4,5,6}), each computed with p bits of
 * precision: d "low" terms using modular exponentiation, then p/4 "mid"
 * terms from the convergent tail.  Every sub-sum under-approximates its
 * exact value; the total defect is below delta = d + p/4 + 1 counts of
 * 2^-p.  The digit is emitted only when the values Y and Y + 8*delta give
 * the same leading hex digit, so an answer is either right or withheld
 * (partial correctness) -- never silently wrong.
 */

#include <cstdint>
#include <optional>

namespace pi_forge {

struct BbpParams {
    std::uint64_t d = 1; /* target hex position, 1-based */
    unsigned p = 12;     /* working precision in bits */
};

struct BbpLowState {
    std::uint64_t i = 0;
    std::uint64_t res = 0; /* invariant: res < 2^p */
};

struct BbpMidState {
    std::uint64_t i = 0;
    std::uint64_t s = 0; /* current shift; starts at 2^(p-4) */
    std::uint64_t res = 0;
};

/* base^exp mod modulus by square-and-multiply; modulus > 0. */
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp,
                      std::uint64_t modulus);

/* One low-sum term: res += floor(2^p * (16^(d-1-i) mod r) / r) with
 * r = 8i + k, reduced once below 2^p.  Requires st.i < d. */
BbpLowState bbp_low_step(unsigned k, const BbpParams& params,
                         const BbpLowState& st);

/* d low iterations from (0, 0); exact value of the scaled first sum modulo
 * 2^p, under-approximated by fewer than d counts. */
std::uint64_t bbp_sum_low(unsigned k, const BbpParams& params);

/* One mid-sum term: res += floor(s / (8i+k)); s /= 16. */
BbpMidState bbp_mid_step(unsigned k, const BbpMidState& st);

/* floor(p/4) mid iterations from (d, 2^(p-4), 0); fits in p bits. */
std::uint64_t bbp_sum_mid(unsigned k, const BbpParams& params);

/* bbp_sum_low + bbp_sum_mid; under-approximates the scaled S_k modulo 2^p
 * with defect below d + p/4 + 1. */
std::uint64_t bbp_sum(unsigned k, const BbpParams& params);

/* The hex digit floor(pi * 16^d) mod 16, or nullopt when the internal
 * guards or the agreement test fail.  `threads` parallelizes the low sums
 * by splitting index ranges; partial results merge modulo 2^p in index
 * order, so the outcome is bit-identical for every thread count. */
std::optional<unsigned> pi_hex_digit(const BbpParams& params,
                                     unsigned threads = 1);

/* Smallest p (multiple of 4, p > 3) satisfying 8*(d + p/4 + 1) < 2^(p-4),
 * plus `slack_bits` rounded up to keep p a multiple of 4.  Starting point
 * for the escalation loop (retry with p+4 when the digit is withheld). */
unsigned choose_precision(std::uint64_t d, unsigned slack_bits = 0);

/* Upper limit for precision escalation: Y is evaluated in 128-bit
 * arithmetic, which is comfortable up to p = 60. */
inline constexpr unsigned kMaxPrecisionBits = 60;

} // namespace pi_forge

#endif

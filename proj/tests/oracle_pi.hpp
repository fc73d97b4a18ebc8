#ifndef PI_FORGE_TESTS_ORACLE_PI_HPP
#define PI_FORGE_TESTS_ORACLE_PI_HPP

/* Test oracle for digits of pi, independent of the algorithms under test.
 *
 * Machin's formula pi = 16 atan(1/5) - 4 atan(1/239), evaluated in integer
 * arithmetic at scale base^(N+G).  Each series term is the exact floor
 * floor(S / ((2j+1) x^(2j+1))) (nested floor divisions collapse), so the
 * computed sum deviates from the true scaled value by fewer than
 * 16 (n5 + 1) + 4 (n239 + 1) + 1 counts.  The result is accepted only when
 * that bound clears the guard window at base^G, which makes the oracle
 * self-certifying in the same sense as the code it checks.
 */

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace oracle {

/* floor(pi * base^N); throws std::runtime_error if the guard window cannot
 * be cleared (never observed: G grows until it is). */
mpz_class pi_floor(std::uint64_t n_digits, unsigned base = 10);

/* floor(pi * 2^bits), derived from a hex-digit pi_floor run: 16^K = 2^(4K)
 * and nested floor divisions collapse, so the right shift is exact. */
mpz_class pi_floor_bits(unsigned bits);

/* "3." + exactly N digits of pi in the given base (uppercase hex). */
std::string pi_digits(std::uint64_t n_digits, unsigned base = 10);

/* The d-th digit after the point (1-based) of pi in the given base, served
 * from a cached pi_floor run of at least `at_least` digits. */
unsigned pi_digit_at(std::uint64_t position, std::uint64_t at_least,
                     unsigned base = 16);

} // namespace oracle

#endif

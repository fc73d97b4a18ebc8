#ifndef PI_FORGE_DIGITS_HPP
#define PI_FORGE_DIGITS_HPP

/* Digit extraction with guard-window certification.
 *
 * A run produces a fixed-point value v1 at a power-of-two magnifier m1 plus
 * an error budget: |v1/m1 - pi| < budget/m1.  To emit N digits in base b we
 * rescale to m2 = b^(N+g) for g guard digits, split v2 = q * b^g + r, and
 * bound the total error at the new scale by B = ceil(budget * m2/m1) + 1
 * (the +1 covers the rescale floor).  Then pi * m2 lies in (v2 - B, v2 + B);
 * whenever B < r < b^g - B that whole interval sits inside
 * [q * b^g, (q+1) * b^g), so q = floor(pi * b^N) exactly and every emitted
 * digit is certified.  Otherwise the verdict is "ambiguous" -- possibly a
 * near-boundary truth, never a wrong digit. */

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "pi_forge/fixedpoint.hpp"

namespace pi_forge {

enum class Algorithm { borwein, salamin };
enum class Verdict { certified, ambiguous };

/* Configuration problems (guard window too small for the declared budget,
 * unsupported base, ...): refused up front, never a silent wrong verdict. */
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DigitRequest {
    std::uint64_t digits = 0;  /* digits after the point, N >= 1 */
    unsigned base = 10;        /* 10 or 16 */
    unsigned guard_digits = 0; /* 0 = auto-size from the budget */
    Algorithm algorithm = Algorithm::borwein;
};

struct DigitReport {
    Verdict verdict = Verdict::ambiguous;
    std::string digit_string; /* "3." + N digits */
    mpz_class guard_remainder; /* r */
    mpz_class window_bound;    /* B */
    unsigned guard_digits = 0; /* g actually used */
    mpz_class budget_ulps;     /* declared budget at the source magnifier */
    mpz_class value;           /* q: integer part * base^N + fraction */
};

/* value must sit over a power-of-two magnifier strictly above base^(N+g).
 * budget_ulps is the producer's total error bound in source-scale ulps. */
DigitReport certify_digits(const FixedReal& value, const DigitRequest& req,
                           const mpz_class& budget_ulps);

/* "i.ffff" positional rendering of q = i * base^N + f with exactly N
 * fraction digits (zero-padded); hex digits are uppercase.
 * Round-trip: parse_digits(render(q, N, b), b) == q. */
std::string render(const mpz_class& q, std::uint64_t digits, unsigned base);
mpz_class parse_digits(const std::string& text, unsigned base);

enum class CrossVerdict { match, mismatch, inconclusive };

struct CrosscheckEntry {
    std::uint64_t position = 0; /* 1-based hex position after the point */
    int spigot_digit = -1;      /* -1: the extractor returned no digit */
    int file_digit = -1;
    CrossVerdict verdict = CrossVerdict::inconclusive;
};

struct CrosscheckResult {
    std::vector<CrosscheckEntry> entries;
    bool any_mismatch = false;
    bool all_conclusive = true;
};

/* Spot-check hex digits of a rendered run ("3.243F...") against the spigot
 * extractor at the given 1-based positions.  A position past the rendered
 * fraction is a domain error; an extractor "no digit" verdict is reported
 * as inconclusive, never as a failure. */
CrosscheckResult crosscheck(const std::string& hex_digits,
                            const std::vector<std::uint64_t>& positions,
                            unsigned threads = 1);

} // namespace pi_forge

#endif

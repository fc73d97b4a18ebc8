#ifndef PI_FORGE_BUDGET_HPP
#define PI_FORGE_BUDGET_HPP

/* Machine-checkable error budgets.
 *
 * Every digit-producing run carries two independent error sources:
 *
 *   - rounding: accumulated floor-rounding error, counted in ulps (1/m) of
 *     the working magnifier; bounded linearly in the iteration count for the
 *     product algorithm and exponentially for the AGM-sum algorithm;
 *   - truncation: the distance between the finite iterate and pi at exact
 *     arithmetic, bounded by expressions of the form  c * 531^(-2^k).
 *
 * The truncation bound is kept symbolic (coefficient and exponent) because
 * 531^(2^19) is a million-digit integer that usually never needs to be
 * materialized: a bit-length comparison settles "less than one ulp" without
 * computing the power.
 */

#include <cstdint>

#include <gmpxx.h>

#include "pi_forge/fixedpoint.hpp"

namespace pi_forge {

/* bound = coeff_num / (coeff_den * 531^pow531) */
struct TruncationBound {
    mpz_class coeff_num = 0;
    mpz_class coeff_den = 1;
    std::uint64_t pow531 = 0;

    /* ceil(bound * scale): the bound expressed in ulps of `scale`, rounded
     * up.  Uses the bit-length shortcut 531^e >= 2^floor(9.0525 e) (valid
     * because log2(531) > 9.0525) to avoid materializing large powers;
     * returns 1 whenever the product is provably below one ulp. */
    mpz_class ceil_ulps(const mpz_class& scale) const;

    /* Approximate decimal exponent of the bound (for reports): an integer k
     * with bound <= 10^k, close to tight. */
    long exp10_upper() const;
};

struct ErrorBudget {
    /* Iteration argument this budget describes (algorithm-specific index;
     * see borwein_budget / salamin_budget). */
    unsigned n = 0;
    /* Rounding error in ulps of the working magnifier (integer ceiling). */
    mpz_class rounding_ulps;
    TruncationBound truncation;
    /* change_magnifier adds strictly less than one target ulp. */
    unsigned rescale_ulps = 1;
    /* Truncation materialized in ulps of the magnifier the budget was
     * built for (ceiling, so at least 1), and the grand total
     * rounding + truncation + rescale at that same scale. */
    mpz_class truncation_ulps;
    mpz_class total_ulps;
};

/* Fill truncation_ulps/total_ulps of `b` for a working magnifier value. */
void materialize_budget(ErrorBudget& b, const mpz_class& scale);

/* Smallest guard-digit count g >= 4 such that base^g exceeds twice the
 * rounding budget (with headroom for the rescale and truncation ulps), so
 * the certification window (B, base^g - B) is nonempty with room to spare. */
unsigned guard_digits_for(unsigned base, const mpz_class& rounding_ulps);

} // namespace pi_forge

#endif

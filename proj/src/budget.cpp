#include "pi_forge/budget.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace pi_forge {

mpz_class TruncationBound::ceil_ulps(const mpz_class& scale) const {
    assert(coeff_num >= 0 && coeff_den > 0 && scale > 0);
    if (coeff_num == 0)
        return 0;

    /* Shortcut: coeff_num * scale < coeff_den * 531^e  whenever
     *   bitlen(coeff_num) + bitlen(scale) <= floor(e * 9.0525),
     * since lhs < 2^(bitlen sum) and 531^e = 2^(e log2 531) >= 2^(9.0525 e).
     * In that case the bound is below one ulp and its ceiling is 1. */
    if (pow531 > 0) {
        std::size_t lhs_bits = mpz_sizeinbase(coeff_num.get_mpz_t(), 2) +
                               mpz_sizeinbase(scale.get_mpz_t(), 2);
        if (pow531 <= (UINT64_MAX / 90525) &&
            lhs_bits <= pow531 * 90525 / 10000)
            return 1;
    }

    /* Exact path: only reachable for small exponents (the shortcut covers
     * every production-sized run), so the power stays affordable. */
    if (pow531 > (1u << 22))
        throw BudgetError("truncation bound exponent too large for exact "
                          "evaluation");
    mpz_class den = coeff_den;
    if (pow531 > 0) {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 531, static_cast<unsigned long>(pow531));
        den *= p;
    }
    mpz_class num = coeff_num * scale;
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (q < 1)
        q = 1;
    return q;
}

long TruncationBound::exp10_upper() const {
    if (coeff_num == 0)
        return 0;
    /* log10(bound) = log10(num) - log10(den) - e*log10(531).  For an upper
     * bound, overshoot the numerator (digit count >= log10), undershoot the
     * subtracted terms (digit count - 1 <= log10; 2.72509 < log10(531)). */
    auto digits10 = [](const mpz_class& v) {
        return static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 10));
    };
    double e = static_cast<double>(pow531);
    double val = static_cast<double>(digits10(coeff_num)) -
                 static_cast<double>(digits10(coeff_den) - 1) - e * 2.72509;
    return static_cast<long>(std::ceil(val));
}

void materialize_budget(ErrorBudget& b, const mpz_class& scale) {
    b.truncation_ulps = b.truncation.ceil_ulps(scale);
    b.total_ulps = b.rounding_ulps + b.truncation_ulps + b.rescale_ulps;
}

unsigned guard_digits_for(unsigned base, const mpz_class& rounding_ulps) {
    if (base != 10 && base != 16)
        throw DomainError("guard_digits_for: base must be 10 or 16");
    if (rounding_ulps < 0)
        throw DomainError("guard_digits_for: negative budget");
    /* Window feasibility needs base^g > 2B with B = rounding + rescale +
     * truncation headroom; the minimum of 4 matches the classical window
     * (0427, 9573) used for million-digit product runs. */
    mpz_class need = 2 * (rounding_ulps + 2);
    unsigned g = 1;
    mpz_class p = base;
    while (p <= need) {
        p *= base;
        ++g;
        if (g > 10000)
            throw BudgetError("guard_digits_for: budget absurdly large");
    }
    return g < 4 ? 4 : g;
}

} // namespace pi_forge

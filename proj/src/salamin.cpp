#include "pi_forge/salamin.hpp"

#include <cassert>
#include <cmath>

namespace pi_forge {

namespace {

void check_preconditions(const Magnifier& m, unsigned n) {
    if (n < 1)
        throw DomainError("salamin_pi: n must be >= 1");
    if (n > 62)
        throw BudgetError("salamin_pi: n out of range");
    mpz_class need;
    mpz_ui_pow_ui(need.get_mpz_t(), 10, n + 5);
    mpz_class p3;
    mpz_ui_pow_ui(p3.get_mpz_t(), 3, n);
    need *= p3;
    if (m.value() < need)
        throw BudgetError("salamin_pi: magnifier too small for the rounding "
                          "claim (need m >= 10^(n+5) * 3^n)");
}

/* b_0 = sqrt(1/2): the mantissa of 1/2 floors once when m is odd, which the
 * budget's constant term absorbs. */
FixedReal initial_b(const Magnifier& m) {
    return FixedReal{detail::hsqrt(m, detail::halve(m.value())), m};
}

} // namespace

AgmPair agm_step(const Magnifier& m, const AgmPair& pair) {
    if (pair.a.mantissa <= 0 || pair.b.mantissa <= 0)
        throw DomainError("agm_step: mantissas must be positive");
    FixedReal product = fx_mul(m, pair.a, pair.b);
    FixedReal na{detail::halve(pair.a.mantissa + pair.b.mantissa), m};
    FixedReal nb = fx_sqrt(m, product);
    return AgmPair{na, nb};
}

SalaminState salamin_start(const Magnifier& m, unsigned n) {
    check_preconditions(m, n);
    AgmPair pair{fx_one(m), initial_b(m)};
    return SalaminState{m, pair, mpz_class(0), 0, n};
}

void salamin_advance(SalaminState& st) {
    assert(st.k < st.target_n);
    const Magnifier& m = st.m;
    const bool last = (st.k + 1 == st.target_n);
    if (!last) {
        /* Gap term 2^k (a_k - b_k)^2: exact integer square of the mantissa
         * difference, rescaled by m once (single floor). */
        mpz_class d = st.pair.a.mantissa - st.pair.b.mantissa;
        assert(d >= 0);
        st.sum += detail::hmult_scaled(m, d, d,
                                       static_cast<unsigned long>(st.k));
        mpz_class ab = detail::hmult(m, st.pair.a.mantissa,
                                     st.pair.b.mantissa);
        st.pair = AgmPair{
            FixedReal{detail::halve(st.pair.a.mantissa + st.pair.b.mantissa),
                      m},
            FixedReal{detail::hsqrt(m, ab), m}};
    } else {
        /* The run's final step: only a_{n} is ever read again. */
        st.pair.a = FixedReal{
            detail::halve(st.pair.a.mantissa + st.pair.b.mantissa), m};
    }
    ++st.k;
}

FixedReal salamin_finish(const SalaminState& st) {
    assert(st.k == st.target_n);
    const Magnifier& m = st.m;
    /* Numerator 4 a_n^2 rescaled once; denominator 1 - sum is exact. */
    mpz_class num =
        detail::hmult_scaled(m, st.pair.a.mantissa, st.pair.a.mantissa, 2);
    mpz_class den = m.value() - st.sum;
    if (den <= 0)
        throw DomainError("salamin_finish: gap sum reached 1");
    return FixedReal{detail::hdiv(m, num, den), m};
}

FixedReal salamin_pi(const Magnifier& m, unsigned n) {
    SalaminState st = salamin_start(m, n);
    while (st.k < st.target_n)
        salamin_advance(st);
    return salamin_finish(st);
}

unsigned salamin_iterations_for(std::uint64_t digits, unsigned base) {
    if (digits < 1)
        throw DomainError("salamin_iterations_for: digits must be >= 1");
    if (base != 10 && base != 16)
        throw DomainError("salamin_iterations_for: base must be 10 or 16");
    const double ln_base_up = std::log(static_cast<double>(base)) *
                              (1.0 + 1e-12);
    const double ln_531_low = 6.2747571; /* < ln(531) */
    for (unsigned n = 0; n <= 62; ++n) {
        /* Want (132 + 384 * 2^n) * 531^(-2^n) < base^(-digits) / 2, i.e.
         * 2^n ln(531) > digits ln(base) + ln(2 (132 + 384 * 2^n)),
         * tested with the conservative side of every constant. */
        double lhs = std::ldexp(ln_531_low, static_cast<int>(n));
        double coeff = 2.0 * (132.0 + 384.0 * std::ldexp(1.0, static_cast<int>(n)));
        double rhs = static_cast<double>(digits) * ln_base_up +
                     std::log(coeff) * (1.0 + 1e-12) + 1e-9;
        if (lhs > rhs)
            return n;
    }
    throw BudgetError("salamin_iterations_for: digit count out of range");
}

ErrorBudget salamin_budget(unsigned n, const Magnifier& m) {
    if (n > 62)
        throw BudgetError("salamin_budget: n out of range");
    ErrorBudget b;
    b.n = n;
    /* ceil(160 (3/2)^(n+1) + 80 * 3^(n+1) + 100), exactly:
     * ceil((160 * 3^(n+1) + (80 * 3^(n+1) + 100) * 2^(n+1)) / 2^(n+1)). */
    mpz_class p3;
    mpz_ui_pow_ui(p3.get_mpz_t(), 3, n + 1);
    mpz_class num = 160 * p3 + ((80 * p3 + 100) << (n + 1));
    mpz_class r;
    mpz_class den = mpz_class(1) << (n + 1);
    mpz_cdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    b.rounding_ulps = r;
    b.truncation =
        TruncationBound{132 + (mpz_class(384) << n), 1, std::uint64_t{1} << n};
    b.rescale_ulps = 1;
    materialize_budget(b, m.value());
    return b;
}

} // namespace pi_forge

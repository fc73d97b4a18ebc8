#include "pi_forge/borwein.hpp"

#include <cassert>
#include <cmath>

namespace pi_forge {

namespace {

/* 14/10^4 * 531^(2^n) as the upper-bound check 14 m < 531^(2^n), i.e. the
 * magnifier window under which the (21n + 3) rounding claim is provable.
 * Quick accept via bit lengths: 14 m < 2^bitlen(14m) and
 * 531^(2^n) >= 2^floor(2^n * 9.0525) because log2(531) > 9.0525.  The exact
 * comparison is only attempted when the quick test is inconclusive and the
 * power is small enough to materialize. */
bool magnifier_below_531_window(const mpz_class& m, unsigned n) {
    mpz_class lhs = 14 * m;
    std::size_t lhs_bits = mpz_sizeinbase(lhs.get_mpz_t(), 2);
    if (n >= 63)
        return true; /* 531^(2^63) dwarfs any representable magnifier */
    std::uint64_t e = std::uint64_t{1} << n;
    if (e <= (UINT64_MAX / 90525) && lhs_bits <= e * 90525 / 10000)
        return true;
    if (e > (std::uint64_t{1} << 22))
        throw BudgetError("borwein_pi: magnifier window check too large for "
                          "exact evaluation");
    mpz_class pow;
    mpz_ui_pow_ui(pow.get_mpz_t(), 531, static_cast<unsigned long>(e));
    return lhs < pow;
}

void check_preconditions(const Magnifier& m, unsigned n) {
    mpz_class lower = 600 * (mpz_class(n) + 1);
    if (!(lower < m.value()))
        throw BudgetError("borwein_pi: magnifier too small for the rounding "
                          "claim (need 600(n+1) < m)");
    if (n >= 1 && !magnifier_below_531_window(m.value(), n))
        throw BudgetError("borwein_pi: magnifier too large for the rounding "
                          "claim (need 14 m < 531^(2^n))");
}

} // namespace

BorweinInit borwein_init(const Magnifier& m) {
    FixedReal two = fx_two(m);
    FixedReal s2 = fx_sqrt(m, two);
    FixedReal ss2 = fx_sqrt(m, s2);
    FixedReal y1 = fx_div(m, fx_add(fx_one(m), s2), int_scale(2, ss2));
    return BorweinInit{s2, y1, ss2};
}

std::pair<FixedReal, FixedReal> borwein_step(const Magnifier& m,
                                             const FixedReal& y,
                                             const FixedReal& z) {
    FixedReal one = fx_one(m);
    FixedReal sy = fx_sqrt(m, y);
    FixedReal ny = fx_div(m, fx_add(one, y), int_scale(2, sy));
    FixedReal nz = fx_div(m, fx_add(one, fx_mul(m, z, y)),
                          fx_mul(m, fx_add(one, z), sy));
    return {ny, nz};
}

BorweinState borwein_start(const Magnifier& m, unsigned n) {
    if (n < 1)
        throw DomainError("borwein_start: n must be >= 1");
    check_preconditions(m, n);
    BorweinInit init = borwein_init(m);
    FixedReal one = fx_one(m);
    FixedReal prod =
        fx_div(m, fx_add(one, init.y1), fx_add(one, init.z1));
    return BorweinState{m,      init.s2, init.y1, init.z1,
                        prod,   n,       n - 1};
}

void borwein_advance(BorweinState& st) {
    assert(st.iterations_left > 0);
    FixedReal one = fx_one(st.m);
    auto [ny, nz] = borwein_step(st.m, st.y, st.z);
    FixedReal ratio = fx_div(st.m, fx_add(one, ny), fx_add(one, nz));
    st.prod = fx_mul(st.m, st.prod, ratio);
    st.y = ny;
    st.z = nz;
    --st.iterations_left;
}

FixedReal borwein_finish(const BorweinState& st) {
    assert(st.iterations_left == 0);
    return fx_mul(st.m, fx_add(fx_two(st.m), st.s2), st.prod);
}

FixedReal borwein_pi(const Magnifier& m, unsigned n) {
    if (n == 0) {
        check_preconditions(m, 0);
        return fx_add(fx_two(m), fx_sqrt(m, fx_two(m)));
    }
    BorweinState st = borwein_start(m, n);
    while (st.iterations_left > 0)
        borwein_advance(st);
    return borwein_finish(st);
}

unsigned borwein_iterations_for(std::uint64_t digits, unsigned base) {
    if (digits < 1)
        throw DomainError("borwein_iterations_for: digits must be >= 1");
    if (base != 10 && base != 16)
        throw DomainError("borwein_iterations_for: base must be 10 or 16");
    const double ln_base = std::log(static_cast<double>(base));
    const double ln_4pi0 = 2.6142201; /* > ln(4 (2 + sqrt 2)) = 2.61421996… */
    const double ln_531 = 6.2747571;  /* < ln(531) = 6.27475718… */
    double x =
        (static_cast<double>(digits) * ln_base - ln_4pi0) / ln_531;
    /* Outward rounding: nudge the argument up so double rounding can only
     * increase the iteration count. */
    x *= 1.0 + 1e-12;
    if (x <= 1.0)
        return 0;
    double n = std::ceil(std::log2(x) * (1.0 + 1e-12));
    if (n < 0)
        return 0;
    if (n > 62)
        throw BudgetError("borwein_iterations_for: digit count out of range");
    return static_cast<unsigned>(n);
}

ErrorBudget borwein_budget(unsigned n, const Magnifier& m) {
    if (n > 63)
        throw BudgetError("borwein_budget: n out of range");
    ErrorBudget b;
    b.n = n;
    b.rounding_ulps = 21 * mpz_class(n) + 3;
    if (n == 0) {
        /* 4 pi_0 * 531^(-1/2) < 14/23 because 23^2 = 529 < 531. */
        b.truncation = TruncationBound{14, 23, 0};
    } else {
        b.truncation = TruncationBound{14, 1, std::uint64_t{1} << (n - 1)};
    }
    b.rescale_ulps = 1;
    materialize_budget(b, m.value());
    return b;
}

} // namespace pi_forge

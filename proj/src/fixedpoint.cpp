#include "pi_forge/fixedpoint.hpp"

#include <cassert>
#include <cmath>

namespace pi_forge {

Magnifier::Magnifier(mpz_class value) {
    if (value <= 1000)
        throw DomainError("magnifier must exceed 1000");
    bits_ = mpz_sizeinbase(value.get_mpz_t(), 2);
    /* A power of two has exactly one set bit. */
    pow2_ = mpz_popcount(value.get_mpz_t()) == 1;
    pow2_bits_ = pow2_ ? static_cast<unsigned long>(bits_ - 1) : 0;
    value_ = std::make_shared<const mpz_class>(std::move(value));
}

Magnifier Magnifier::pow2(unsigned long bits) {
    mpz_class v;
    mpz_ui_pow_ui(v.get_mpz_t(), 2, bits);
    return Magnifier(std::move(v));
}

unsigned long Magnifier::pow2_bits() const {
    assert(pow2_);
    return pow2_bits_;
}

namespace {

uint64_t isqrt_u64(uint64_t n) {
    if (n == 0)
        return 0;
    auto r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    /* double sqrt can land one off near 2^53 and beyond; fix up exactly. */
    while (static_cast<unsigned __int128>(r) * r > n)
        --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

void require_nonneg(const FixedReal& x, const char* op) {
    if (x.mantissa < 0)
        throw DomainError(std::string(op) + ": negative operand");
}

void require_same(const Magnifier& m, const FixedReal& x, const char* op) {
    if (x.magnifier != m)
        throw MagnifierMismatch(std::string(op) + ": mismatched magnifiers");
}

} // namespace

mpz_class isqrt(const mpz_class& n) {
    if (n < 0)
        throw DomainError("isqrt: negative input");
    std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    if (bits <= 64)
        return mpz_class(isqrt_u64(mpz_get_ui(n.get_mpz_t())));

    /* Adaptive-precision Newton iteration.  With c = floor((bitlen(n)-1)/2),
     * the loop refines an approximation a of floor(sqrt(n >> 2*(c-d)))
     * while doubling the tracked bit count d each round, maintaining
     * (a-1)^2 < n >> 2*(c-d) < (a+1)^2.  The final result is therefore
     * floor(sqrt(n)) or one above, fixed by a single correction step. */
    const unsigned long c = static_cast<unsigned long>(bits - 1) / 2;
    int cbits = 0;
    for (unsigned long t = c; t != 0; t >>= 1)
        ++cbits;
    mpz_class a = 1;
    unsigned long d = 0;
    for (int s = cbits - 1; s >= 0; --s) {
        unsigned long e = d;
        d = c >> static_cast<unsigned>(s);
        /* a = (a << (d-e-1)) + (n >> (2c - e - d + 1)) / a */
        mpz_class t;
        mpz_fdiv_q_2exp(t.get_mpz_t(), n.get_mpz_t(), 2 * c - e - d + 1);
        mpz_fdiv_q(t.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t());
        mpz_class shifted;
        mpz_mul_2exp(shifted.get_mpz_t(), a.get_mpz_t(), d - e - 1);
        a = shifted + t;
    }
    if (a * a > n)
        a -= 1;
    assert(a * a <= n && (a + 1) * (a + 1) > n);
    return a;
}

namespace detail {

namespace {
thread_local OpCounts g_counts;
}

OpCounts& op_counts() noexcept { return g_counts; }
void reset_op_counts() noexcept { g_counts = OpCounts{}; }

mpz_class hmult(const Magnifier& m, const mpz_class& x, const mpz_class& y,
                bool allow_shift) {
    assert(x >= 0 && y >= 0);
    ++g_counts.mul;
    mpz_class p = x * y;
    mpz_class r;
    if (allow_shift && m.is_pow2())
        mpz_fdiv_q_2exp(r.get_mpz_t(), p.get_mpz_t(), m.pow2_bits());
    else
        mpz_fdiv_q(r.get_mpz_t(), p.get_mpz_t(), m.value().get_mpz_t());
    return r;
}

mpz_class hmult_scaled(const Magnifier& m, const mpz_class& x,
                       const mpz_class& y, unsigned long shift,
                       bool allow_shift) {
    assert(x >= 0 && y >= 0);
    ++g_counts.mul;
    mpz_class p = x * y;
    mpz_class shifted;
    mpz_mul_2exp(shifted.get_mpz_t(), p.get_mpz_t(), shift);
    mpz_class r;
    if (allow_shift && m.is_pow2())
        mpz_fdiv_q_2exp(r.get_mpz_t(), shifted.get_mpz_t(), m.pow2_bits());
    else
        mpz_fdiv_q(r.get_mpz_t(), shifted.get_mpz_t(), m.value().get_mpz_t());
    return r;
}

mpz_class hdiv(const Magnifier& m, const mpz_class& x, const mpz_class& y,
               bool allow_shift) {
    assert(x >= 0 && y > 0);
    ++g_counts.div;
    mpz_class scaled;
    if (allow_shift && m.is_pow2())
        mpz_mul_2exp(scaled.get_mpz_t(), x.get_mpz_t(), m.pow2_bits());
    else
        scaled = x * m.value();
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), scaled.get_mpz_t(), y.get_mpz_t());
    return r;
}

mpz_class hsqrt(const Magnifier& m, const mpz_class& x, bool allow_shift) {
    assert(x >= 0);
    ++g_counts.sqrt;
    mpz_class scaled;
    if (allow_shift && m.is_pow2())
        mpz_mul_2exp(scaled.get_mpz_t(), x.get_mpz_t(), m.pow2_bits());
    else
        scaled = x * m.value();
    return isqrt(scaled);
}

mpz_class change_mantissa(const Magnifier& m1, const Magnifier& m2,
                          const mpz_class& x) {
    assert(x >= 0);
    mpz_class r;
    if (m1.is_pow2() && m2.is_pow2() && m1.pow2_bits() >= m2.pow2_bits()) {
        mpz_fdiv_q_2exp(r.get_mpz_t(), x.get_mpz_t(),
                        m1.pow2_bits() - m2.pow2_bits());
        return r;
    }
    mpz_class p = x * m2.value();
    mpz_fdiv_q(r.get_mpz_t(), p.get_mpz_t(), m1.value().get_mpz_t());
    return r;
}

mpz_class halve(const mpz_class& x) {
    assert(x >= 0);
    ++g_counts.halve;
    mpz_class r;
    mpz_fdiv_q_2exp(r.get_mpz_t(), x.get_mpz_t(), 1);
    return r;
}

} // namespace detail

FixedReal fx_one(const Magnifier& m) { return {m.value(), m}; }

FixedReal fx_two(const Magnifier& m) { return {2 * m.value(), m}; }

FixedReal fx_mul(const Magnifier& m, const FixedReal& x, const FixedReal& y) {
    require_same(m, x, "fx_mul");
    require_same(m, y, "fx_mul");
    require_nonneg(x, "fx_mul");
    require_nonneg(y, "fx_mul");
    return {detail::hmult(m, x.mantissa, y.mantissa), m};
}

FixedReal fx_div(const Magnifier& m, const FixedReal& x, const FixedReal& y) {
    require_same(m, x, "fx_div");
    require_same(m, y, "fx_div");
    require_nonneg(x, "fx_div");
    if (y.mantissa <= 0)
        throw DomainError("fx_div: divisor must be positive");
    return {detail::hdiv(m, x.mantissa, y.mantissa), m};
}

FixedReal fx_sqrt(const Magnifier& m, const FixedReal& x) {
    require_same(m, x, "fx_sqrt");
    require_nonneg(x, "fx_sqrt");
    return {detail::hsqrt(m, x.mantissa), m};
}

FixedReal change_magnifier(const Magnifier& m1, const Magnifier& m2,
                           const FixedReal& x) {
    require_same(m1, x, "change_magnifier");
    require_nonneg(x, "change_magnifier");
    if (!(m2.value() < m1.value()))
        throw MagnifierMismatch("change_magnifier: target magnifier must be "
                                "strictly smaller (upscaling is out of "
                                "contract)");
    return {detail::change_mantissa(m1, m2, x.mantissa), m2};
}

FixedReal fx_add(const FixedReal& x, const FixedReal& y) {
    require_same(x.magnifier, y, "fx_add");
    return {x.mantissa + y.mantissa, x.magnifier};
}

FixedReal fx_sub(const FixedReal& x, const FixedReal& y) {
    require_same(x.magnifier, y, "fx_sub");
    mpz_class r = x.mantissa - y.mantissa;
    if (r < 0)
        throw DomainError("fx_sub: negative result");
    return {std::move(r), x.magnifier};
}

FixedReal int_scale(unsigned long k, const FixedReal& x) {
    return {k * x.mantissa, x.magnifier};
}

} // namespace pi_forge

#ifndef PI_FORGE_TESTS_LEMMA_TRIALS_HPP
#define PI_FORGE_TESTS_LEMMA_TRIALS_HPP

/* Randomized property trials for the rounding lemmas behind the error
 * budgets.  Each trial draws hypotheses at random (grid-aligned and
 * off-grid rationals), evaluates the rounded expression in exact rational
 * arithmetic, and checks the lemma's conclusion exactly -- square-root
 * comparisons are settled by squaring, never by floating point.  The
 * lemmas are theorems, so the expected failure count is always zero.
 *
 * Shared between the unit suite and the acceptance gate so both exercise
 * the identical trial logic.
 */

#include <cstdint>
#include <random>

#include <gmpxx.h>

namespace lemma_trials {

namespace detail {

inline mpq_class make_q(const mpz_class& num, const mpz_class& den) {
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

inline mpz_class floor_q(const mpq_class& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

/* Downward-rounded operations on the grid of step 1/m, as real maps:
 * r_op(args) = floor(exact * m) / m. */
inline mpq_class r_mult(const mpq_class& a, const mpq_class& b,
                        unsigned long m) {
    return make_q(floor_q(a * b * mpz_class(m)), m);
}

inline mpq_class r_div(const mpq_class& a, const mpq_class& b,
                       unsigned long m) {
    return make_q(floor_q(a / b * mpz_class(m)), m);
}

inline mpq_class r_sqrt(const mpq_class& a, unsigned long m) {
    /* floor(sqrt(a) * m) = floor(sqrt(a m^2)) = isqrt(floor(a m^2)):
     * for integer k, k <= sqrt(x) iff k^2 <= floor(x). */
    mpz_class scaled = floor_q(a * mpz_class(m) * mpz_class(m));
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    return make_q(root, m);
}

/* Uniform integer in [lo, hi]. */
inline unsigned long pick(std::mt19937_64& rng, unsigned long lo,
                          unsigned long hi) {
    return std::uniform_int_distribution<unsigned long>(lo, hi)(rng);
}

/* Random rational with |value| < bound_num/(m * bound_den_scale), built on
 * a grid t times finer than 1/m so inputs land off the working grid. */
inline mpq_class pick_error(std::mt19937_64& rng, unsigned long m,
                            unsigned long max_numer_per_t) {
    unsigned long t = pick(rng, 1, 100);
    if (max_numer_per_t == 0)
        return mpq_class(0);
    unsigned long j = pick(rng, 0, max_numer_per_t * t - 1);
    mpq_class h = make_q(j, mpz_class(m) * t);
    return pick(rng, 0, 1) ? h : mpq_class(-h);
}

} // namespace detail

/* Lemma: e' < 1/10, e <= e'/2, 1 <= y <= 71/50, |h| < e' imply
 *   |r_div(1 + (y+h), 2 r_sqrt(y+h)) - (1+y)/(2 sqrt y)| < e'. */
inline unsigned y_error_failures(unsigned trials, std::uint64_t seed) {
    using namespace detail;
    std::mt19937_64 rng(seed);
    unsigned failures = 0;
    for (unsigned i = 0; i < trials; ++i) {
        unsigned long m = pick(rng, 1001, 1000000);
        unsigned long u = pick(rng, 2, (m - 1) / 10); /* e' = u/m < 1/10 */
        mpq_class ep = make_q(u, m);
        unsigned long t = pick(rng, 1, 100);
        mpz_class den = mpz_class(m) * t;
        mpz_class amax = den * 21 / 50;
        mpq_class y = 1 + make_q(pick(rng, 0, amax.get_ui()), den);
        mpq_class h = pick_error(rng, m, u);

        mpq_class x = y + h;
        mpq_class val = r_div(1 + x, 2 * r_sqrt(x, m), m);

        /* val < y1 + e'  <=>  (val - e') 2 sqrt(y) < 1 + y. */
        mpq_class sq = (1 + y) * (1 + y);
        mpq_class hi = val - ep;
        bool upper = hi <= 0 || hi * hi * 4 * y < sq;
        /* val > y1 - e'  <=>  (val + e') 2 sqrt(y) > 1 + y. */
        mpq_class lo = val + ep;
        bool lower = lo > 0 && lo * lo * 4 * y > sq;
        if (!upper || !lower)
            ++failures;
    }
    return failures;
}

/* Lemma: e' < 1/50, e <= e'/4, 1 < y < 51/50, 1 < z < 6/5, |h| < e',
 * |h'| < e' imply the rounded z-step stays within e' of
 * (1 + z y)/((1 + z) sqrt y). */
inline unsigned z_error_failures(unsigned trials, std::uint64_t seed) {
    using namespace detail;
    std::mt19937_64 rng(seed);
    unsigned failures = 0;
    for (unsigned i = 0; i < trials; ++i) {
        unsigned long m = pick(rng, 1001, 1000000);
        unsigned long u = pick(rng, 4, (m - 1) / 50); /* e' = u/m < 1/50 */
        mpq_class ep = make_q(u, m);
        unsigned long ty = pick(rng, 1, 100);
        mpz_class dy = mpz_class(m) * ty;
        mpz_class ymax = dy / 50 - 1;
        mpq_class y = 1 + make_q(pick(rng, 1, ymax.get_ui()), dy);
        unsigned long tz = pick(rng, 1, 100);
        mpz_class dz = mpz_class(m) * tz;
        mpz_class zmax = dz / 5 - 1;
        mpq_class z = 1 + make_q(pick(rng, 1, zmax.get_ui()), dz);
        mpq_class h = pick_error(rng, m, u);
        mpq_class hp = pick_error(rng, m, u);

        mpq_class num = 1 + r_mult(z + hp, y + h, m);
        mpq_class den = r_mult(1 + (z + hp), r_sqrt(y + h, m), m);
        mpq_class val = r_div(num, den, m);

        /* val within e' of (1 + z y)/((1 + z) sqrt y), squared through
         * the positive factor (1 + z) sqrt(y). */
        mpq_class sq = (1 + z * y) * (1 + z * y);
        mpq_class zf = (1 + z) * (1 + z) * y;
        mpq_class hi = val - ep;
        bool upper = hi <= 0 || hi * hi * zf < sq;
        mpq_class lo = val + ep;
        bool lower = lo > 0 && lo * lo * zf > sq;
        if (!upper || !lower)
            ++failures;
    }
    return failures;
}

/* Lemma: e' < 1/40, |h| < e'/2, |h'| < e', e <= e'/4, 1 < y < 51/50,
 * 1 < z < 6/5 imply |r_div(1+(y+h), 1+(z+h')) - (1+y)/(1+z)| < 13/10 e'. */
inline unsigned quotient_error_failures(unsigned trials, std::uint64_t seed) {
    using namespace detail;
    std::mt19937_64 rng(seed);
    unsigned failures = 0;
    for (unsigned i = 0; i < trials; ++i) {
        unsigned long m = pick(rng, 1001, 1000000);
        unsigned long u = pick(rng, 4, (m - 1) / 40); /* e' = u/m < 1/40 */
        mpq_class ep = make_q(u, m);
        unsigned long ty = pick(rng, 1, 100);
        mpz_class dy = mpz_class(m) * ty;
        mpz_class ymax = dy / 50 - 1;
        mpq_class y = 1 + make_q(pick(rng, 1, ymax.get_ui()), dy);
        unsigned long tz = pick(rng, 1, 100);
        mpz_class dz = mpz_class(m) * tz;
        mpz_class zmax = dz / 5 - 1;
        mpq_class z = 1 + make_q(pick(rng, 1, zmax.get_ui()), dz);
        /* |h| < e'/2: numerator strictly below u t / 2. */
        unsigned long th = pick(rng, 1, 100);
        unsigned long hmax = (u * th - 1) / 2;
        mpq_class h = make_q(pick(rng, 0, hmax), mpz_class(m) * th);
        if (pick(rng, 0, 1))
            h = -h;
        mpq_class hp = pick_error(rng, m, u);

        mpq_class val = r_div(1 + (y + h), 1 + (z + hp), m);
        mpq_class diff = val - (1 + y) / (1 + z);
        if (diff < 0)
            diff = -diff;
        if (!(diff < mpq_class(13, 10) * ep))
            ++failures;
    }
    return failures;
}

/* Lemma: 0 <= e1 <= 1/100, 0 <= e2 <= 1/100, e < e2/5, 1/2 < p < 921/1000,
 * 1/2 < v <= 1, |h| < e1, |h'| < e2 imply
 *   |r_mult(p+h, v+h') - p v| < e1 + 23/20 e2. */
inline unsigned product_error_failures(unsigned trials, std::uint64_t seed) {
    using namespace detail;
    std::mt19937_64 rng(seed);
    unsigned failures = 0;
    for (unsigned i = 0; i < trials; ++i) {
        unsigned long m = pick(rng, 1001, 1000000);
        unsigned long u1 = pick(rng, 0, m / 100);     /* e1 = u1/m <= 1/100 */
        unsigned long u2 = pick(rng, 6, m / 100);     /* e < e2/5: u2 >= 6 */
        mpq_class e1 = make_q(u1, m);
        mpq_class e2 = make_q(u2, m);
        unsigned long tp = pick(rng, 1, 100);
        mpz_class dp = mpz_class(m) * tp;
        mpz_class pmax = dp * 421 / 1000 - 1;
        mpq_class p = mpq_class(1, 2) +
                      make_q(pick(rng, 1, pmax.get_ui()), dp);
        unsigned long tv = pick(rng, 1, 100);
        mpz_class dv = mpz_class(m) * tv;
        mpz_class vmax = dv / 2;
        mpq_class v = mpq_class(1, 2) +
                      make_q(pick(rng, 1, vmax.get_ui()), dv);
        mpq_class h = pick_error(rng, m, u1);
        mpq_class hp = pick_error(rng, m, u2);

        mpq_class val = r_mult(p + h, v + hp, m);
        mpq_class diff = val - p * v;
        if (diff < 0)
            diff = -diff;
        if (!(diff < e1 + mpq_class(23, 20) * e2))
            ++failures;
    }
    return failures;
}

/* Lemma: 0 < m2 < m1 imply
 *   x/m1 - 1/m2 < floor(x m2 / m1)/m2 <= x/m1. */
inline unsigned change_magnifier_failures(unsigned trials,
                                          std::uint64_t seed) {
    using namespace detail;
    std::mt19937_64 rng(seed);
    unsigned failures = 0;
    for (unsigned i = 0; i < trials; ++i) {
        unsigned long m1 = pick(rng, 2, 10000000);
        unsigned long m2 = pick(rng, 1, m1 - 1);
        mpz_class x = pick(rng, 0, 4 * m1);
        mpz_class v2 = floor_q(make_q(x * m2, m1));
        mpq_class left = make_q(x, m1) - make_q(1, m2);
        mpq_class mid = make_q(v2, m2);
        mpq_class right = make_q(x, m1);
        if (!(left < mid && mid <= right))
            ++failures;
    }
    return failures;
}

} // namespace lemma_trials

#endif

#ifndef PI_FORGE_BORWEIN_HPP
#define PI_FORGE_BORWEIN_HPP

/* Quadratically convergent product algorithm for pi.
 *
 * Starting from y1 = (1 + sqrt(2)) / (2 * 2^(1/4)) and z1 = 2^(1/4), iterate
 *
 *     y_{n+1} = (1 + y_n) / (2 sqrt(y_n))
 *     z_{n+1} = (1 + z_n y_n) / ((1 + z_n) sqrt(y_n))
 *
 * and accumulate prod_n = prod_{i=1..n} (1 + y_i) / (1 + z_i).  Then
 * pi_n = (2 + sqrt(2)) * prod_n decreases to pi with
 *
 *     |pi_n - pi| <= 4 * pi_0 * 531^(-2^(n-1)),   pi_0 = 2 + sqrt(2),
 *
 * and the fixed-point evaluation at magnifier m adds at most (21n + 3)/m of
 * rounding error provided 600(n+1) < m and (for n >= 1) 14 m < 531^(2^n).
 */

#include <cstdint>

#include "pi_forge/budget.hpp"
#include "pi_forge/fixedpoint.hpp"

namespace pi_forge {

/* sqrt(2) is computed once and threaded through to the final product. */
struct BorweinInit {
    FixedReal s2; /* sqrt(2) */
    FixedReal y1;
    FixedReal z1;
};

BorweinInit borwein_init(const Magnifier& m);

/* One (y, z) update; both results land within (2/m, 4/m) of the exact step
 * images when the inputs are within (2/m, 4/m) of the exact iterates. */
std::pair<FixedReal, FixedReal> borwein_step(const Magnifier& m,
                                             const FixedReal& y,
                                             const FixedReal& z);

/* Resumable iteration state: after `steps_done` updates, y/z/prod hold the
 * iterates of index steps_done + 1.  iterations_left counts the updates
 * still owed before borwein_finish may be called. */
struct BorweinState {
    Magnifier m;
    FixedReal s2;
    FixedReal y;
    FixedReal z;
    FixedReal prod;
    unsigned target_n = 0;
    unsigned iterations_left = 0;

    unsigned steps_done() const { return target_n - 1 - iterations_left; }
};

/* Checks preconditions and performs init; requires n >= 1 (n = 0 has no
 * iteration state -- use borwein_pi directly). */
BorweinState borwein_start(const Magnifier& m, unsigned n);
void borwein_advance(BorweinState& st);
FixedReal borwein_finish(const BorweinState& st);

/* pi_n at magnifier m.  Throws BudgetError when the magnifier window of the
 * accuracy claim fails: 600(n+1) < m always; 14 m < 531^(2^n) for n >= 1
 * (the upper bound is vacuous at n = 0, where no iteration happens). */
FixedReal borwein_pi(const Magnifier& m, unsigned n);

/* Smallest n >= log2((D ln(base) - ln(4 pi_0)) / ln 531), evaluated with
 * outward rounding; clamped to >= 0.  Running n+1 iterations then leaves the
 * truncation bound below base^(-D) with the window checked at run time. */
unsigned borwein_iterations_for(std::uint64_t digits, unsigned base = 10);

/* Budget of borwein_pi(m, n): rounding (21 n + 3) ulps, truncation
 * 4 pi_0 * 531^(-2^(n-1)) (at n = 0 bounded by 14/23), one rescale ulp. */
ErrorBudget borwein_budget(unsigned n, const Magnifier& m);

} // namespace pi_forge

#endif

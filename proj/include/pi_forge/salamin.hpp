#ifndef PI_FORGE_SALAMIN_HPP
#define PI_FORGE_SALAMIN_HPP

/* Arithmetic-geometric-mean algorithm for pi (Brent/Salamin).
 *
 * From a_0 = 1, b_0 = 1/sqrt(2), iterate
 *
 *     a_{k+1} = (a_k + b_k) / 2        b_{k+1} = sqrt(a_k b_k)
 *
 * and accumulate the weighted squares of the gaps:
 *
 *     pi'_n = 4 a_n^2 / (1 - sum_{k=1..n-1} 2^(k-1) (a_{k-1} - b_{k-1})^2)
 *
 * with |pi'_{n+1} - pi| <= (132 + 384 * 2^n) * 531^(-2^n).  The fixed-point
 * evaluation uses only halvings (shifts), multiplications, n square roots
 * and a single full division at the very end; its rounding error stays
 * below (160 (3/2)^n + 80 * 3^n + 100) / m when m >= 10^(n+5) * 3^n.
 */

#include <cstdint>
#include <utility>

#include "pi_forge/budget.hpp"
#include "pi_forge/fixedpoint.hpp"

namespace pi_forge {

struct AgmPair {
    FixedReal a;
    FixedReal b;
};

/* a' = (a + b)/2 with a single floor on the halving; b' = sqrt(a b) rounded
 * down.  b' <= a' afterwards (AGM ordering). */
AgmPair agm_step(const Magnifier& m, const AgmPair& pair);

/* Resumable run: after k AGM steps the pair holds (a_k, b_k) -- except that
 * the final step of a run skips b, which the formula never reads -- and
 * `sum` is the mantissa of the accumulated weighted gap squares.  The next
 * term carries weight 2^k. */
struct SalaminState {
    Magnifier m;
    AgmPair pair;
    mpz_class sum;
    std::uint64_t k = 0;
    unsigned target_n = 0;
};

/* Checks preconditions (n >= 1 and m >= 10^(n+5) * 3^n, the window of the
 * rounding claim; BudgetError otherwise) and prepares (a_0, b_0). */
SalaminState salamin_start(const Magnifier& m, unsigned n);
void salamin_advance(SalaminState& st);
FixedReal salamin_finish(const SalaminState& st);

/* pi'_n at magnifier m (n is the formula index; n >= 1). */
FixedReal salamin_pi(const Magnifier& m, unsigned n);

/* Smallest n with (132 + 384 * 2^n) * 531^(-2^n) < base^(-digits) / 2,
 * evaluated with outward rounding.  Running the formula at index n + 1 is
 * then certified against that truncation bound. */
unsigned salamin_iterations_for(std::uint64_t digits, unsigned base = 10);

/* Budget of the run configured by iteration count n, i.e. of the value
 * pi'_{n+1} = salamin_pi(m, n + 1): rounding ceil(160 (3/2)^(n+1) +
 * 80 * 3^(n+1) + 100) ulps, truncation (132 + 384 * 2^n) * 531^(-2^n),
 * one rescale ulp. */
ErrorBudget salamin_budget(unsigned n, const Magnifier& m);

} // namespace pi_forge

#endif

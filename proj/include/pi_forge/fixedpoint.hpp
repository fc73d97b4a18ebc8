#ifndef PI_FORGE_FIXEDPOINT_HPP
#define PI_FORGE_FIXEDPOINT_HPP

/* Fixed-point arithmetic over arbitrary-precision integers.
 *
 * A real number x is represented by the integer mantissa floor(m * x) for a
 * scaling factor m (the "magnifier").  Every rounded operation rounds toward
 * -infinity and satisfies the one-sided window
 *
 *     exact - 1/m < result <= exact
 *
 * so results never overshoot.  Addition, subtraction and multiplication by a
 * small integer are exact.  Only nonnegative values are supported: the error
 * analysis of the consuming algorithms is stated for nonnegative operands,
 * and we turn that assumption into a checked precondition.
 */

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace pi_forge {

struct MagnifierMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/* Raised when an algorithm cannot prove its accuracy claim for the requested
 * parameters (magnifier outside the window its error lemma needs). */
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* The scaling factor m.  Immutable and cheap to copy; the big value is
 * shared.  m must exceed 1000, i.e. at least three digits of working
 * precision, which the rounding lemmas downstream assume (e < 1/1000).
 * Powers of two are detected at construction so multiplications and
 * divisions by m can run as shifts; the shift path is bit-identical to the
 * general path because floor division by 2^k of a nonnegative integer is
 * exactly a right shift. */
class Magnifier {
  public:
    explicit Magnifier(mpz_class value);
    static Magnifier pow2(unsigned long bits);

    const mpz_class& value() const noexcept { return *value_; }
    bool is_pow2() const noexcept { return pow2_; }
    unsigned long pow2_bits() const;
    std::size_t bit_length() const noexcept { return bits_; }

    friend bool operator==(const Magnifier& a, const Magnifier& b) {
        return a.value_ == b.value_ || *a.value_ == *b.value_;
    }
    friend bool operator!=(const Magnifier& a, const Magnifier& b) {
        return !(a == b);
    }

  private:
    std::shared_ptr<const mpz_class> value_;
    std::size_t bits_ = 0;
    unsigned long pow2_bits_ = 0;
    bool pow2_ = false;
};

/* A fixed-point real: mantissa / magnifier.  Operands of a binary operation
 * must carry the same magnifier; mixing magnifiers is a contract violation
 * (change_magnifier is the only sanctioned conversion). */
struct FixedReal {
    mpz_class mantissa;
    Magnifier magnifier;
};

/* floor(sqrt(n)) for n >= 0.  Hardware path below 64 bits, adaptive-precision
 * Newton iteration above, with a final correction enforcing
 * r*r <= n < (r+1)*(r+1). */
mpz_class isqrt(const mpz_class& n);

FixedReal fx_one(const Magnifier& m);
FixedReal fx_two(const Magnifier& m);

/* result = floor(x*y/m); real window (xy - 1/m, xy]. */
FixedReal fx_mul(const Magnifier& m, const FixedReal& x, const FixedReal& y);
/* result = floor(x*m/y); real window (x/y - 1/m, x/y]. */
FixedReal fx_div(const Magnifier& m, const FixedReal& x, const FixedReal& y);
/* result = isqrt(x*m); real window (sqrt(x) - 1/m, sqrt(x)]. */
FixedReal fx_sqrt(const Magnifier& m, const FixedReal& x);

/* Rescale from m1 to a strictly smaller m2: floor(x*m2/m1), losing less than
 * one ulp of m2.  Upscaling is out of contract. */
FixedReal change_magnifier(const Magnifier& m1, const Magnifier& m2,
                           const FixedReal& x);

/* Exact operations (no rounding). */
FixedReal fx_add(const FixedReal& x, const FixedReal& y);
FixedReal fx_sub(const FixedReal& x, const FixedReal& y);
FixedReal int_scale(unsigned long k, const FixedReal& x);

namespace detail {

/* Per-thread operation counters, used to audit algorithm op profiles (e.g.
 * the AGM variant must perform exactly one full division per run). */
struct OpCounts {
    std::uint64_t mul = 0;
    std::uint64_t div = 0;
    std::uint64_t sqrt = 0;
    std::uint64_t halve = 0;
};
OpCounts& op_counts() noexcept;
void reset_op_counts() noexcept;

/* Raw-mantissa kernels.  Callers have already validated nonnegativity and
 * magnifier agreement.  `allow_shift=false` forces the general multiply/
 * divide path even for power-of-two magnifiers; tests use it to confirm the
 * two paths are bit-identical. */
mpz_class hmult(const Magnifier& m, const mpz_class& x, const mpz_class& y,
                bool allow_shift = true);
mpz_class hdiv(const Magnifier& m, const mpz_class& x, const mpz_class& y,
               bool allow_shift = true);
mpz_class hsqrt(const Magnifier& m, const mpz_class& x,
                bool allow_shift = true);
/* floor(x * y * 2^shift / m): a product rescaled once, used where a plain
 * hmult followed by an exact doubling would lose precision. */
mpz_class hmult_scaled(const Magnifier& m, const mpz_class& x,
                       const mpz_class& y, unsigned long shift,
                       bool allow_shift = true);
/* floor(x * m2 / m1). */
mpz_class change_mantissa(const Magnifier& m1, const Magnifier& m2,
                          const mpz_class& x);
/* floor(x / 2) as a shift; counted separately from full divisions. */
mpz_class halve(const mpz_class& x);

} // namespace detail

} // namespace pi_forge

#endif

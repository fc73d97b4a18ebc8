#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "oracle_pi.hpp"
#include "pi_forge/digits.hpp"

using namespace pi_forge;

namespace {

mpz_class pow_ui(unsigned long b, unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), b, e);
    return r;
}

/* Source mantissa at m1 whose rescale to m2 lands exactly on v2:
 * x = ceil(v2 m1 / m2) gives floor(x m2 / m1) = v2 because m2 < m1. */
mpz_class craft_source(const mpz_class& v2, const mpz_class& m1,
                       const mpz_class& m2) {
    mpz_class num = v2 * m1;
    mpz_class x;
    mpz_cdiv_q(x.get_mpz_t(), num.get_mpz_t(), m2.get_mpz_t());
    return x;
}

} // namespace

TEST_SUITE_BEGIN("digits");

TEST_CASE("render: positional digit strings") {
    CHECK(render(31415, 4, 10) == "3.1415");
    CHECK(render(mpz_class(0x3243F), 4, 16) == "3.243F");
    CHECK(render(30001, 4, 10) == "3.0001");   /* fraction zero-pads */
    CHECK(render(5, 3, 10) == "0.005");
    CHECK(render(399999, 4, 10) == "39.9999"); /* top of the range */
    CHECK_THROWS_AS(render(400000, 4, 10), DomainError);
    CHECK_THROWS_AS(render(-1, 4, 10), DomainError);
    CHECK_THROWS_AS(render(31415, 4, 7), DomainError);
}

TEST_CASE("parse: inverse of render plus error cases") {
    CHECK(parse_digits("3.1415", 10) == 31415);
    CHECK(parse_digits("3.243F", 16) == 0x3243F);
    CHECK(parse_digits("3.243f", 16) == 0x3243F); /* case-insensitive */
    CHECK(parse_digits("0.005", 10) == 5);
    CHECK_THROWS_AS(parse_digits("31415", 10), DomainError);  /* no dot */
    CHECK_THROWS_AS(parse_digits(".5", 10), DomainError);
    CHECK_THROWS_AS(parse_digits("3.", 10), DomainError);
    CHECK_THROWS_AS(parse_digits("3.14a5", 10), DomainError);
    CHECK_THROWS_AS(parse_digits("3.24G", 16), DomainError);
    CHECK_THROWS_AS(parse_digits("3.1415", 7), DomainError);
}

TEST_CASE("render/parse round-trips over random values") {
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(20260816UL);
    for (int trial = 0; trial < 10000; ++trial) {
        unsigned base = (trial % 2 == 0) ? 10 : 16;
        unsigned long digits = 1 + (trial % 40);
        mpz_class range = 4 * pow_ui(base, digits + 1);
        mpz_class q = rng.get_z_range(range);
        std::string text = render(q, digits, base);
        CHECK(parse_digits(text, base) == q);
        /* Exactly `digits` fraction digits. */
        CHECK(text.size() - text.find('.') - 1 == digits);
    }
}

TEST_CASE("certification refuses bad configurations up front") {
    FixedReal v{mpz_class(1) << 30, Magnifier::pow2(35)};
    DigitRequest req;
    req.digits = 0;
    CHECK_THROWS_AS(certify_digits(v, req, 10), ConfigError);
    req.digits = 4;
    req.base = 7;
    CHECK_THROWS_AS(certify_digits(v, req, 10), ConfigError);
    req.base = 10;
    /* Working magnifier must strictly exceed base^(digits+guard). */
    FixedReal small{mpz_class(3294198), Magnifier::pow2(20)};
    req.guard_digits = 4;
    CHECK_THROWS_AS(certify_digits(small, req, 10), ConfigError);
    /* Power-of-two magnifiers only on the source side. */
    mpz_class m10 = pow_ui(10, 12);
    FixedReal dec{mpz_class("3141592653589"), Magnifier(m10)};
    CHECK_THROWS_AS(certify_digits(dec, req, 10), DomainError);
    /* Negative budget refused. */
    CHECK_THROWS_AS(certify_digits(v, req, -1), DomainError);
    /* Explicitly requested guard window too small for the budget:
     * B = ceil(2e9 * 10^6/2^35) + 1 = 58209 dwarfs 10^2/2. */
    DigitRequest tight;
    tight.digits = 4;
    tight.guard_digits = 2;
    CHECK_THROWS_AS(certify_digits(v, tight, mpz_class("2000000000")),
                    ConfigError);
}

TEST_CASE("ambiguous verdicts at both window edges (crafted fixtures)") {
    /* m1 = 2^35, N = 4, g = 4, so m2 = 10^8.  The crafted source rescales
     * to exactly the chosen v2. */
    const mpz_class m1 = mpz_class(1) << 35;
    const mpz_class m2 = pow_ui(10, 8);
    DigitRequest req;
    req.digits = 4;
    req.guard_digits = 4;

    /* Low edge: remainder 1 under B = ceil(146300 * m2/m1) + 1 = 427. */
    mpz_class v2_low = 31415 * pow_ui(10, 4) + 1;
    FixedReal low{craft_source(v2_low, m1, m2), Magnifier::pow2(35)};
    DigitReport rep = certify_digits(low, req, 146300);
    CHECK(rep.verdict == Verdict::ambiguous);
    CHECK(rep.window_bound == 427);
    CHECK(rep.guard_remainder == 1);
    CHECK(rep.guard_digits == 4);
    CHECK(rep.value == 31415);
    CHECK(rep.digit_string == "3.1415"); /* rendered but not certified */

    /* High edge: remainder 9998 against base^g - B = 9995 when the budget
     * is 1200 (B = ceil(1200 * m2/m1) + 1 = 5). */
    mpz_class v2_high = 31415 * pow_ui(10, 4) + 9998;
    FixedReal high{craft_source(v2_high, m1, m2), Magnifier::pow2(35)};
    rep = certify_digits(high, req, 1200);
    CHECK(rep.verdict == Verdict::ambiguous);
    CHECK(rep.window_bound == 5);
    CHECK(rep.guard_remainder == 9998);

    /* Interior remainder with the same budget: certified. */
    mpz_class v2_mid = 31415 * pow_ui(10, 4) + 5000;
    FixedReal mid{craft_source(v2_mid, m1, m2), Magnifier::pow2(35)};
    rep = certify_digits(mid, req, 1200);
    CHECK(rep.verdict == Verdict::certified);
    CHECK(rep.guard_remainder == 5000);
    CHECK(rep.digit_string == "3.1415");
}

TEST_CASE("hex certification against the oracle") {
    /* v2 = floor(pi * 16^8); the quotient by 16^4 is 0x3243F. */
    const mpz_class m1 = mpz_class(1) << 35;
    const mpz_class m2 = pow_ui(16, 8);
    mpz_class v2 = oracle::pi_floor(8, 16);
    FixedReal src{craft_source(v2, m1, m2), Magnifier::pow2(35)};
    DigitRequest req;
    req.digits = 4;
    req.base = 16;
    req.guard_digits = 4;
    DigitReport rep = certify_digits(src, req, 100);
    CHECK(rep.verdict == Verdict::certified);
    CHECK(rep.window_bound == 14); /* ceil(100 * 2^32/2^35) + 1 */
    CHECK(rep.digit_string == "3.243F");
    CHECK(rep.digit_string == oracle::pi_digits(4, 16));
}

TEST_CASE("auto guard sizing keeps the window feasible") {
    /* budget 146300 auto-sizes to g = 6 (10^6 > 2 (budget + 2)); the
     * window bound at the wider scale must still clear base^g/2. */
    FixedReal src{oracle::pi_floor_bits(60), Magnifier::pow2(60)};
    DigitRequest req;
    req.digits = 4;
    DigitReport rep = certify_digits(src, req, 146300);
    CHECK(rep.guard_digits == 6);
    CHECK(pow_ui(10, 6) > 2 * rep.window_bound);
    /* Independent recomputation of B = ceil(budget m2/m1) + 1. */
    mpz_class expect;
    mpz_class num = 146300 * pow_ui(10, 10);
    mpz_class den = mpz_class(1) << 60;
    mpz_cdiv_q(expect.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    CHECK(rep.window_bound == expect + 1);
    CHECK(rep.verdict == Verdict::certified);
    CHECK(rep.digit_string == "3.1415");
}

TEST_CASE("doubling the budget can only lose the verdict, never move a "
          "digit") {
    /* True value at m1 = 2^60, N = 10, explicit g = 6: the remainder is
     * fixed, the window bound grows with the budget, so the verdict
     * decays monotonically from certified to ambiguous while the rendered
     * digits stay put. */
    FixedReal src{oracle::pi_floor_bits(60), Magnifier::pow2(60)};
    DigitRequest req;
    req.digits = 10;
    req.guard_digits = 6;
    std::string digits;
    bool seen_ambiguous = false;
    bool seen_certified = false;
    for (mpz_class budget = 1; budget <= 40000000; budget *= 2) {
        DigitReport rep = certify_digits(src, req, budget);
        if (digits.empty())
            digits = rep.digit_string;
        CHECK(rep.digit_string == digits);
        if (rep.verdict == Verdict::ambiguous) {
            seen_ambiguous = true;
        } else {
            /* Certified after ambiguous would mean the window grew back. */
            CHECK(!seen_ambiguous);
            seen_certified = true;
            CHECK(rep.digit_string == oracle::pi_digits(10));
        }
    }
    CHECK(seen_certified);
    CHECK(seen_ambiguous);
}

TEST_CASE("certified thousand-digit extraction matches the oracle") {
    FixedReal src{oracle::pi_floor_bits(3400), Magnifier::pow2(3400)};
    DigitRequest req;
    req.digits = 1000;
    DigitReport rep = certify_digits(src, req, 1);
    CHECK(rep.verdict == Verdict::certified);
    CHECK(rep.guard_digits == 4);
    CHECK(rep.digit_string == oracle::pi_digits(1000));
}

TEST_CASE("a certified verdict is never wrong under an honest budget") {
    /* Perturb the true mantissa by up to the declared budget and certify:
     * whenever the verdict is `certified`, the digits must be the true
     * ones.  Ambiguity is allowed; wrongness is not. */
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(97531UL);
    /* Wide enough for 25 hex digits plus their auto guard: 16^36 = 2^144. */
    const unsigned bits = 160;
    mpz_class truth = oracle::pi_floor_bits(bits);
    int certified = 0;
    for (int trial = 0; trial < 200; ++trial) {
        unsigned long digits = 1 + (trial % 25);
        unsigned base = (trial % 3 == 0) ? 16 : 10;
        mpz_class budget = rng.get_z_range(mpz_class("1000000000000"));
        mpz_class delta = rng.get_z_range(2 * budget + 1) - budget;
        FixedReal src{truth + delta, Magnifier::pow2(bits)};
        DigitRequest req;
        req.digits = digits;
        req.base = base;
        DigitReport rep = certify_digits(src, req, budget);
        if (rep.verdict == Verdict::certified) {
            ++certified;
            CHECK(rep.digit_string == oracle::pi_digits(digits, base));
        }
    }
    /* The perturbations are small against 2^140; most trials certify. */
    CHECK(certified > 150);
}

TEST_CASE("crosscheck: spot checks against the spigot extractor") {
    /* True first ten hex digits. */
    CrosscheckResult ok =
        crosscheck("3.243F6A8885", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    CHECK(ok.entries.size() == 10);
    CHECK(!ok.any_mismatch);
    CHECK(ok.all_conclusive);
    for (const CrosscheckEntry& e : ok.entries) {
        CHECK(e.verdict == CrossVerdict::match);
        CHECK(e.spigot_digit == e.file_digit);
    }

    /* Vacuous check: no positions, no failures. */
    CrosscheckResult empty = crosscheck("3.243F", {});
    CHECK(empty.entries.empty());
    CHECK(!empty.any_mismatch);
    CHECK(empty.all_conclusive);

    /* A corrupted digit is flagged exactly where it sits. */
    CrosscheckResult bad = crosscheck("3.243F7A88", {1, 5, 6});
    CHECK(bad.any_mismatch);
    CHECK(bad.entries[0].verdict == CrossVerdict::match);
    CHECK(bad.entries[1].verdict == CrossVerdict::mismatch);
    CHECK(bad.entries[1].file_digit == 7);
    CHECK(bad.entries[1].spigot_digit == 6);
    CHECK(bad.entries[2].verdict == CrossVerdict::match);

    /* Positions outside the rendered fraction are domain errors. */
    CHECK_THROWS_AS(crosscheck("3.243F", {5}), DomainError);
    CHECK_THROWS_AS(crosscheck("3.243F", {0}), DomainError);
    CHECK_THROWS_AS(crosscheck("3243F", {1}), DomainError);
    CHECK_THROWS_AS(crosscheck("3.24ZF", {3}), DomainError);
}

TEST_SUITE_END();

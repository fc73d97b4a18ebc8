#include "pi_forge/digits.hpp"

#include <cassert>
#include <cctype>

#include "pi_forge/bbp.hpp"
#include "pi_forge/budget.hpp"

namespace pi_forge {

namespace {

mpz_class pow_uz(unsigned base, std::uint64_t e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), base, static_cast<unsigned long>(e));
    return p;
}

int digit_value(char c, unsigned base) {
    int v;
    if (c >= '0' && c <= '9')
        v = c - '0';
    else if (c >= 'a' && c <= 'f')
        v = 10 + (c - 'a');
    else if (c >= 'A' && c <= 'F')
        v = 10 + (c - 'A');
    else
        return -1;
    return v < static_cast<int>(base) ? v : -1;
}

} // namespace

DigitReport certify_digits(const FixedReal& value, const DigitRequest& req,
                           const mpz_class& budget_ulps) {
    if (req.digits < 1)
        throw ConfigError("certify_digits: digit count must be >= 1");
    if (req.base != 10 && req.base != 16)
        throw ConfigError("certify_digits: base must be 10 or 16");
    if (!value.magnifier.is_pow2())
        throw DomainError(
            "certify_digits: value must use a power-of-two magnifier");
    if (value.mantissa < 0 || budget_ulps < 0)
        throw DomainError("certify_digits: negative value or budget");

    unsigned g = req.guard_digits != 0
                     ? req.guard_digits
                     : guard_digits_for(req.base, budget_ulps);
    mpz_class m2 = pow_uz(req.base, req.digits + g);
    const mpz_class& m1 = value.magnifier.value();
    if (!(m2 < m1))
        throw ConfigError("certify_digits: working magnifier must exceed "
                          "base^(digits + guard)");

    FixedReal rescaled = change_magnifier(value.magnifier, Magnifier(m2),
                                          value);

    /* B = ceil(budget * m2/m1) + 1: the declared bound at the new scale
     * plus one ulp for the rescale floor. */
    mpz_class bound;
    mpz_class scaled = budget_ulps * m2;
    mpz_cdiv_q(bound.get_mpz_t(), scaled.get_mpz_t(), m1.get_mpz_t());
    bound += 1;

    mpz_class powg = pow_uz(req.base, g);
    if (!(powg > 2 * bound)) {
        if (req.guard_digits != 0)
            throw ConfigError("certify_digits: guard window too small for "
                              "the declared budget");
        /* Auto-sizing guarantees base^g > 2 (budget + 2) >= 2B. */
        assert(false && "auto guard sizing violated its own window");
        throw ConfigError("certify_digits: guard window too small");
    }

    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), rescaled.mantissa.get_mpz_t(),
                powg.get_mpz_t());

    DigitReport report;
    report.guard_digits = g;
    report.guard_remainder = r;
    report.window_bound = bound;
    report.budget_ulps = budget_ulps;
    report.value = q;
    report.verdict = (bound < r && r < powg - bound) ? Verdict::certified
                                                     : Verdict::ambiguous;
    report.digit_string = render(q, req.digits, req.base);
    return report;
}

std::string render(const mpz_class& q, std::uint64_t digits, unsigned base) {
    if (base != 10 && base != 16)
        throw DomainError("render: base must be 10 or 16");
    if (q < 0)
        throw DomainError("render: negative value");
    mpz_class powN = pow_uz(base, digits);
    if (!(q < 4 * powN * base))
        throw DomainError("render: value out of range");
    mpz_class ip, fp;
    mpz_fdiv_qr(ip.get_mpz_t(), fp.get_mpz_t(), q.get_mpz_t(),
                powN.get_mpz_t());
    /* Negative base selects uppercase digits in the conversion. */
    int b = base == 16 ? -16 : 10;
    std::string ip_str = ip.get_str(b);
    std::string fp_str = fp.get_str(b);
    std::string out;
    out.reserve(ip_str.size() + 1 + digits);
    out += ip_str;
    out += '.';
    if (fp_str.size() < digits)
        out.append(digits - fp_str.size(), '0');
    out += fp_str;
    return out;
}

mpz_class parse_digits(const std::string& text, unsigned base) {
    if (base != 10 && base != 16)
        throw DomainError("parse_digits: base must be 10 or 16");
    std::size_t dot = text.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 >= text.size())
        throw DomainError("parse_digits: expected \"i.f\" with nonempty "
                          "parts");
    mpz_class acc = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (i == dot)
            continue;
        int v = digit_value(text[i], base);
        if (v < 0)
            throw DomainError("parse_digits: invalid digit");
        acc = acc * base + v;
    }
    return acc;
}

CrosscheckResult crosscheck(const std::string& hex_digits,
                            const std::vector<std::uint64_t>& positions,
                            unsigned threads) {
    std::size_t dot = hex_digits.find('.');
    if (dot == std::string::npos)
        throw DomainError("crosscheck: digit string has no '.'");
    std::size_t frac_len = hex_digits.size() - dot - 1;

    CrosscheckResult result;
    result.entries.reserve(positions.size());
    for (std::uint64_t d : positions) {
        if (d < 1 || d > frac_len)
            throw DomainError("crosscheck: position outside the rendered "
                              "digits");
        CrosscheckEntry entry;
        entry.position = d;
        entry.file_digit = digit_value(hex_digits[dot + d], 16);
        if (entry.file_digit < 0)
            throw DomainError("crosscheck: invalid hex digit in input");

        unsigned p = choose_precision(d);
        while (true) {
            auto digit = pi_hex_digit(BbpParams{d, p}, threads);
            if (digit) {
                entry.spigot_digit = static_cast<int>(*digit);
                break;
            }
            if (p + 4 > kMaxPrecisionBits)
                break;
            p += 4;
        }

        if (entry.spigot_digit < 0)
            entry.verdict = CrossVerdict::inconclusive;
        else if (entry.spigot_digit == entry.file_digit)
            entry.verdict = CrossVerdict::match;
        else
            entry.verdict = CrossVerdict::mismatch;
        if (entry.verdict == CrossVerdict::mismatch)
            result.any_mismatch = true;
        if (entry.verdict == CrossVerdict::inconclusive)
            result.all_conclusive = false;
        result.entries.push_back(entry);
    }
    return result;
}

} // namespace pi_forge

#include "pi_forge/bbp.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <stdexcept>
#include <thread>
#include <vector>

#include "pi_forge/fixedpoint.hpp"

namespace pi_forge {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

/* Low-sum partial over the index range [lo, hi): each term is
 * floor(2^p * (16^(d-1-i) mod r) / r) with r = 8i+k, accumulated modulo
 * 2^p.  Because every term is < 2^p and the sum is reduced at each step,
 * range partials merge by modular addition into exactly the sequential
 * result, whatever the partition. */
u64 low_range(unsigned k, const BbpParams& params, u64 lo, u64 hi) {
    const u64 mask_mod = u64(1) << params.p; /* p <= 60: fits */
    u64 res = 0;
    for (u64 i = lo; i < hi; ++i) {
        u64 r = 8 * i + k;
        u64 t = pow_mod(16, params.d - 1 - i, r);
        u64 term = static_cast<u64>((static_cast<u128>(t) << params.p) / r);
        res += term;
        if (res >= mask_mod)
            res -= mask_mod;
    }
    return res;
}

} // namespace

u64 pow_mod(u64 base, u64 exp, u64 modulus) {
    if (modulus == 0)
        throw DomainError("pow_mod: modulus must be positive");
    if (modulus == 1)
        return 0;
    u64 result = 1;
    u64 b = base % modulus;
    while (exp > 0) {
        if (exp & 1)
            result = mul_mod(result, b, modulus);
        b = mul_mod(b, b, modulus);
        exp >>= 1;
    }
    return result;
}

BbpLowState bbp_low_step(unsigned k, const BbpParams& params,
                         const BbpLowState& st) {
    assert(st.i < params.d);
    const u64 mask_mod = u64(1) << params.p;
    u64 r = 8 * st.i + k;
    u64 t = pow_mod(16, params.d - 1 - st.i, r);
    u64 term = static_cast<u64>((static_cast<u128>(t) << params.p) / r);
    u64 res = st.res + term;
    if (res >= mask_mod)
        res -= mask_mod;
    return {st.i + 1, res};
}

u64 bbp_sum_low(unsigned k, const BbpParams& params) {
    return low_range(k, params, 0, params.d);
}

BbpMidState bbp_mid_step(unsigned k, const BbpMidState& st) {
    u64 r = 8 * st.i + k;
    return {st.i + 1, st.s / 16, st.res + st.s / r};
}

u64 bbp_sum_mid(unsigned k, const BbpParams& params) {
    BbpMidState st{params.d, u64(1) << (params.p - 4), 0};
    for (unsigned j = 0; j < params.p / 4; ++j)
        st = bbp_mid_step(k, st);
    return st.res;
}

u64 bbp_sum(unsigned k, const BbpParams& params) {
    return bbp_sum_low(k, params) + bbp_sum_mid(k, params);
}

std::optional<unsigned> pi_hex_digit(const BbpParams& params,
                                     unsigned threads) {
    const u64 d = params.d;
    const unsigned p = params.p;
    if (d < 1 || p > kMaxPrecisionBits)
        return std::nullopt;
    /* First guard: enough bits for the digit window at all. */
    if (!(3 < p))
        return std::nullopt;
    /* Second guard: the total defect delta must stay well below the digit
     * boundary: 8*delta < 2^(p-4). */
    const u64 delta = d + p / 4 + 1;
    if (p < 8 || !(8 * delta < (u64(1) << (p - 4))))
        return std::nullopt;

    static const unsigned ks[4] = {1, 4, 5, 6};
    u64 sums[4];

    if (threads <= 1 || d < 4096) {
        for (int j = 0; j < 4; ++j)
            sums[j] = bbp_sum(ks[j], params);
    } else {
        /* Flatten (k, index-range) chunks into one task list; merge partial
         * results in task order so the digit never depends on scheduling. */
        const u64 chunk = (d + threads - 1) / threads;
        struct Task {
            unsigned kidx;
            u64 lo, hi;
        };
        std::vector<Task> tasks;
        for (unsigned kidx = 0; kidx < 4; ++kidx)
            for (u64 lo = 0; lo < d; lo += chunk)
                tasks.push_back({kidx, lo, std::min(lo + chunk, d)});
        std::vector<u64> partial(tasks.size(), 0);
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t idx = next.fetch_add(1);
                    if (idx >= tasks.size())
                        return;
                    const Task& task = tasks[idx];
                    partial[idx] =
                        low_range(ks[task.kidx], params, task.lo, task.hi);
                }
            });
        for (auto& th : pool)
            th.join();
        const u64 mask_mod = u64(1) << p;
        for (int j = 0; j < 4; ++j)
            sums[j] = 0;
        for (std::size_t idx = 0; idx < tasks.size(); ++idx) {
            u64& s = sums[tasks[idx].kidx];
            s += partial[idx];
            if (s >= mask_mod)
                s -= mask_mod;
        }
        for (int j = 0; j < 4; ++j) {
            sums[j] += bbp_sum_mid(ks[j], params);
        }
    }

    /* Y = 4*S1 + (9*2^p - (2*S4 + S5 + S6 + 4*delta)): the weighted
     * combination shifted into the positive range (each S_k is below
     * 2*2^p, so 9*2^p dominates the subtracted group).  The candidate
     * digit of X is (X mod 2^p) >> (p-4); it is accepted only when Y and
     * Y + 8*delta agree, which proves the defect cannot move the digit. */
    const u128 pow_p = u128(1) << p;
    u128 y = 4 * static_cast<u128>(sums[0]) +
             (9 * pow_p - (2 * static_cast<u128>(sums[1]) + sums[2] +
                           sums[3] + 4 * static_cast<u128>(delta)));
    auto digit_of = [&](u128 x) {
        return static_cast<unsigned>((x % pow_p) >> (p - 4));
    };
    unsigned v1 = digit_of(y);
    unsigned v2 = digit_of(y + 8 * static_cast<u128>(delta));
    if (v1 != v2)
        return std::nullopt;
    return v2;
}

unsigned choose_precision(u64 d, unsigned slack_bits) {
    if (d < 1)
        throw DomainError("choose_precision: position must be >= 1");
    unsigned p = 4;
    for (;;) {
        u64 delta = d + p / 4 + 1;
        if (8 * delta < (u64(1) << (p - 4)))
            break;
        p += 4;
        if (p > kMaxPrecisionBits)
            throw DomainError("choose_precision: position too large");
    }
    p += ((slack_bits + 3) / 4) * 4;
    return p;
}

} // namespace pi_forge

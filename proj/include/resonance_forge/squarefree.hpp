#pragma once

// Square/squarefree splitting n = s^2 * r of positive integers.
//
// Trial division by primes below 2^14, then Pollard rho on a cofactor that
// fits in 64 bits. A composite cofactor above 2^64 that is not a perfect
// square is left inside r unreduced; every radicand the library produces
// from normalization constants is smooth, so the limit is never reached there.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

namespace rf {
namespace detail {

inline const std::vector<unsigned>& small_primes() {
    static const std::vector<unsigned> primes = [] {
        constexpr unsigned limit = 1u << 14;
        std::vector<bool> composite(limit + 1, false);
        std::vector<unsigned> out;
        for (unsigned p = 2; p <= limit; ++p) {
            if (composite[p]) continue;
            out.push_back(p);
            for (unsigned long q = static_cast<unsigned long>(p) * p; q <= limit; q += p) composite[q] = true;
        }
        return out;
    }();
    return primes;
}

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

inline u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

inline void factor_u64(u64 n, std::map<u64, int>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        ++out[n];
        return;
    }
    u64 d = pollard_rho(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

}  // namespace detail

struct SquareSplit {
    mpz_class square_root;  // s
    mpz_class radicand;     // r, squarefree up to the documented limit
};

inline SquareSplit split_square(const mpz_class& n_in) {
    SquareSplit out{1, 1};
    if (n_in <= 0) return out;
    if (mpz_perfect_square_p(n_in.get_mpz_t())) {
        mpz_sqrt(out.square_root.get_mpz_t(), n_in.get_mpz_t());
        return out;
    }
    mpz_class n = n_in;
    for (unsigned p : detail::small_primes()) {
        if (mpz_cmp_ui(n.get_mpz_t(), static_cast<unsigned long>(p) * p) < 0) break;
        if (!mpz_divisible_ui_p(n.get_mpz_t(), p)) continue;
        int e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) out.square_root *= p;
        if (e % 2) out.radicand *= p;
    }
    if (n == 1) return out;
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        mpz_class s;
        mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
        out.square_root *= s;
        return out;
    }
    if (n.fits_ulong_p()) {
        std::map<detail::u64, int> f;
        detail::factor_u64(n.get_ui(), f);
        for (auto [p, e] : f) {
            mpz_class pp(static_cast<unsigned long>(p));
            for (int i = 0; i < e / 2; ++i) out.square_root *= pp;
            if (e % 2) out.radicand *= pp;
        }
        return out;
    }
    out.radicand *= n;  // canonicalization limit
    return out;
}

}  // namespace rf

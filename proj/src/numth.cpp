#include "evlab/numth.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "evlab/errors.hpp"

namespace evlab::numth {

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 m) {
    // extended Euclid on signed 128-bit accumulators
    __int128 t = 0, newt = 1;
    __int128 r = m, newr = a % m;
    while (newr != 0) {
        __int128 q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    if (r != 1) throw NotCoprimeError("invmod: arguments not coprime");
    if (t < 0) t += m;
    return static_cast<u64>(t);
}

bool is_prime(u64 m) {
    if (m < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                  29ull, 31ull, 37ull}) {
        if (m % p == 0) return m == p;
    }
    u64 d = m - 1;
    int s = std::countr_zero(d);
    d >>= s;
    // This witness set is complete for 64-bit inputs.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                  29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, m);
        if (x == 1 || x == m - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, m);
            if (x == m - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

u64 next_prime(u64 m) {
    if (m <= 2) return 2;
    if (m % 2 == 0) ++m;
    while (!is_prime(m)) m += 2;
    return m;
}

std::vector<u64> primes_up_to(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<bool> sieve(limit + 1, true);
    sieve[0] = sieve[1] = false;
    for (u64 i = 2; i * i <= limit; ++i)
        if (sieve[i])
            for (u64 j = i * i; j <= limit; j += i) sieve[j] = false;
    for (u64 i = 2; i <= limit; ++i)
        if (sieve[i]) out.push_back(i);
    return out;
}

namespace {

u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        u64 x = 2, y = 2, d = 1;
        do {
            x = f(x);
            y = f(f(y));
            u64 diff = x > y ? x - y : y - x;
            d = diff ? gcd(diff, n) : n;
        } while (d == 1);
        if (d != n) return d;
    }
}

void factor_rec(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

std::vector<std::pair<u64, int>> factorize(u64 n) {
    std::vector<std::pair<u64, int>> out;
    if (n == 0) throw Error("factorize(0)");
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    std::vector<u64> rest;
    factor_rec(n, rest);
    std::sort(rest.begin(), rest.end());
    for (std::size_t i = 0; i < rest.size();) {
        std::size_t j = i;
        while (j < rest.size() && rest[j] == rest[i]) ++j;
        out.emplace_back(rest[i], static_cast<int>(j - i));
        i = j;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::pair<u64, int> largest_prime_power_divisor(u64 n) {
    if (n < 2) throw Error("largest_prime_power_divisor: n < 2");
    u64 best = 1, bp = 1;
    int ba = 0;
    for (auto [p, a] : factorize(n)) {
        u64 pw = 1;
        for (int i = 0; i < a; ++i) pw *= p;
        if (pw > best) {
            best = pw;
            bp = p;
            ba = a;
        }
    }
    return {bp, ba};
}

int cmp_pow(u64 a, u64 ea, u64 b, u64 eb) {
    if (ea > 1'000'000 || eb > 1'000'000) throw TooLargeError("cmp_pow exponent");
    mpz_class A, B;
    mpz_ui_pow_ui(A.get_mpz_t(), static_cast<unsigned long>(a),
                  static_cast<unsigned long>(ea));
    mpz_ui_pow_ui(B.get_mpz_t(), static_cast<unsigned long>(b),
                  static_cast<unsigned long>(eb));
    int c = cmp(A, B);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

u64 ceil_pow_frac(u64 n, u64 num, u64 den) {
    if (den == 0) throw Error("ceil_pow_frac: zero denominator");
    if (num == 0 || n <= 1) return 1;
    u64 g = gcd(num, den);
    num /= g;
    den /= g;
    long double est = std::pow(static_cast<long double>(n),
                               static_cast<long double>(num) / den);
    u64 m = est > 2 ? static_cast<u64>(est) - 2 : 1;
    while (m > 1 && cmp_pow(m - 1, den, n, num) >= 0) --m;
    while (cmp_pow(m, den, n, num) < 0) ++m;
    return m;
}

u64 dirichlet_prime(u64 m, u64 a, u64 cap) {
    if (m == 0) throw Error("dirichlet_prime: m = 0");
    a %= m;
    if (m == 1) return 2;
    if (gcd(a, m) != 1) throw NotCoprimeError("dirichlet_prime: gcd(a,m) != 1");
    u64 x = (a >= 2) ? a : a + m;
    for (; x <= cap; x += m)
        if (is_prime(x)) return x;
    throw CapExceededError("dirichlet_prime: search cap exceeded");
}

u64 dirichlet_max(u64 m, u64 cap) {
    if (m == 1) return 2;
    u64 best = 0;
    for (u64 a = 1; a < m; ++a)
        if (gcd(a, m) == 1) best = std::max(best, dirichlet_prime(m, a, cap));
    return best;
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        u64 num = std::stoull(s.substr(0, slash));
        u64 den = std::stoull(s.substr(slash + 1));
        if (den == 0) throw FormatError("rational with zero denominator");
        u64 g = gcd(num, den);
        return {num / g, den / g};
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return {std::stoull(s), 1};
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if (frac.size() > 18) throw FormatError("decimal too long");
    u64 den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    u64 num = (whole.empty() ? 0 : std::stoull(whole)) * den +
              (frac.empty() ? 0 : std::stoull(frac));
    u64 g = gcd(num, den);
    if (g == 0) return {0, 1};
    return {num / g, den / g};
}

bool is_near_fermat(u64 p, Rational eps) {
    if (!is_prime(p)) return false;
    u64 odd = p - 1;
    if (odd == 0) return false;
    while (odd % 2 == 0) odd /= 2;
    // odd part of p-1 at most p^eps  <=>  odd^den <= p^num
    return cmp_pow(odd, eps.den, p, eps.num) <= 0;
}

std::vector<u64> near_fermat_primes(Rational eps, u64 limit) {
    if (eps.num == 0 || eps.num >= eps.den)
        throw Error("near_fermat_primes: eps must be in (0,1)");
    std::vector<u64> out;
    if (limit >= 2) out.push_back(2);  // odd part of 1 is 1
    for (int s = 1; s < 63; ++s) {
        u64 pw = u64(1) << s;
        if (pw >= limit) break;
        for (u64 m = 1;; m += 2) {
            if (m > (limit - 1) / pw) break;
            // m can only qualify while m^den <= limit^num
            if (cmp_pow(m, eps.den, limit, eps.num) > 0) break;
            u64 p = m * pw + 1;
            if (p > limit) break;
            if (p % 2 == 0) continue;  // only p = 2 handled above
            if (cmp_pow(m, eps.den, p, eps.num) <= 0 && is_prime(p))
                out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

// All multisets of at most 4 primes summing to k (small k only); pick the one
// maximizing the minimum part, then the fewest parts, then lexicographic.
std::optional<std::vector<u64>> small_partition(u64 k) {
    std::vector<u64> primes;
    for (u64 p = 2; p <= k; ++p)
        if (is_prime(p)) primes.push_back(p);
    std::optional<std::vector<u64>> best;
    auto consider = [&](std::vector<u64> cand) {
        std::sort(cand.begin(), cand.end());
        if (!best) {
            best = cand;
            return;
        }
        const auto& b = *best;
        if (cand.front() != b.front()) {
            if (cand.front() > b.front()) best = cand;
            return;
        }
        if (cand.size() != b.size()) {
            if (cand.size() < b.size()) best = cand;
            return;
        }
        if (cand > b) best = cand;
    };
    for (u64 a : primes) {
        if (a == k) consider({a});
        for (u64 b : primes) {
            if (b < a) continue;
            if (a + b == k) consider({a, b});
            for (u64 c : primes) {
                if (c < b) continue;
                if (a + b + c == k) consider({a, b, c});
                if (a + b + c < k) {
                    u64 d = k - a - b - c;
                    if (d >= c && is_prime(d)) consider({a, b, c, d});
                }
            }
        }
    }
    return best;
}

}  // namespace

PrimePartition vinogradov_partition(u64 k) {
    if (k < 2) throw NoPartitionError("no prime partition of k < 2");
    if (k < 12) {
        auto best = small_partition(k);
        if (!best) throw NoPartitionError("no prime partition for small k");
        return {*best, 0};
    }
    const int t = (k % 2 == 1) ? 3 : 4;
    for (int tenths : {1, 2, 3, 5}) {
        // part in [k(10-tenths)/(10t), k(10+tenths)/(10t)]
        u64 lo = (k * (10 - tenths) + 10 * t - 1) / (10 * t);
        u64 hi = (k * (10 + tenths)) / (10 * t);
        if (lo < 2) lo = 2;
        if (t == 3) {
            for (u64 p1 = lo; p1 <= hi; ++p1) {
                if (!is_prime(p1)) continue;
                u64 rest = k - p1;
                u64 p2lo = std::max(p1, rest > hi ? rest - hi : lo);
                for (u64 p2 = std::max(p2lo, lo); p2 <= hi; ++p2) {
                    if (!is_prime(p2)) continue;
                    u64 p3 = rest - p2;
                    if (p3 < p2) break;
                    if (p3 <= hi && is_prime(p3))
                        return {{p1, p2, p3}, tenths};
                }
            }
        } else {
            for (u64 p1 = lo; p1 <= hi; ++p1) {
                if (!is_prime(p1)) continue;
                for (u64 p2 = p1; p2 <= hi; ++p2) {
                    if (!is_prime(p2)) continue;
                    u64 rest = k - p1 - p2;
                    if (rest < 2 * p2) break;
                    u64 p3lo = std::max(p2, rest > hi ? rest - hi : lo);
                    for (u64 p3 = std::max(p3lo, lo); p3 <= hi; ++p3) {
                        if (!is_prime(p3)) continue;
                        u64 p4 = rest - p3;
                        if (p4 < p3) break;
                        if (p4 <= hi && is_prime(p4))
                            return {{p1, p2, p3, p4}, tenths};
                    }
                }
            }
        }
    }
    throw NoPartitionError("vinogradov_partition: no solution within 50% window");
}

u64 t_threshold(u64 h) {
    if (h == 0) throw Error("t_threshold: h = 0");
    for (u64 t = 0;; ++t) {
        if (t > 6) throw TooLargeError("t_threshold: h too large");
        u64 dd = u64(1) << (u64(1) << t);  // 2^(2^t)
        if (dd >= h) return dd - 1;
    }
}

}  // namespace evlab::numth

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evlab/util.hpp"

namespace evlab::numth {

// ---------------------------------------------------------------------------
// Primality and prime searches.

// Deterministic Miller-Rabin, valid for all 64-bit inputs (fixed witness set).
bool is_prime(u64 m);

u64 next_prime(u64 m);  // smallest prime >= m

// All primes <= limit (plain sieve; limit <= ~10^8).
std::vector<u64> primes_up_to(u64 limit);

// Full factorization (trial division + Pollard rho), sorted by prime.
std::vector<std::pair<u64, int>> factorize(u64 n);

// Largest prime power p^a dividing n; returns {p, a}.
std::pair<u64, int> largest_prime_power_divisor(u64 n);

u64 gcd(u64 a, u64 b);
u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);
// Inverse of a mod m (gcd(a,m) must be 1).
u64 invmod(u64 a, u64 m);

// Exact comparison a^ea <=> b^eb (arbitrary magnitude; -1/0/+1).
int cmp_pow(u64 a, u64 ea, u64 b, u64 eb);

// Smallest integer m with m^den >= n^num, i.e. ceil(n^(num/den)) computed
// exactly (never through floating point at the decision boundary).
u64 ceil_pow_frac(u64 n, u64 num, u64 den);

// ---------------------------------------------------------------------------
// Dirichlet primes.  p(m, a) = smallest prime congruent to a mod m.
u64 dirichlet_prime(u64 m, u64 a, u64 cap = (u64(1) << 40));
u64 dirichlet_max(u64 m, u64 cap = (u64(1) << 40));  // max over gcd(a,m)=1

// ---------------------------------------------------------------------------
// Near-Fermat primes: p is eps-near-Fermat when the odd part of p-1 is at
// most p^eps.  eps is an exact rational num/den.
struct Rational {
    u64 num = 0, den = 1;
};
Rational parse_rational(const std::string& s);  // "1/4" or decimal "0.25"

bool is_near_fermat(u64 p, Rational eps);

// All eps-near-Fermat primes <= limit, enumerated by structure
// (p = m * 2^s + 1 with small odd m), so large limits stay cheap.
std::vector<u64> near_fermat_primes(Rational eps, u64 limit);

// ---------------------------------------------------------------------------
// Prime partitions of k into 3 (k odd) or 4 (k even) roughly equal parts.
struct PrimePartition {
    std::vector<u64> parts;  // ascending
    // Relative half-width of the accepted window around k/t, in tenths
    // (1 => 10%).  0 for the small-k lookup cases.
    int window_tenths = 0;
};
PrimePartition vinogradov_partition(u64 k);

// ---------------------------------------------------------------------------
// Partition certificates: fully recheckable decompositions of n produced by
// the scheme planners below.

enum class Scheme { near_fermat, near_eva, uncond_sparse, erh, chowla };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& s);

struct CheckResult {
    std::string name;
    bool holds;
};

struct PartitionCertificate {
    Scheme scheme;
    u64 n = 0;
    std::map<std::string, i64> ints;
    std::map<std::string, std::vector<i64>> lists;
    std::vector<CheckResult> checks;

    bool all_hold() const;
    std::string to_json() const;
    // Parses and re-runs every constraint from the components alone; the
    // stored `checks` field of the input is ignored and recomputed.
    static PartitionCertificate from_json(const std::string& text);
};

// Recompute the full constraint list from scheme + components.
std::vector<CheckResult> recheck(const PartitionCertificate& cert);

struct PlanOutcome {
    std::optional<PartitionCertificate> cert;
    std::string failure;  // empty iff cert is present
    bool ok() const { return cert.has_value(); }
};

// T_H threshold: smallest 2^(2^t) - 1 with 2^(2^t) >= h.
u64 t_threshold(u64 h);

// Forbidden-subgraph scheme driven by a pool of (1/2h)-near-Fermat primes.
// Pool shortfall is a reportable outcome (the underlying infinitude is
// conjectural), not an exception.
PlanOutcome plan_near_fermat(u64 n, u64 h, u64 pool_limit = 2'000'000);

// Unconditional forbidden-subgraph scheme (CRT choice of the tail size).
PartitionCertificate plan_near_eva(u64 n, u64 h);

// Unconditional sparse scheme: case split on the largest prime-power divisor.
PartitionCertificate plan_uncond_sparse(u64 n);

// Conditional sparse schemes.
PartitionCertificate plan_erh(u64 n, Rational eps);
PartitionCertificate plan_chowla(u64 n, Rational delta);

}  // namespace evlab::numth

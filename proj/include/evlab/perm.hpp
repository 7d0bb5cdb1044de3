#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evlab/util.hpp"

namespace evlab::perm {

// A permutation of [n], stored by its image vector.  Composition is
// left-to-right: (a * b) sends x to b(a(x)), matching the exponent
// convention x^(ab) = (x^a)^b used throughout.
class Permutation {
  public:
    explicit Permutation(std::vector<u32> image);
    static Permutation identity(u32 n);
    static Permutation from_cycles(u32 n,
                                   const std::vector<std::vector<u32>>& cycles);

    u32 n() const { return static_cast<u32>(image_.size()); }
    u32 operator()(u32 x) const { return image_[x]; }
    const std::vector<u32>& image() const { return image_; }

    Permutation inverse() const;
    bool is_identity() const;

    friend Permutation operator*(const Permutation& a, const Permutation& b);
    friend bool operator==(const Permutation&, const Permutation&) = default;

  private:
    std::vector<u32> image_;
};

struct PermHash {
    std::size_t operator()(const Permutation& p) const {
        u64 h = 0x9e3779b97f4a7c15ull ^ p.n();
        for (u32 v : p.image()) {
            h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

// Induced action on unordered pairs: a permutation of the C(n,2) pair
// indices (lexicographic pair order shared with the Boolean-function
// variable order).
Permutation pair_action(const Permutation& g);

// Structural hint for Oliver-condition verification, attached by the
// constructions that know their own normal chain.
struct OliverHint {
    u64 p = 0, q = 0;
    std::vector<Permutation> gens2;
    std::vector<Permutation> gens1;
};

struct PermGroup {
    u32 n = 0;
    std::vector<Permutation> generators;
    std::string structure_tag;
    std::optional<u64> order_hint;

    // optional construction metadata
    std::optional<std::vector<u32>> clusters;      // cluster id per point
    bool quotient_declared = false;                // quotient action meaningful?
    std::vector<Permutation> quotient_generators;  // declared action on clusters
    std::optional<OliverHint> oliver_hint;
    std::map<std::string, i64> params;
    std::vector<std::string> notes;

    std::string to_json() const;
    static PermGroup from_json(const std::string& text);
};

PermGroup trivial_group(u32 n);
PermGroup cyclic_group(u32 n);
PermGroup symmetric_group(u32 n);

// ---------------------------------------------------------------------------
// Orbits and orbitals.

std::vector<u32> orbit(const PermGroup& G, u32 x);        // sorted
std::vector<std::vector<u32>> orbits(const PermGroup& G); // by smallest point

struct Orbital {
    u32 rep_i = 0, rep_j = 0;  // representative pair, smallest pair index
    u64 size = 0;
    std::string tag;  // "intra" / "inter" when clusters are declared
};

struct UOrbitalReport {
    u32 n = 0;
    std::vector<Orbital> orbitals;
    std::vector<u32> pair_orbital;  // orbital id per pair index
    u64 m_star = 0;                 // minimum orbital size
    std::optional<u64> m_intra, m_inter;        // cluster-aware minima
    std::optional<u64> m_k_prime, m_k_dblprime; // quotient-action minima

    std::string to_json() const;
    std::string to_tsv() const;
};

UOrbitalReport u_orbitals(const PermGroup& G);

// ---------------------------------------------------------------------------
// Element enumeration (generator closure).  Returns nullopt when the group
// exceeds `cap` elements.
std::optional<std::vector<Permutation>> enumerate_elements(const PermGroup& G,
                                                           u64 cap);
// Exact order: uses the hint when enumeration is infeasible, and
// cross-checks the hint against the enumeration when it is feasible.
u64 group_order(const PermGroup& G, u64 cap = 2'000'000);

// ---------------------------------------------------------------------------
// Constructions.

// Internal semidirect product: gamma and delta act on the same domain and
// delta normalizes gamma, the action being conjugation.  Spot-verifies the
// action on generator pairs and that gamma meets delta trivially.
PermGroup semidirect(const PermGroup& gamma, const PermGroup& delta,
                     u64 cap = 200'000);

// External direct product on the disjoint union of the two domains.
PermGroup direct_product(const PermGroup& a, const PermGroup& b);

// Subgroup of AGL(1,q) of order q*d: maps x -> ax + b with a in the order-d
// subgroup of F_q^*.  Acts on the field codes 0..q-1.
PermGroup gamma_qd(u64 q, u64 d);

// (F_q^+)^k semidirect (F_q^* x Delta_k) acting on [k] x F_q (block-major:
// point = cluster * q + element code), q = p^alpha.
PermGroup gamma0(u64 p, u64 alpha, const PermGroup& delta_k);

// Product of one cyclic factor per distinct partition prime; equal primes
// share a diagonal factor across their blocks.
PermGroup delta_k_vinogradov(u64 k, const std::vector<u64>& partition);

// gamma0 over a Vinogradov-style Delta_k, with the appropriate Oliver chain
// attached (including the case where one partition prime divides p^alpha - 1).
PermGroup gamma0_vinogradov(u64 p, u64 alpha, u64 k,
                            const std::vector<u64>& partition);

// gamma0(p, Delta_k) x gamma_qd(r, q) on [pk] + [r].
PermGroup gamma_pqr(u64 p, u64 k, u64 r, u64 q,
                    const std::vector<u64>& partition);

// ((F_{p^2}^+)^t x (F_p^+)^(k-tp)) semidirect F_{p^2}^*, acting on [pk] with
// t blocks of size p^2 and k-tp blocks of size p.  On the small blocks the
// multiplicative group acts through the homomorphism x -> x^mult_exponent
// into F_p^*; mult_exponent must be a multiple of p+1 (0 selects the norm,
// x -> x^(p+1)).
PermGroup lambda1(u64 p, u64 t, u64 k, u64 mult_exponent = 0);

// (F_p^+)^kT semidirect F_p^* (kT blocks of size p, diagonal multiplicative
// action) times a k'-cycle on the tail.
PermGroup lambda_neareva(u64 p, u64 kT, u64 kprime);

// ---------------------------------------------------------------------------
// Oliver's condition: a chain Gamma_2 normal in Gamma_1 normal in G with
// Gamma_2 a p-group, Gamma_1/Gamma_2 cyclic, G/Gamma_1 a q-group.

struct OliverCertificate {
    u64 p = 0, q = 0;
    std::vector<Permutation> gens_gamma2, gens_gamma1;
    u64 order_gamma2 = 0, order_gamma1 = 0, order_g = 0;

    std::string to_json() const;
};

// Re-verifies every certificate claim by enumeration; never trusts the
// construction.  Reason for failure lands in *why.
bool verify_oliver_certificate(const PermGroup& G, const OliverCertificate& c,
                               std::string* why = nullptr, u64 cap = 2'000'000);

// With a structural hint (attached by the constructions): builds the claimed
// chain and verifies it.  Without one: exhaustive subgroup-lattice search,
// feasible only for small groups.
std::optional<OliverCertificate> oliver_condition(const PermGroup& G,
                                                  u64 cap = 200'000);

}  // namespace evlab::perm

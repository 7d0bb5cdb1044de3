#include "evlab/perm.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "evlab/errors.hpp"
#include "evlab/ffield.hpp"
#include "evlab/numth.hpp"

namespace evlab::perm {

using nlohmann::json;

Permutation::Permutation(std::vector<u32> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (u32 v : image_) {
        if (v >= image_.size() || seen[v])
            throw Error("permutation image is not a bijection");
        seen[v] = true;
    }
}

Permutation Permutation::identity(u32 n) {
    std::vector<u32> img(n);
    std::iota(img.begin(), img.end(), 0);
    return Permutation(std::move(img));
}

Permutation Permutation::from_cycles(u32 n,
                                     const std::vector<std::vector<u32>>& cycles) {
    std::vector<u32> img(n);
    std::iota(img.begin(), img.end(), 0);
    for (const auto& cyc : cycles) {
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            if (cyc[i] >= n) throw Error("cycle entry out of range");
            img[cyc[i]] = cyc[(i + 1) % cyc.size()];
        }
    }
    return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
    std::vector<u32> img(image_.size());
    for (u32 i = 0; i < image_.size(); ++i) img[image_[i]] = i;
    return Permutation(std::move(img));
}

bool Permutation::is_identity() const {
    for (u32 i = 0; i < image_.size(); ++i)
        if (image_[i] != i) return false;
    return true;
}

Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.n() != b.n()) throw Error("composing permutations of different degree");
    std::vector<u32> img(a.n());
    for (u32 i = 0; i < a.n(); ++i) img[i] = b.image_[a.image_[i]];
    return Permutation(std::move(img));
}

Permutation pair_action(const Permutation& g) {
    const u32 n = g.n();
    const u64 np = pair_count(n);
    std::vector<u32> img(np);
    for (u32 i = 0; i < n; ++i) {
        for (u32 j = i + 1; j < n; ++j) {
            u32 a = g(i), b = g(j);
            if (a > b) std::swap(a, b);
            img[pair_index(n, i, j)] = static_cast<u32>(pair_index(n, a, b));
        }
    }
    return Permutation(std::move(img));
}

PermGroup trivial_group(u32 n) {
    PermGroup g;
    g.n = n;
    g.structure_tag = "trivial";
    g.order_hint = 1;
    return g;
}

PermGroup cyclic_group(u32 n) {
    PermGroup g;
    g.n = n;
    g.structure_tag = "Z_" + std::to_string(n);
    g.order_hint = n;
    if (n >= 2) {
        std::vector<u32> cyc(n);
        std::iota(cyc.begin(), cyc.end(), 0);
        g.generators.push_back(Permutation::from_cycles(n, {cyc}));
        // prime-power cyclic chain: 1 normal in <c> normal in <c>
        g.oliver_hint = OliverHint{2, 2, {}, g.generators};
    }
    return g;
}

PermGroup symmetric_group(u32 n) {
    PermGroup g;
    g.n = n;
    g.structure_tag = "Sym_" + std::to_string(n);
    u64 f = 1;
    for (u32 i = 2; i <= n; ++i) f *= i;
    g.order_hint = f;
    if (n >= 2) {
        g.generators.push_back(Permutation::from_cycles(n, {{0, 1}}));
        if (n >= 3) {
            std::vector<u32> cyc(n);
            std::iota(cyc.begin(), cyc.end(), 0);
            g.generators.push_back(Permutation::from_cycles(n, {cyc}));
        }
    }
    return g;
}

// ---------------------------------------------------------------------------

std::vector<u32> orbit(const PermGroup& G, u32 x) {
    if (x >= G.n) throw Error("orbit: point out of domain");
    std::vector<bool> seen(G.n, false);
    std::vector<u32> out, stack{x};
    seen[x] = true;
    while (!stack.empty()) {
        u32 v = stack.back();
        stack.pop_back();
        out.push_back(v);
        for (const auto& g : G.generators) {
            u32 w = g(v);
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<u32>> orbits(const PermGroup& G) {
    std::vector<bool> seen(G.n, false);
    std::vector<std::vector<u32>> out;
    for (u32 x = 0; x < G.n; ++x) {
        if (seen[x]) continue;
        auto orb = orbit(G, x);
        for (u32 v : orb) seen[v] = true;
        out.push_back(std::move(orb));
    }
    return out;
}

UOrbitalReport u_orbitals(const PermGroup& G) {
    if (G.n > 10'000) throw DomainTooLargeError("u_orbitals: n > 10^4");
    UOrbitalReport rep;
    rep.n = G.n;
    const u64 np = pair_count(G.n);
    rep.pair_orbital.assign(np, UINT32_MAX);

    std::vector<u64> work;
    for (u64 start = 0; start < np; ++start) {
        if (rep.pair_orbital[start] != UINT32_MAX) continue;
        const u32 id = static_cast<u32>(rep.orbitals.size());
        work.clear();
        work.push_back(start);
        rep.pair_orbital[start] = id;
        u64 size = 0;
        while (!work.empty()) {
            u64 idx = work.back();
            work.pop_back();
            ++size;
            auto [i, j] = pair_unindex(G.n, idx);
            for (const auto& g : G.generators) {
                u32 a = g(i), b = g(j);
                if (a > b) std::swap(a, b);
                u64 t = pair_index(G.n, a, b);
                if (rep.pair_orbital[t] == UINT32_MAX) {
                    rep.pair_orbital[t] = id;
                    work.push_back(t);
                }
            }
        }
        auto [ri, rj] = pair_unindex(G.n, start);
        Orbital o;
        o.rep_i = ri;
        o.rep_j = rj;
        o.size = size;
        if (G.clusters) {
            const auto& cl = *G.clusters;
            o.tag = (cl[ri] == cl[rj]) ? "intra" : "inter";
        }
        rep.orbitals.push_back(std::move(o));
    }

    rep.m_star = UINT64_MAX;
    for (const auto& o : rep.orbitals) rep.m_star = std::min(rep.m_star, o.size);
    if (rep.orbitals.empty()) rep.m_star = 0;

    if (G.clusters) {
        for (const auto& o : rep.orbitals) {
            if (o.tag == "intra")
                rep.m_intra = std::min(rep.m_intra.value_or(UINT64_MAX), o.size);
            else
                rep.m_inter = std::min(rep.m_inter.value_or(UINT64_MAX), o.size);
        }
        if (G.quotient_declared) {
            const u32 k =
                *std::max_element(G.clusters->begin(), G.clusters->end()) + 1;
            PermGroup quot;
            quot.n = k;
            quot.generators = G.quotient_generators;
            u64 mp = UINT64_MAX;
            for (const auto& orb : orbits(quot)) mp = std::min(mp, u64(orb.size()));
            rep.m_k_prime = mp;
            if (k >= 2) {
                auto qrep = u_orbitals(quot);
                rep.m_k_dblprime = qrep.m_star;
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

std::optional<std::vector<Permutation>> enumerate_elements(const PermGroup& G,
                                                           u64 cap) {
    std::unordered_set<Permutation, PermHash> seen;
    std::vector<Permutation> out;
    std::deque<Permutation> queue;
    Permutation id = Permutation::identity(G.n);
    seen.insert(id);
    queue.push_back(id);
    while (!queue.empty()) {
        Permutation cur = std::move(queue.front());
        queue.pop_front();
        out.push_back(cur);
        for (const auto& g : G.generators) {
            Permutation nxt = cur * g;
            if (seen.insert(nxt).second) {
                if (seen.size() > cap) return std::nullopt;
                queue.push_back(std::move(nxt));
            }
        }
    }
    return out;
}

u64 group_order(const PermGroup& G, u64 cap) {
    auto elems = enumerate_elements(G, cap);
    if (elems) {
        if (G.order_hint && *G.order_hint != elems->size())
            throw Error("group order hint disagrees with enumeration for " +
                        G.structure_tag);
        return elems->size();
    }
    if (G.order_hint) return *G.order_hint;
    throw OrderTooLargeError("group_order: enumeration exceeds cap and no hint");
}

// ---------------------------------------------------------------------------

PermGroup semidirect(const PermGroup& gamma, const PermGroup& delta, u64 cap) {
    if (gamma.n != delta.n)
        throw NotAnActionError("semidirect: factors act on different domains");
    auto eg = enumerate_elements(gamma, cap);
    if (!eg) throw OrderTooLargeError("semidirect: gamma too large to verify");
    std::unordered_set<Permutation, PermHash> gset(eg->begin(), eg->end());

    // psi(d): conjugation by d must map gamma into itself
    for (const auto& d : delta.generators) {
        Permutation dinv = d.inverse();
        for (const auto& g : gamma.generators) {
            if (!gset.count(dinv * g * d))
                throw NotAnActionError(
                    "semidirect: conjugation does not preserve gamma");
        }
    }
    auto ed = enumerate_elements(delta, cap);
    if (!ed) throw OrderTooLargeError("semidirect: delta too large to verify");
    for (const auto& d : *ed) {
        if (!d.is_identity() && gset.count(d))
            throw NotAnActionError("semidirect: gamma and delta intersect");
    }

    PermGroup out;
    out.n = gamma.n;
    out.generators = gamma.generators;
    for (const auto& d : delta.generators) out.generators.push_back(d);
    out.structure_tag = "(" + gamma.structure_tag + ") : (" + delta.structure_tag + ")";
    out.order_hint = u64(eg->size()) * ed->size();
    return out;
}

PermGroup direct_product(const PermGroup& a, const PermGroup& b) {
    PermGroup out;
    out.n = a.n + b.n;
    for (const auto& g : a.generators) {
        std::vector<u32> img(out.n);
        for (u32 i = 0; i < a.n; ++i) img[i] = g(i);
        for (u32 i = a.n; i < out.n; ++i) img[i] = i;
        out.generators.emplace_back(std::move(img));
    }
    for (const auto& g : b.generators) {
        std::vector<u32> img(out.n);
        std::iota(img.begin(), img.begin() + a.n, 0);
        for (u32 i = 0; i < b.n; ++i) img[a.n + i] = a.n + g(i);
        out.generators.emplace_back(std::move(img));
    }
    out.structure_tag = "(" + a.structure_tag + ") x (" + b.structure_tag + ")";
    if (a.order_hint && b.order_hint) {
        auto m = checked_mul(*a.order_hint, *b.order_hint);
        if (m) out.order_hint = *m;
    }
    // merge cluster structure: a missing side counts as one cluster
    u32 amax = 0;
    std::vector<u32> cl(out.n, 0);
    if (a.clusters) {
        for (u32 i = 0; i < a.n; ++i) cl[i] = (*a.clusters)[i];
        amax = a.n ? *std::max_element(a.clusters->begin(), a.clusters->end()) + 1 : 0;
    } else {
        amax = a.n ? 1 : 0;
    }
    if (b.clusters) {
        for (u32 i = 0; i < b.n; ++i) cl[a.n + i] = amax + (*b.clusters)[i];
    } else {
        for (u32 i = 0; i < b.n; ++i) cl[a.n + i] = amax;
    }
    if (a.clusters || b.clusters) out.clusters = std::move(cl);
    return out;
}

// ---------------------------------------------------------------------------
// Field-based constructions.

namespace {

Permutation translation_perm(const ffield::Field& F, u64 b) {
    std::vector<u32> img(F.q());
    for (u64 x = 0; x < F.q(); ++x) img[x] = static_cast<u32>(F.add(x, b));
    return Permutation(std::move(img));
}

Permutation scaling_perm(const ffield::Field& F, u64 a) {
    std::vector<u32> img(F.q());
    for (u64 x = 0; x < F.q(); ++x) img[x] = static_cast<u32>(F.mul(a, x));
    return Permutation(std::move(img));
}

// embed a permutation of a block [offset, offset+m) into [n]
Permutation embed(u32 n, u32 offset, const Permutation& g) {
    std::vector<u32> img(n);
    std::iota(img.begin(), img.end(), 0);
    for (u32 i = 0; i < g.n(); ++i) img[offset + i] = offset + g(i);
    return Permutation(std::move(img));
}

std::pair<u64, u64> prime_power_of(u64 q) {
    auto fac = numth::factorize(q);
    if (fac.size() != 1) throw Error("expected a prime power, got " + std::to_string(q));
    return {fac[0].first, u64(fac[0].second)};
}

}  // namespace

PermGroup gamma_qd(u64 q, u64 d) {
    auto [p, alpha] = prime_power_of(q);
    if (d == 0 || (q - 1) % d != 0)
        throw NotDivisorError("gamma_qd: d must divide q-1");
    ffield::Field F = ffield::Field::make(p, alpha);

    PermGroup G;
    G.n = static_cast<u32>(q);
    std::vector<Permutation> translations;
    for (u64 i = 0; i < alpha; ++i)
        translations.push_back(translation_perm(F, checked_pow(p, i)));
    G.generators = translations;
    std::optional<Permutation> mult;
    if (d > 1) {
        u64 a0 = F.pow(F.primitive_root(), (q - 1) / d);
        mult = scaling_perm(F, a0);
        G.generators.push_back(*mult);
    }
    G.structure_tag = "Gamma(" + std::to_string(q) + "," + std::to_string(d) + ")";
    G.order_hint = q * d;
    G.params = {{"p", i64(p)}, {"alpha", i64(alpha)}, {"q", i64(q)}, {"d", i64(d)}};

    // chain: F_q^+ normal in Gamma(q, odd part of d) normal in Gamma(q,d);
    // the top factor is the 2-part of d.
    u64 d1 = d;
    int s = 0;
    while (d1 % 2 == 0) {
        d1 /= 2;
        ++s;
    }
    OliverHint hint;
    hint.p = p;
    hint.q = 2;
    hint.gens2 = translations;
    hint.gens1 = translations;
    if (d1 > 1 && mult) {
        // generator of the order-d1 subgroup of C_d
        u64 a0 = F.pow(F.primitive_root(), (q - 1) / d);
        hint.gens1.push_back(scaling_perm(F, F.pow(a0, u64(1) << s)));
    }
    G.oliver_hint = std::move(hint);
    return G;
}

PermGroup gamma0(u64 p, u64 alpha, const PermGroup& delta_k) {
    ffield::Field F = ffield::Field::make(p, alpha);
    const u64 q = F.q();
    const u32 k = delta_k.n;
    if (k == 0) throw BadShapeError("gamma0: empty cluster set");
    auto total = checked_mul(q, k);
    if (!total || *total > 100'000)
        throw DomainTooLargeError("gamma0: domain p^alpha * k too large");
    const u32 n = static_cast<u32>(*total);

    PermGroup G;
    G.n = n;
    std::vector<Permutation> translations;
    for (u32 j = 0; j < k; ++j) {
        for (u64 i = 0; i < alpha; ++i) {
            Permutation t = translation_perm(F, checked_pow(p, i));
            translations.push_back(embed(n, static_cast<u32>(j * q), t));
        }
    }
    G.generators = translations;
    std::optional<Permutation> mult;
    if (q > 2) {
        u64 g0 = F.primitive_root();
        std::vector<u32> img(n);
        for (u32 j = 0; j < k; ++j)
            for (u64 x = 0; x < q; ++x)
                img[j * q + x] = static_cast<u32>(j * q + F.mul(g0, x));
        mult = Permutation(std::move(img));
        G.generators.push_back(*mult);
    }
    for (const auto& sigma : delta_k.generators) {
        std::vector<u32> img(n);
        for (u32 j = 0; j < k; ++j)
            for (u64 x = 0; x < q; ++x) img[j * q + x] = sigma(j) * q + x;
        G.generators.emplace_back(std::move(img));
    }

    const u64 dk_order = group_order(delta_k, 2'000'000);
    G.structure_tag = "Gamma0(" + std::to_string(p) + "^" + std::to_string(alpha) +
                      ", " + delta_k.structure_tag + ")";
    {
        // order = q^k (q-1) |Delta_k| when it fits, otherwise leave unset
        u64 acc = 1;
        bool fits = true;
        for (u32 j = 0; j < k && fits; ++j) {
            auto m = checked_mul(acc, q);
            if (!m) fits = false;
            else acc = *m;
        }
        if (fits) {
            auto m1 = checked_mul(acc, q - 1);
            auto m2 = m1 ? checked_mul(*m1, dk_order) : std::nullopt;
            if (m2) G.order_hint = *m2;
        }
    }
    std::vector<u32> clusters(n);
    for (u32 i = 0; i < n; ++i) clusters[i] = i / static_cast<u32>(q);
    G.clusters = std::move(clusters);
    G.quotient_declared = true;
    G.quotient_generators = delta_k.generators;
    G.params = {{"p", i64(p)}, {"alpha", i64(alpha)}, {"k", i64(k)}, {"q_power", i64(q)}};

    // Oliver chain when |Delta_k| is a prime power: translations are the
    // p-part, the multiplicative factor the cyclic middle, Delta_k on top.
    auto fac = numth::factorize(dk_order == 0 ? 1 : dk_order);
    if (dk_order == 1 || fac.size() == 1) {
        OliverHint hint;
        hint.p = p;
        hint.q = dk_order == 1 ? 2 : fac[0].first;
        hint.gens2 = translations;
        hint.gens1 = translations;
        if (mult) hint.gens1.push_back(*mult);
        G.oliver_hint = std::move(hint);
    }
    return G;
}

PermGroup delta_k_vinogradov(u64 k, const std::vector<u64>& partition) {
    u64 sum = 0;
    for (u64 p : partition) {
        if (!numth::is_prime(p)) throw BadPartitionError("partition entry not prime");
        sum += p;
    }
    if (sum != k) throw BadPartitionError("partition does not sum to k");

    PermGroup G;
    G.n = static_cast<u32>(k);
    // one diagonal generator per distinct prime, rotating all its blocks
    std::vector<u64> offsets(partition.size());
    u64 off = 0;
    for (std::size_t i = 0; i < partition.size(); ++i) {
        offsets[i] = off;
        off += partition[i];
    }
    std::vector<u64> distinct(partition.begin(), partition.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    u64 order = 1;
    for (u64 pr : distinct) {
        std::vector<u32> img(k);
        std::iota(img.begin(), img.end(), 0);
        for (std::size_t i = 0; i < partition.size(); ++i) {
            if (partition[i] != pr) continue;
            for (u64 j = 0; j < pr; ++j)
                img[offsets[i] + j] = static_cast<u32>(offsets[i] + (j + 1) % pr);
        }
        G.generators.emplace_back(std::move(img));
        order *= pr;
    }
    G.order_hint = order;
    G.structure_tag = "DeltaVinogradov(" + std::to_string(k) + ")";
    return G;
}

PermGroup gamma0_vinogradov(u64 p, u64 alpha, u64 k,
                            const std::vector<u64>& partition) {
    PermGroup delta = delta_k_vinogradov(k, partition);
    PermGroup G = gamma0(p, alpha, delta);
    const u64 q = checked_pow(p, alpha);

    // Identify the generator layout: [translations..., mult?, delta gens...]
    const u64 alpha_k = alpha * k;
    std::vector<Permutation> translations(G.generators.begin(),
                                          G.generators.begin() + alpha_k);
    std::optional<Permutation> mult;
    std::size_t delta_begin = alpha_k;
    if (q > 2) {
        mult = G.generators[alpha_k];
        delta_begin = alpha_k + 1;
    }
    std::vector<Permutation> delta_gens(G.generators.begin() + delta_begin,
                                        G.generators.end());
    std::vector<u64> distinct(partition.begin(), partition.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<u64> dividing;
    for (u64 pr : distinct)
        if ((q - 1) % pr == 0) dividing.push_back(pr);

    OliverHint hint;
    hint.p = p;
    hint.gens2 = translations;
    hint.gens1 = translations;
    if (dividing.empty()) {
        // F_q^* x Delta_k is cyclic: everything below a trivial top
        hint.q = 2;
        if (mult) hint.gens1.push_back(*mult);
        for (const auto& g : delta_gens) hint.gens1.push_back(g);
        G.oliver_hint = std::move(hint);
    } else if (dividing.size() == 1 && (q - 1) % (dividing[0] * dividing[0]) != 0) {
        // one partition prime p1 divides q-1: pull the Z_p1 part of F_q^*
        // and the p1 cyclic factor out to the top, a p1-group
        const u64 p1 = dividing[0];
        hint.q = p1;
        if (mult) {
            // generator of the subgroup of order (q-1)/p1
            ffield::Field F = ffield::Field::make(p, alpha);
            hint.gens1.push_back(scaling_perm(F, F.pow(F.primitive_root(), p1)));
            // re-embed diagonally across clusters
            auto& raw = hint.gens1.back();
            std::vector<u32> img(G.n);
            for (u32 j = 0; j < u32(k); ++j)
                for (u64 x = 0; x < q; ++x) img[j * q + x] = u32(j * q + raw(x));
            raw = Permutation(std::move(img));
        }
        for (std::size_t i = 0; i < distinct.size(); ++i)
            if (distinct[i] != p1) hint.gens1.push_back(delta_gens[i]);
        G.oliver_hint = std::move(hint);
    } else {
        G.oliver_hint.reset();
        G.notes.push_back("no clean Oliver chain: partition primes " +
                          std::to_string(dividing.size()) + " divide p^alpha-1");
    }
    G.params["k"] = i64(k);
    return G;
}

PermGroup gamma_pqr(u64 p, u64 k, u64 r, u64 q,
                    const std::vector<u64>& partition) {
    if (!numth::is_prime(p)) throw NonPrimeError("gamma_pqr: p not prime");
    if (!numth::is_prime(r)) throw NonPrimeError("gamma_pqr: r not prime");
    if (!numth::is_prime(q)) throw NonPrimeError("gamma_pqr: q must be prime");
    if ((r - 1) % q != 0) throw NotDivisorError("gamma_pqr: q must divide r-1");

    PermGroup left = gamma0_vinogradov(p, 1, k, partition);
    PermGroup right = gamma_qd(r, q);
    PermGroup G = direct_product(left, right);
    G.structure_tag = "Gamma(" + std::to_string(p) + "," + std::to_string(q) +
                      "," + std::to_string(r) + ")";
    G.params = {{"p", i64(p)}, {"k", i64(k)}, {"r", i64(r)}, {"q", i64(q)}};

    // chain: (F_p^+)^k normal in (everything except C_q) normal in G,
    // valid when F_p^* x Delta_k x F_r^+ is cyclic (coprime orders).  The
    // left hint with q=2 marks the clean case (trivial top on the left).
    if (left.oliver_hint && left.oliver_hint->q == 2) {
        const u32 off = left.n;
        auto lift_left = [&](const Permutation& g) {
            std::vector<u32> img(G.n);
            for (u32 i = 0; i < left.n; ++i) img[i] = g(i);
            for (u32 i = off; i < G.n; ++i) img[i] = i;
            return Permutation(std::move(img));
        };
        OliverHint hint;
        hint.p = p;
        hint.q = q;
        for (const auto& g : left.oliver_hint->gens2)
            hint.gens2.push_back(lift_left(g));
        for (const auto& g : left.oliver_hint->gens1)
            hint.gens1.push_back(lift_left(g));
        // add the r-translation (F_r^+) to the cyclic middle
        std::vector<u32> img(G.n);
        std::iota(img.begin(), img.end(), 0);
        for (u64 x = 0; x < r; ++x) img[off + x] = off + u32((x + 1) % r);
        hint.gens1.emplace_back(std::move(img));
        G.oliver_hint = std::move(hint);
    }
    return G;
}

PermGroup lambda1(u64 p, u64 t, u64 k, u64 mult_exponent) {
    if (!numth::is_prime(p)) throw NonPrimeError("lambda1: p not prime");
    if (t * p > k) throw BadShapeError("lambda1: need t*p <= k");
    if (k == 0) throw BadShapeError("lambda1: empty domain");
    const u64 e = mult_exponent == 0 ? p + 1 : mult_exponent;
    if (e % (p + 1) != 0)
        throw BadShapeError("lambda1: mult exponent must be a multiple of p+1");

    ffield::Field F2 = ffield::Field::make(p, 2);
    ffield::Field F1 = ffield::Field::make(p, 1);
    const u64 p2 = p * p;
    const u64 blocks_small = k - t * p;
    const u64 n64 = t * p2 + blocks_small * p;  // = p*k
    if (n64 > 100'000) throw DomainTooLargeError("lambda1: domain too large");
    const u32 n = static_cast<u32>(n64);

    PermGroup G;
    G.n = n;
    std::vector<u32> clusters(n);
    std::vector<Permutation> translations;
    for (u64 b = 0; b < t; ++b) {
        const u32 off = static_cast<u32>(b * p2);
        translations.push_back(embed(n, off, translation_perm(F2, 1)));
        translations.push_back(embed(n, off, translation_perm(F2, p)));
        for (u64 x = 0; x < p2; ++x) clusters[off + x] = static_cast<u32>(b);
    }
    for (u64 b = 0; b < blocks_small; ++b) {
        const u32 off = static_cast<u32>(t * p2 + b * p);
        translations.push_back(embed(n, off, translation_perm(F1, 1)));
        for (u64 x = 0; x < p; ++x) clusters[off + x] = static_cast<u32>(t + b);
    }
    G.generators = translations;

    // one multiplicative generator: y -> g y on the p^2 blocks, y -> (g^e) y
    // on the p blocks (g^e lies in the prime subfield since (p+1) | e)
    const u64 g0 = F2.primitive_root();
    const u64 ge = F2.pow(g0, e);
    if (ge >= p)
        throw Error("lambda1: exponent image escaped the prime subfield");
    std::optional<Permutation> mult;
    {
        std::vector<u32> img(n);
        std::iota(img.begin(), img.end(), 0);
        bool nontrivial = false;
        for (u64 b = 0; b < t; ++b) {
            const u32 off = static_cast<u32>(b * p2);
            for (u64 x = 0; x < p2; ++x) img[off + x] = off + u32(F2.mul(g0, x));
            nontrivial = true;
        }
        if (ge != 1) {
            for (u64 b = 0; b < blocks_small; ++b) {
                const u32 off = static_cast<u32>(t * p2 + b * p);
                for (u64 x = 0; x < p; ++x)
                    img[off + x] = off + u32(F1.mul(ge, x));
                nontrivial = true;
            }
        }
        if (nontrivial && t > 0) {
            mult = Permutation(std::move(img));
        } else if (ge != 1) {
            mult = Permutation(std::move(img));
        }
    }
    if (mult) G.generators.push_back(*mult);

    // order of the realized permutation group
    u64 mult_order = 1;
    if (t > 0)
        mult_order = p2 - 1;
    else if (ge != 1) {
        u64 o = 1, cur = ge;
        while (cur != 1) {
            cur = F1.mul(cur, ge);
            ++o;
        }
        mult_order = o;
    }
    u64 add_order = 1;
    for (u64 b = 0; b < t; ++b) add_order *= p2;
    for (u64 b = 0; b < blocks_small; ++b) add_order *= p;
    G.order_hint = add_order * mult_order;
    G.clusters = std::move(clusters);
    G.structure_tag = "Lambda1(" + std::to_string(p) + "," + std::to_string(t) +
                      "," + std::to_string(k) + ")";
    G.params = {{"p", i64(p)}, {"t", i64(t)}, {"k", i64(k)}, {"e", i64(e)}};

    OliverHint hint;
    hint.p = p;
    hint.q = 2;
    hint.gens2 = translations;
    hint.gens1 = G.generators;  // whole group; cyclic quotient
    G.oliver_hint = std::move(hint);
    return G;
}

PermGroup lambda_neareva(u64 p, u64 kT, u64 kprime) {
    if (!numth::is_prime(p)) throw NonPrimeError("lambda_neareva: p not prime");
    if (kprime < 1) throw BadShapeError("lambda_neareva: tail k' must be >= 1");
    if (kT == 0) throw BadShapeError("lambda_neareva: need at least one block");
    const u64 n64 = p * kT + kprime;
    if (n64 > 100'000) throw DomainTooLargeError("lambda_neareva: domain too large");
    const u32 n = static_cast<u32>(n64);
    ffield::Field F = ffield::Field::make(p, 1);

    PermGroup G;
    G.n = n;
    std::vector<u32> clusters(n);
    std::vector<Permutation> translations;
    for (u64 b = 0; b < kT; ++b) {
        const u32 off = static_cast<u32>(b * p);
        translations.push_back(embed(n, off, translation_perm(F, 1)));
        for (u64 x = 0; x < p; ++x) clusters[off + x] = static_cast<u32>(b);
    }
    for (u64 i = 0; i < kprime; ++i) clusters[p * kT + i] = static_cast<u32>(kT);
    G.generators = translations;
    std::optional<Permutation> mult;
    if (p > 2) {
        const u64 g0 = F.primitive_root();
        std::vector<u32> img(n);
        std::iota(img.begin(), img.end(), 0);
        for (u64 b = 0; b < kT; ++b) {
            const u32 off = static_cast<u32>(b * p);
            for (u64 x = 0; x < p; ++x) img[off + x] = off + u32(F.mul(g0, x));
        }
        mult = Permutation(std::move(img));
        G.generators.push_back(*mult);
    }
    std::optional<Permutation> tail;
    if (kprime >= 2) {
        std::vector<u32> img(n);
        std::iota(img.begin(), img.end(), 0);
        const u32 off = static_cast<u32>(p * kT);
        for (u64 i = 0; i < kprime; ++i)
            img[off + i] = off + static_cast<u32>((i + 1) % kprime);
        tail = Permutation(std::move(img));
        G.generators.push_back(*tail);
    }

    u64 add_order = 1;
    for (u64 b = 0; b < kT; ++b) add_order *= p;
    G.order_hint = add_order * (p - 1) * kprime;
    G.clusters = std::move(clusters);
    G.structure_tag = "LambdaNearEva(" + std::to_string(p) + "," +
                      std::to_string(kT) + "," + std::to_string(kprime) + ")";
    G.params = {{"p", i64(p)}, {"kT", i64(kT)}, {"k_prime", i64(kprime)}};
    if (numth::gcd(p - 1, kprime) != 1)
        G.notes.push_back("gcd(p-1, k') > 1: the cyclic-extension chain fails");

    OliverHint hint;
    hint.p = p;
    hint.q = 2;
    hint.gens2 = translations;
    hint.gens1 = G.generators;
    G.oliver_hint = std::move(hint);
    return G;
}

// ---------------------------------------------------------------------------
// Oliver condition.

namespace {

u64 closure_order(const std::vector<Permutation>& gens, u32 n, u64 cap,
                  std::unordered_set<Permutation, PermHash>* out_set) {
    PermGroup tmp;
    tmp.n = n;
    tmp.generators = gens;
    auto elems = enumerate_elements(tmp, cap);
    if (!elems) throw OrderTooLargeError("subgroup enumeration exceeds cap");
    if (out_set) out_set->insert(elems->begin(), elems->end());
    return elems->size();
}

bool is_prime_power_of(u64 order, u64 p) {
    if (order == 1) return true;
    while (order % p == 0) order /= p;
    return order == 1;
}

// quotient E1/E2 cyclic?  walk candidate coset generators
bool quotient_cyclic(const std::vector<Permutation>& e1,
                     const std::unordered_set<Permutation, PermHash>& e2set,
                     u64 quotient_order) {
    if (quotient_order == 1) return true;
    for (const auto& c : e1) {
        if (e2set.count(c)) continue;
        u64 ord = 1;
        Permutation acc = c;
        while (!e2set.count(acc)) {
            acc = acc * c;
            ++ord;
            if (ord > quotient_order) break;
        }
        if (ord == quotient_order) return true;
    }
    return false;
}

}  // namespace

bool verify_oliver_certificate(const PermGroup& G, const OliverCertificate& c,
                               std::string* why, u64 cap) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (c.p < 2 || !numth::is_prime(c.p)) return fail("p is not prime");
    if (c.q < 2 || !numth::is_prime(c.q)) return fail("q is not prime");
    for (const auto& g : c.gens_gamma2)
        if (g.n() != G.n) return fail("gamma2 generator degree mismatch");
    for (const auto& g : c.gens_gamma1)
        if (g.n() != G.n) return fail("gamma1 generator degree mismatch");

    std::unordered_set<Permutation, PermHash> e2set;
    u64 o2;
    try {
        o2 = closure_order(c.gens_gamma2, G.n, cap, &e2set);
    } catch (const OrderTooLargeError&) {
        return fail("gamma2 too large to enumerate");
    }
    if (o2 != c.order_gamma2) return fail("gamma2 order mismatch");
    if (!is_prime_power_of(o2, c.p)) return fail("gamma2 is not a p-group");

    PermGroup g1;
    g1.n = G.n;
    g1.generators = c.gens_gamma1;
    auto e1 = enumerate_elements(g1, cap);
    if (!e1) return fail("gamma1 too large to enumerate");
    if (e1->size() != c.order_gamma1) return fail("gamma1 order mismatch");
    std::unordered_set<Permutation, PermHash> e1set(e1->begin(), e1->end());

    for (const auto& g : c.gens_gamma2)
        if (!e1set.count(g)) return fail("gamma2 not contained in gamma1");
    if (c.order_gamma1 % o2 != 0) return fail("order of gamma2 does not divide gamma1");

    // gamma2 normal in gamma1
    for (const auto& h : c.gens_gamma2) {
        for (const auto& g : c.gens_gamma1) {
            if (!e2set.count(g.inverse() * h * g))
                return fail("gamma2 not normal in gamma1");
        }
    }
    if (!quotient_cyclic(*e1, e2set, c.order_gamma1 / o2))
        return fail("gamma1/gamma2 not cyclic");

    // gamma1 normal in G, and gamma1 <= G
    u64 og = group_order(G, cap);
    if (og != c.order_g) return fail("order of G mismatch");
    auto eg = enumerate_elements(G, cap);
    if (eg) {
        std::unordered_set<Permutation, PermHash> gset(eg->begin(), eg->end());
        for (const auto& g : c.gens_gamma1)
            if (!gset.count(g)) return fail("gamma1 not contained in G");
    }
    for (const auto& h : c.gens_gamma1) {
        for (const auto& g : G.generators) {
            if (!e1set.count(g.inverse() * h * g))
                return fail("gamma1 not normal in G");
        }
    }
    if (og % c.order_gamma1 != 0) return fail("order of gamma1 does not divide |G|");
    if (!is_prime_power_of(og / c.order_gamma1, c.q))
        return fail("G/gamma1 is not a q-group");
    return true;
}

namespace {

std::optional<OliverCertificate> oliver_from_hint(const PermGroup& G, u64 cap) {
    const OliverHint& h = *G.oliver_hint;
    try {
        OliverCertificate c;
        c.p = h.p;
        c.q = h.q;
        c.gens_gamma2 = h.gens2;
        c.gens_gamma1 = h.gens1;
        c.order_gamma2 = closure_order(h.gens2, G.n, cap, nullptr);
        c.order_gamma1 = closure_order(h.gens1, G.n, cap, nullptr);
        c.order_g = group_order(G, cap);
        std::string why;
        if (verify_oliver_certificate(G, c, &why, cap)) return c;
    } catch (const OrderTooLargeError&) {
    }
    return std::nullopt;
}

struct Subgroup {
    std::vector<u32> ids;  // sorted element ids
};

std::optional<OliverCertificate> oliver_search(const PermGroup& G, u64 cap) {
    auto elems_opt = enumerate_elements(G, cap);
    if (!elems_opt)
        throw OrderTooLargeError("oliver_condition: group too large without a hint");
    const auto& elems = *elems_opt;
    const u64 og = elems.size();
    std::unordered_map<Permutation, u32, PermHash> id_of;
    for (u32 i = 0; i < elems.size(); ++i) id_of.emplace(elems[i], i);
    auto mul = [&](u32 a, u32 b) { return id_of.at(elems[a] * elems[b]); };
    auto inv = [&](u32 a) { return id_of.at(elems[a].inverse()); };

    auto closure_ids = [&](std::vector<u32> seed) {
        std::vector<bool> in(og, false);
        std::vector<u32> out, work;
        u32 e = id_of.at(Permutation::identity(G.n));
        in[e] = true;
        out.push_back(e);
        work.push_back(e);
        for (u32 s : seed)
            if (!in[s]) {
                in[s] = true;
                out.push_back(s);
                work.push_back(s);
            }
        while (!work.empty()) {
            u32 a = work.back();
            work.pop_back();
            for (u32 s : seed) {
                for (u32 prod : {mul(a, s), mul(s, a)}) {
                    if (!in[prod]) {
                        in[prod] = true;
                        out.push_back(prod);
                        work.push_back(prod);
                    }
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    // subgroup lattice by closure BFS (budgeted)
    std::vector<Subgroup> subs;
    std::unordered_set<u64> seen;
    auto key = [](const std::vector<u32>& ids) {
        u64 h = ids.size();
        for (u32 v : ids) h = h * 0x100000001b3ull ^ v;
        return h;
    };
    std::deque<std::vector<u32>> queue;
    auto push = [&](std::vector<u32> ids) {
        u64 k = key(ids);
        if (seen.insert(k).second) {
            subs.push_back({ids});
            queue.push_back(std::move(ids));
        }
    };
    push(closure_ids({}));
    u64 budget = 200'000;
    while (!queue.empty() && budget) {
        auto cur = queue.front();
        queue.pop_front();
        std::vector<bool> in(og, false);
        for (u32 v : cur) in[v] = true;
        for (u32 g = 0; g < og && budget; ++g) {
            if (in[g]) continue;
            --budget;
            std::vector<u32> seed = cur;
            seed.push_back(g);
            push(closure_ids(std::move(seed)));
        }
    }
    if (!budget) throw OrderTooLargeError("oliver_condition: lattice budget exhausted");

    auto contains = [](const std::vector<u32>& sorted, u32 v) {
        return std::binary_search(sorted.begin(), sorted.end(), v);
    };
    auto normal_in = [&](const std::vector<u32>& h, const std::vector<u32>& k) {
        for (u32 a : h)
            for (u32 g : k)
                if (!contains(h, mul(mul(inv(g), a), g))) return false;
        return true;
    };

    // prefer large gamma1 (small top factor)
    std::vector<u32> order_idx(subs.size());
    std::iota(order_idx.begin(), order_idx.end(), 0);
    std::sort(order_idx.begin(), order_idx.end(), [&](u32 a, u32 b) {
        return subs[a].ids.size() > subs[b].ids.size();
    });

    std::vector<u32> all_ids(og);
    std::iota(all_ids.begin(), all_ids.end(), 0);

    for (u32 i1 : order_idx) {
        const auto& g1 = subs[i1].ids;
        u64 index = og / g1.size();
        if (og % g1.size() != 0) continue;
        // index must be a prime power q^j
        u64 qprime = 2;
        if (index > 1) {
            auto fac = numth::factorize(index);
            if (fac.size() != 1) continue;
            qprime = fac[0].first;
        }
        if (!normal_in(g1, all_ids)) continue;
        for (u32 i2 = 0; i2 < subs.size(); ++i2) {
            const auto& g2 = subs[i2].ids;
            if (g2.size() > g1.size() || g1.size() % g2.size() != 0) continue;
            bool inside = std::includes(g1.begin(), g1.end(), g2.begin(), g2.end());
            if (!inside) continue;
            u64 pprime = 2;
            if (g2.size() > 1) {
                auto fac = numth::factorize(g2.size());
                if (fac.size() != 1) continue;
                pprime = fac[0].first;
            }
            if (!normal_in(g2, g1)) continue;
            // cyclic quotient?
            std::unordered_set<Permutation, PermHash> e2set;
            for (u32 v : g2) e2set.insert(elems[v]);
            std::vector<Permutation> e1perms;
            for (u32 v : g1) e1perms.push_back(elems[v]);
            if (!quotient_cyclic(e1perms, e2set, g1.size() / g2.size())) continue;

            OliverCertificate c;
            c.p = pprime;
            c.q = qprime;
            for (u32 v : g2) c.gens_gamma2.push_back(elems[v]);
            for (u32 v : g1) c.gens_gamma1.push_back(elems[v]);
            c.order_gamma2 = g2.size();
            c.order_gamma1 = g1.size();
            c.order_g = og;
            std::string why;
            if (verify_oliver_certificate(G, c, &why, cap)) return c;
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<OliverCertificate> oliver_condition(const PermGroup& G, u64 cap) {
    if (G.oliver_hint) {
        auto c = oliver_from_hint(G, cap);
        if (c) return c;
    }
    return oliver_search(G, cap);
}

// ---------------------------------------------------------------------------
// Serialization.

std::string PermGroup::to_json() const {
    json j;
    j["n"] = n;
    j["generators"] = json::array();
    for (const auto& g : generators) j["generators"].push_back(g.image());
    j["structure"] = structure_tag;
    if (order_hint) j["order_hint"] = *order_hint;
    if (clusters) j["clusters"] = *clusters;
    if (!params.empty()) {
        j["params"] = json::object();
        for (const auto& [k, v] : params) j["params"][k] = v;
    }
    if (!notes.empty()) j["notes"] = notes;
    return j.dump();
}

PermGroup PermGroup::from_json(const std::string& text) {
    json j = json::parse(text);
    PermGroup g;
    g.n = j.at("n").get<u32>();
    for (const auto& arr : j.at("generators"))
        g.generators.emplace_back(arr.get<std::vector<u32>>());
    for (const auto& gen : g.generators)
        if (gen.n() != g.n) throw FormatError("generator degree mismatch");
    g.structure_tag = j.value("structure", "");
    if (j.contains("order_hint")) g.order_hint = j["order_hint"].get<u64>();
    if (j.contains("clusters")) g.clusters = j["clusters"].get<std::vector<u32>>();
    return g;
}

std::string OliverCertificate::to_json() const {
    json j;
    j["p"] = p;
    j["q"] = q;
    j["orders"] = {order_gamma2, order_gamma1, order_g};
    j["gens_gamma2"] = json::array();
    for (const auto& g : gens_gamma2) j["gens_gamma2"].push_back(g.image());
    j["gens_gamma1"] = json::array();
    for (const auto& g : gens_gamma1) j["gens_gamma1"].push_back(g.image());
    return j.dump();
}

std::string UOrbitalReport::to_json() const {
    json j;
    j["n"] = n;
    j["m_star"] = m_star;
    if (m_intra) j["m_intra"] = *m_intra;
    if (m_inter) j["m_inter"] = *m_inter;
    if (m_k_prime) j["m_k_prime"] = *m_k_prime;
    if (m_k_dblprime) j["m_k_dblprime"] = *m_k_dblprime;
    j["orbitals"] = json::array();
    for (const auto& o : orbitals) {
        json jo;
        jo["rep"] = {o.rep_i, o.rep_j};
        jo["size"] = o.size;
        if (!o.tag.empty()) jo["tag"] = o.tag;
        j["orbitals"].push_back(jo);
    }
    return j.dump();
}

std::string UOrbitalReport::to_tsv() const {
    std::string out = "rep_i\trep_j\tsize\ttag\n";
    for (const auto& o : orbitals) {
        out += std::to_string(o.rep_i) + "\t" + std::to_string(o.rep_j) + "\t" +
               std::to_string(o.size) + "\t" + (o.tag.empty() ? "-" : o.tag) +
               "\n";
    }
    return out;
}

}  // namespace evlab::perm

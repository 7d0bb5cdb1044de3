#include "evlab/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <functional>
#include <numeric>
#include <optional>
#include <unordered_set>

#include "evlab/boolfun.hpp"
#include "evlab/errors.hpp"
#include "evlab/numth.hpp"
#include "evlab/scomplex.hpp"

namespace evlab::verify {

using nlohmann::json;

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inapplicable: return "inapplicable";
        case Verdict::budget: return "budget";
    }
    return "?";
}

std::string VerificationReport::to_json() const {
    json j;
    j["check_id"] = check_id;
    j["params"] = json::parse(params_json.empty() ? "{}" : params_json);
    j["expected"] = expected;
    j["observed"] = observed;
    j["verdict"] = verdict_name(verdict);
    j["theorem_backed"] = theorem_backed;
    j["runtime_ms"] = runtime_ms;
    return j.dump();
}

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

VerificationReport make_report(const std::string& id, const json& params,
                               const std::string& expected) {
    VerificationReport r;
    r.check_id = id;
    r.params_json = params.dump();
    r.expected = expected;
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------

VerificationReport verify_ark_exhaustive(u32 n, u64 property_budget) {
    Timer t;
    auto rep = make_report("ark_exhaustive_n" + std::to_string(n),
                           {{"n", n}, {"budget", property_budget}},
                           "every nontrivial monotone property has D = C(n,2)");
    const u32 N = static_cast<u32>(pair_count(n));
    auto cls = boolfun::graph_iso_classes(n);
    const u64 all_classes = (u64(1) << cls.count()) - 1;

    u64 total = 0, nontrivial = 0, evasive = 0;
    std::vector<std::string> counterexamples;
    bool complete = boolfun::enumerate_monotone_properties(
        n, property_budget, [&](u64 class_set) {
            ++total;
            if (class_set == 0 || class_set == all_classes) return;  // trivial
            ++nontrivial;
            auto f = boolfun::function_from_class_set(cls, class_set);
            auto d = boolfun::decision_tree_complexity(f);
            if (d.exact() && d.lo == N) {
                ++evasive;
            } else {
                counterexamples.push_back(std::to_string(class_set));
            }
        });

    json obs = {{"properties", total},
                {"nontrivial", nontrivial},
                {"evasive", evasive}};
    if (!counterexamples.empty()) obs["counterexamples"] = counterexamples;
    rep.observed = obs.dump();
    rep.verdict = !complete                ? Verdict::budget
                  : counterexamples.empty() ? Verdict::pass
                                            : Verdict::fail;
    rep.runtime_ms = t.ms();
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

// orbit closure of a face mask under a group acting on the ground points
std::vector<u32> mask_orbit(const perm::PermGroup& G, u32 mask) {
    std::vector<u32> out{mask};
    std::vector<u32> work{mask};
    std::unordered_set<u32> seen{mask};
    auto apply = [&](const perm::Permutation& g, u32 m) {
        u32 r = 0;
        while (m) {
            u32 b = std::countr_zero(m);
            m &= m - 1;
            r |= u32(1) << g(b);
        }
        return r;
    };
    while (!work.empty()) {
        u32 cur = work.back();
        work.pop_back();
        for (const auto& g : G.generators) {
            u32 img = apply(g, cur);
            if (seen.insert(img).second) {
                out.push_back(img);
                work.push_back(img);
            }
        }
    }
    return out;
}

}  // namespace

VerificationReport verify_oliver_consistency(u32 trials, u64 seed) {
    Timer t;
    auto rep = make_report("oliver_consistency",
                           {{"trials", trials}, {"seed", seed}},
                           "chi(K_Gamma) == 1 mod q for every certified cone");
    // pool of small certified-Oliver groups
    std::vector<perm::PermGroup> pool;
    for (auto [q, d] : std::vector<std::pair<u64, u64>>{
             {5, 2}, {5, 4}, {7, 2}, {7, 3}, {7, 6}, {9, 2}, {9, 4},
             {11, 2}, {13, 4}, {8, 7}, {13, 12}, {11, 5}})
        pool.push_back(perm::gamma_qd(q, d));
    for (u32 m = 3; m <= 12; ++m) pool.push_back(perm::cyclic_group(m));
    pool.push_back(perm::gamma0(3, 1, perm::cyclic_group(2)));
    pool.push_back(perm::gamma0(2, 2, perm::cyclic_group(2)));
    pool.push_back(perm::lambda1(3, 0, 2));
    pool.push_back(perm::lambda1(3, 1, 3));
    pool.push_back(perm::lambda1(5, 0, 2));
    pool.push_back(perm::lambda_neareva(3, 2, 1));
    pool.push_back(perm::lambda_neareva(5, 1, 3));

    std::vector<std::optional<perm::OliverCertificate>> certs;
    for (const auto& g : pool) certs.push_back(perm::oliver_condition(g));

    Rng rng(seed);
    u64 done = 0;
    std::string failure;
    for (u32 trial = 0; trial < trials && failure.empty(); ++trial) {
        const std::size_t pick = rng.below(pool.size());
        const auto& G = pool[pick];
        if (!certs[pick]) {
            failure = "no certificate for " + G.structure_tag;
            break;
        }
        const u64 q = certs[pick]->q;
        const u32 ground = G.n + 1;  // apex fixed by the action
        if (ground > 17) continue;

        // random invariant complex on the non-apex points
        std::vector<u64> table((u64(1) << ground) / 64 + 1, 0);
        auto set_face = [&](u32 m) { table[m >> 6] |= u64(1) << (m & 63); };
        set_face(0);
        const u32 seeds = 1 + static_cast<u32>(rng.below(3));
        for (u32 s = 0; s < seeds; ++s) {
            u32 mask = 0;
            const u32 size = 1 + static_cast<u32>(rng.below(std::min<u64>(4, G.n)));
            for (u32 i = 0; i < size; ++i) mask |= u32(1) << rng.below(G.n);
            for (u32 om : mask_orbit(G, mask)) {
                // downward closure of the orbit mask
                u32 sub = om;
                for (;;) {
                    set_face(sub);
                    if (sub == 0) break;
                    sub = (sub - 1) & om;
                }
            }
        }
        // cone with the apex: every face also appears with the apex added
        const u32 apexbit = u32(1) << G.n;
        for (u64 m = (u64(1) << G.n); m-- > 0;) {
            if ((table[m >> 6] >> (m & 63)) & 1) set_face(u32(m) | apexbit);
        }
        auto K = scomplex::ExplicitComplex::from_table(ground, table, false);

        perm::PermGroup Gext;
        Gext.n = ground;
        for (const auto& g : G.generators) {
            std::vector<u32> img(ground);
            for (u32 i = 0; i < G.n; ++i) img[i] = g(i);
            img[G.n] = G.n;
            Gext.generators.emplace_back(std::move(img));
        }

        auto fp = scomplex::fixed_point_complex(K, Gext);
        i64 chi = fp.complex.euler_characteristic();
        if (((chi % i64(q)) + i64(q)) % i64(q) != 1 % i64(q)) {
            failure = "chi = " + std::to_string(chi) + " mod " + std::to_string(q) +
                      " != 1 for " + G.structure_tag;
        }
        ++done;
    }
    rep.observed = failure.empty() ? json({{"cones", done}}).dump() : failure;
    rep.verdict = failure.empty() ? Verdict::pass : Verdict::fail;
    rep.runtime_ms = t.ms();
    return rep;
}

// ---------------------------------------------------------------------------

VerificationReport verify_fixed_point_isomorphism(u32 n, const hgraph::SmallGraph& H) {
    Timer t;
    const u32 h = H.n();
    auto rep = make_report("fixed_point_isomorphism",
                           {{"n", n}, {"h", h}},
                           "fixed-point complex equals the hom-free complex on r classes");
    auto cert = numth::plan_near_eva(n, h);
    const u64 p = u64(cert.ints.at("p"));
    const u64 T = u64(cert.ints.at("T"));
    const u64 kp = u64(cert.ints.at("k_prime"));
    const u64 k = u64(cert.ints.at("k"));
    const u64 r = u64(cert.ints.at("r"));
    const u64 kT = k * T;
    if (kp < 1) {
        rep.verdict = Verdict::inapplicable;
        rep.observed = "degenerate tail k' = 0";
        rep.runtime_ms = t.ms();
        return rep;
    }
    if (pair_count(r) > 21) {
        rep.verdict = Verdict::budget;
        rep.observed = "C(r,2) > 21";
        rep.runtime_ms = t.ms();
        return rep;
    }

    auto G = perm::lambda_neareva(p, kT, kp);
    if (G.n != n) throw Error("fixed_point_isomorphism: domain mismatch");

    // variable slots: all pairs except those inside the tail
    const u32 tail_start = static_cast<u32>(n - kp);
    const u64 n_slots = pair_count(n);
    std::vector<i64> var_of_slot(n_slots, -1);
    std::vector<std::pair<u32, u32>> slot_ends;
    {
        u64 idx = 0;
        for (u32 i = 0; i < n; ++i) {
            for (u32 j = i + 1; j < n; ++j, ++idx) {
                if (i >= tail_start && j >= tail_start) continue;
                var_of_slot[idx] = i64(slot_ends.size());
                slot_ends.push_back({i, j});
            }
        }
    }
    const u32 nprime = static_cast<u32>(slot_ends.size());

    // induced action on the variable slots
    perm::PermGroup Gp;
    Gp.n = nprime;
    for (const auto& g : G.generators) {
        std::vector<u32> img(nprime);
        for (u32 v = 0; v < nprime; ++v) {
            auto [i, j] = slot_ends[v];
            u32 a = g(i), b = g(j);
            if (a > b) std::swap(a, b);
            i64 w = var_of_slot[pair_index(n, a, b)];
            if (w < 0) throw Error("slot action leaves the variable set");
            img[v] = static_cast<u32>(w);
        }
        Gp.generators.emplace_back(std::move(img));
    }

    // orbit census and classification
    auto slot_orbits = perm::orbits(Gp);
    const auto& clusters = *G.clusters;  // blocks 0..kT-1, tail = kT
    auto class_count = kT + 1;
    if (class_count != r) {
        rep.verdict = Verdict::fail;
        rep.observed = "ShapeMismatch: class count != r";
        rep.runtime_ms = t.ms();
        return rep;
    }

    const bool fast_triangle = (H == hgraph::complete_graph(3));
    auto union_is_face = [&](const std::vector<u32>& slots) {
        hgraph::SmallGraph g(n);
        for (u32 v : slots) g.add_edge(slot_ends[v].first, slot_ends[v].second);
        return !hgraph::has_subgraph(g, H).has_value();
    };

    std::vector<i64> kr_slot_of_orbit(slot_orbits.size(), -1);
    std::vector<i64> orbit_of_kr_slot(pair_count(r), -1);
    std::string mismatch;
    for (std::size_t o = 0; o < slot_orbits.size() && mismatch.empty(); ++o) {
        const auto& orb = slot_orbits[o];
        auto [i, j] = slot_ends[orb.front()];
        const u32 ci = clusters[i], cj = clusters[j];
        if (ci == cj) {
            // an intra-class orbit whose union were a face would let faces
            // escape the class-pair grid
            if (union_is_face(orb))
                mismatch = "intra-class orbit union is a face";
            continue;
        }
        const u64 slot = pair_index(r, std::min(ci, cj), std::max(ci, cj));
        if (orbit_of_kr_slot[slot] != -1) {
            mismatch = "two orbits map to one class pair";
            continue;
        }
        orbit_of_kr_slot[slot] = i64(o);
        kr_slot_of_orbit[o] = i64(slot);
    }
    for (u64 s = 0; s < pair_count(r) && mismatch.empty(); ++s)
        if (orbit_of_kr_slot[s] < 0) mismatch = "class pair with no orbit";
    if (!mismatch.empty()) {
        rep.verdict = Verdict::fail;
        rep.observed = "ShapeMismatch: " + mismatch;
        rep.runtime_ms = t.ms();
        return rep;
    }

    // DFS over candidate orbits in K_r slot order, incremental H-freeness
    const u32 kr_slots = static_cast<u32>(pair_count(r));
    std::vector<std::vector<std::pair<u32, u32>>> slot_edges(kr_slots);
    for (u32 s = 0; s < kr_slots; ++s)
        for (u32 v : slot_orbits[orbit_of_kr_slot[s]])
            slot_edges[s].push_back(slot_ends[v]);

    std::vector<u64> adj(n, 0);
    std::vector<u64> table((u64(1) << kr_slots) / 64 + 1, 0);

    std::function<void(u32, u32)> dfs = [&](u32 from, u32 mask) {
        table[mask >> 6] |= u64(1) << (mask & 63);
        for (u32 s = from; s < kr_slots; ++s) {
            bool ok = true;
            std::size_t added = 0;
            if (fast_triangle) {
                for (; added < slot_edges[s].size(); ++added) {
                    auto [u, v] = slot_edges[s][added];
                    if (adj[u] & adj[v]) {
                        ok = false;
                        break;
                    }
                    adj[u] |= u64(1) << v;
                    adj[v] |= u64(1) << u;
                }
            } else {
                for (; added < slot_edges[s].size(); ++added) {
                    auto [u, v] = slot_edges[s][added];
                    adj[u] |= u64(1) << v;
                    adj[v] |= u64(1) << u;
                }
                hgraph::SmallGraph g(n);
                for (u32 x = 0; x < n; ++x)
                    for (u32 y = x + 1; y < n; ++y)
                        if ((adj[x] >> y) & 1) g.add_edge(x, y);
                ok = !hgraph::has_subgraph(g, H).has_value();
            }
            if (ok) dfs(s + 1, mask | (u32(1) << s));
            for (std::size_t e = added; e-- > 0;) {
                auto [u, v] = slot_edges[s][e];
                adj[u] &= ~(u64(1) << v);
                adj[v] &= ~(u64(1) << u);
            }
        }
    };
    dfs(0, 0);

    auto fixed = scomplex::ExplicitComplex::from_table(int(kr_slots), table, false);
    auto target = hgraph::q_hom_complex(static_cast<u32>(r), H);
    const bool equal = fixed == target;
    json obs = {{"r", r},
                {"fixed_faces", fixed.face_count()},
                {"target_faces", target.face_count()},
                {"fixed_chi", fixed.euler_characteristic()},
                {"target_chi", target.euler_characteristic()},
                {"equal", equal}};
    rep.observed = obs.dump();
    rep.verdict = equal ? Verdict::pass : Verdict::fail;
    rep.runtime_ms = t.ms();
    return rep;
}

// ---------------------------------------------------------------------------

VerificationReport verify_orbital_bounds_gamma0(u64 p, u64 alpha,
                                                const perm::PermGroup& delta_k) {
    Timer t;
    auto rep = make_report(
        "orbital_bounds_gamma0",
        {{"p", p}, {"alpha", alpha}, {"delta", delta_k.structure_tag}, {"k", delta_k.n}},
        "m_intra >= C(q,2) m'_k and m_inter >= q^2 m''_k, exactly");
    auto G = perm::gamma0(p, alpha, delta_k);
    if (G.n > 200) throw DomainTooLargeError("orbital bounds: domain > 200");
    auto orb = perm::u_orbitals(G);
    const u64 q = checked_pow(p, alpha);
    bool ok = true;
    json obs;
    obs["m_star"] = orb.m_star;
    if (orb.m_intra) {
        ok = ok && *orb.m_intra >= q * (q - 1) / 2 * *orb.m_k_prime;
        obs["m_intra"] = *orb.m_intra;
        obs["intra_bound"] = q * (q - 1) / 2 * *orb.m_k_prime;
    }
    if (orb.m_inter && orb.m_k_dblprime) {
        ok = ok && *orb.m_inter >= q * q * *orb.m_k_dblprime;
        obs["m_inter"] = *orb.m_inter;
        obs["inter_bound"] = q * q * *orb.m_k_dblprime;
    }
    obs["m_k_prime"] = orb.m_k_prime ? json(*orb.m_k_prime) : json();
    obs["m_k_dblprime"] = orb.m_k_dblprime ? json(*orb.m_k_dblprime) : json();
    rep.observed = obs.dump();
    rep.verdict = ok ? Verdict::pass : Verdict::fail;
    rep.runtime_ms = t.ms();
    return rep;
}

VerificationReport verify_orbital_bounds_pqr(u64 p, u64 k, u64 r, u64 q,
                                             const std::vector<u64>& partition) {
    Timer t;
    auto rep = make_report(
        "orbital_bounds_pqr",
        {{"p", p}, {"k", k}, {"r", r}, {"q", q}},
        "per-class orbital minima meet their exact lower bounds");
    auto G = perm::gamma_pqr(p, k, r, q, partition);
    if (G.n > 200) throw DomainTooLargeError("orbital bounds: domain > 200");
    auto orb = perm::u_orbitals(G);

    auto delta = perm::delta_k_vinogradov(k, partition);
    u64 m_k_prime = UINT64_MAX;
    for (const auto& o : perm::orbits(delta)) m_k_prime = std::min(m_k_prime, u64(o.size()));
    std::optional<u64> m_k_dbl;
    if (k >= 2) m_k_dbl = perm::u_orbitals(delta).m_star;

    const u64 pk = p * k;
    u64 min_intra = UINT64_MAX, min_inter = UINT64_MAX, min_cross = UINT64_MAX,
        min_rpart = UINT64_MAX;
    for (const auto& o : orb.orbitals) {
        const bool ai = o.rep_i < pk, aj = o.rep_j < pk;
        if (ai && aj) {
            if (o.rep_i / p == o.rep_j / p)
                min_intra = std::min(min_intra, o.size);
            else
                min_inter = std::min(min_inter, o.size);
        } else if (!ai && !aj) {
            min_rpart = std::min(min_rpart, o.size);
        } else {
            min_cross = std::min(min_cross, o.size);
        }
    }

    bool ok = true;
    json obs;
    obs["m_star"] = orb.m_star;
    if (min_intra != UINT64_MAX) {
        ok = ok && min_intra >= p * (p - 1) / 2 * m_k_prime;
        obs["min_intra"] = min_intra;
    }
    if (min_inter != UINT64_MAX && m_k_dbl) {
        ok = ok && min_inter >= p * p * *m_k_dbl;
        obs["min_inter"] = min_inter;
    }
    if (min_cross != UINT64_MAX) {
        ok = ok && min_cross >= p * m_k_prime * r;
        obs["min_cross"] = min_cross;
    }
    if (min_rpart != UINT64_MAX) {
        const u64 bound = (q % 2 == 0) ? q * r / 2 : q * r;
        ok = ok && min_rpart >= bound;
        obs["min_rpart"] = min_rpart;
        obs["rpart_bound"] = bound;
    }
    // the three-term form, with the observed ratio recorded
    const u64 three = std::min({p * p * k, p * k * r, q * r});
    obs["three_term_min"] = three;
    obs["m_star_over_three_term"] = double(orb.m_star) / double(three);
    rep.observed = obs.dump();
    rep.verdict = ok ? Verdict::pass : Verdict::fail;
    rep.runtime_ms = t.ms();
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

// clique search on an adjacency matrix (domains beyond the SmallGraph cap)
bool matrix_clique_dfs(const std::vector<std::vector<bool>>& adj,
                       std::vector<u32>& cur, u32 h, u32 start) {
    if (cur.size() == h) return true;
    for (u32 v = start; v < adj.size(); ++v) {
        bool ok = true;
        for (u32 u : cur)
            if (!adj[u][v]) {
                ok = false;
                break;
            }
        if (!ok) continue;
        cur.push_back(v);
        if (matrix_clique_dfs(adj, cur, h, v + 1)) return true;
        cur.pop_back();
    }
    return false;
}

}  // namespace

VerificationReport verify_invariant_graph_cliques(const perm::PermGroup& G, u32 h) {
    Timer t;
    auto rep = make_report("invariant_graph_cliques",
                           {{"group", G.structure_tag}, {"h", h}},
                           "every intra-block u-orbital contains K_h");
    if (G.n > 600) throw DomainTooLargeError("invariant cliques: domain > 600");
    if (h <= 1) {
        rep.verdict = Verdict::pass;
        rep.observed = "vacuous";
        rep.runtime_ms = t.ms();
        return rep;
    }
    auto orb = perm::u_orbitals(G);
    u64 checked = 0;
    std::string failure;
    for (u32 oid = 0; oid < orb.orbitals.size() && failure.empty(); ++oid) {
        if (orb.orbitals[oid].tag != "intra") continue;
        std::vector<std::vector<bool>> adj(G.n, std::vector<bool>(G.n, false));
        for (u64 pi = 0; pi < orb.pair_orbital.size(); ++pi) {
            if (orb.pair_orbital[pi] != oid) continue;
            auto [i, j] = pair_unindex(G.n, pi);
            adj[i][j] = adj[j][i] = true;
        }
        std::vector<u32> cur;
        if (!matrix_clique_dfs(adj, cur, h, 0))
            failure = "orbital " + std::to_string(oid) + " has no K_" + std::to_string(h);
        ++checked;
    }
    rep.observed = failure.empty()
                       ? json({{"intra_orbitals_checked", checked}}).dump()
                       : failure;
    rep.verdict = failure.empty() ? Verdict::pass : Verdict::fail;
    rep.runtime_ms = t.ms();
    return rep;
}

// ---------------------------------------------------------------------------

VerificationReport verify_cks_sweep() {
    Timer t;
    auto rep = make_report("cks_parity_sweep", json::object(),
                           "chi(Q_r^[[H]]) is even whenever r == 1 mod T_H");
    json obs = json::array();
    bool ok = true;
    for (auto [name, r] : std::vector<std::pair<std::string, u32>>{
             {"K3", 4}, {"K3", 7}, {"K4", 4}, {"K4", 7}, {"P3", 4}, {"P3", 7}}) {
        auto H = hgraph::named_graph(name);
        auto res = hgraph::cks_parity_check(r, H);
        obs.push_back({{"H", name},
                       {"r", r},
                       {"T_H", res.t_h},
                       {"chi", res.chi},
                       {"verdict", res.verdict == hgraph::ParityVerdict::holds
                                       ? "holds"
                                       : res.verdict == hgraph::ParityVerdict::fails
                                             ? "fails"
                                             : "inapplicable"}});
        ok = ok && res.verdict == hgraph::ParityVerdict::holds;
    }
    rep.observed = obs.dump();
    rep.verdict = ok ? Verdict::pass : Verdict::fail;
    rep.runtime_ms = t.ms();
    return rep;
}

VerificationReport verify_paley_orbital_range(u64 q_max) {
    Timer t;
    auto rep = make_report("paley_orbital_isomorphism", {{"q_max", q_max}},
                           "each u-orbital of Gamma(q,d) is P(q,d) under x -> cx");
    u64 pairs_checked = 0;
    std::string failure;
    for (u64 q = 3; q <= q_max && failure.empty(); q += 2) {
        if (!numth::is_prime(q)) continue;
        ffield::Field F = ffield::Field::make(q, 1);
        for (u64 d = 2; d <= q - 1 && failure.empty(); d += 2) {
            if ((q - 1) % d != 0) continue;
            auto G = perm::gamma_qd(q, d);
            auto orb = perm::u_orbitals(G);
            auto sub = F.multiplicative_subgroup(d);
            std::vector<bool> in_sub(q, false);
            for (u64 s : sub) in_sub[s] = true;
            for (const auto& o : orb.orbitals) {
                if (o.rep_i != 0) {
                    failure = "orbital representative does not touch 0";
                    break;
                }
                const u64 c = o.rep_j;
                // the map x -> c x must carry P(q,d) onto this orbital
                const u32 oid = orb.pair_orbital[pair_index(q, 0, c)];
                for (u64 x = 0; x < q && failure.empty(); ++x) {
                    for (u64 y = x + 1; y < q; ++y) {
                        const bool pedge = in_sub[F.sub(x, y)];
                        u64 cx = F.mul(c, x), cy = F.mul(c, y);
                        if (cx > cy) std::swap(cx, cy);
                        const bool oedge =
                            orb.pair_orbital[pair_index(q, cx, cy)] == oid;
                        if (pedge != oedge) {
                            failure = "P(" + std::to_string(q) + "," +
                                      std::to_string(d) + ") mismatch at orbital " +
                                      std::to_string(oid);
                            break;
                        }
                    }
                }
                if (!failure.empty()) break;
            }
            ++pairs_checked;
        }
    }
    rep.observed = failure.empty()
                       ? json({{"(q,d)_pairs", pairs_checked}}).dump()
                       : failure;
    rep.verdict = failure.empty() ? Verdict::pass : Verdict::fail;
    rep.runtime_ms = t.ms();
    return rep;
}

VerificationReport verify_weil_sweep(u64 q_max, u32 tuples_per, u64 seed) {
    Timer t;
    auto rep = make_report("weil_count_sweep",
                           {{"q_max", q_max}, {"tuples_per", tuples_per}, {"seed", seed}},
                           "counts within q/l^t +- t sqrt(q) for every sample");
    Rng rng(seed);
    u64 checks = 0;
    std::string failure;
    for (u64 q = 3; q <= q_max && failure.empty(); q += 2) {
        if (!numth::is_prime(q)) continue;
        std::vector<u64> divisors;
        for (u64 l = 1; l * l <= q - 1; ++l) {
            if ((q - 1) % l != 0) continue;
            divisors.push_back(l);
            if (l != (q - 1) / l) divisors.push_back((q - 1) / l);
        }
        std::sort(divisors.begin(), divisors.end());
        std::vector<bool> ind(q, false);
        for (u64 l : divisors) {
            const u64 e = (q - 1) / l;
            for (u64 y = 1; y < q; ++y) ind[y] = numth::powmod(y, e, q) == 1;
            for (u32 tt = 1; tt <= 3 && failure.empty(); ++tt) {
                for (u32 s = 0; s < tuples_per; ++s) {
                    // distinct a_i
                    std::vector<u64> a;
                    while (a.size() < tt) {
                        u64 cand = rng.below(q);
                        if (std::find(a.begin(), a.end(), cand) == a.end())
                            a.push_back(cand);
                    }
                    u64 count = 0;
                    for (u64 x = 0; x < q; ++x) {
                        bool all = true;
                        for (u64 ai : a) {
                            u64 y = ai + x;
                            if (y >= q) y -= q;
                            if (y == 0 || !ind[y]) {
                                all = false;
                                break;
                            }
                        }
                        if (all) ++count;
                    }
                    // |count l^t - q|^2 <= t^2 l^(2t) q, in 128-bit arithmetic
                    u128 lt = 1;
                    for (u32 i = 0; i < tt; ++i) lt *= l;
                    __int128 lhs = __int128(count) * __int128(lt) - __int128(q);
                    if (lhs < 0) lhs = -lhs;
                    u128 lhs2 = u128(lhs) * u128(lhs);
                    u128 rhs = u128(tt) * tt * lt * lt * q;
                    ++checks;
                    if (lhs2 > rhs) {
                        failure = "out of bounds at q=" + std::to_string(q) +
                                  " l=" + std::to_string(l) + " t=" + std::to_string(tt);
                        break;
                    }
                }
            }
        }
    }
    rep.observed =
        failure.empty() ? json({{"samples", checks}}).dump() : failure;
    rep.verdict = failure.empty() ? Verdict::pass : Verdict::fail;
    rep.runtime_ms = t.ms();
    return rep;
}

VerificationReport verify_dtc_named(u32 n_max) {
    Timer t;
    auto rep = make_report("dtc_named_functions", {{"n_max", n_max}},
                           "D(AND)=D(OR)=D(parity)=N and D(const)=0");
    std::string failure;
    for (u32 N = 1; N <= n_max && failure.empty(); ++N) {
        auto check = [&](const char* name, const boolfun::BooleanFunction& f,
                         u32 want) {
            auto d = boolfun::decision_tree_complexity(f);
            if (!d.exact() || d.lo != want)
                failure = std::string(name) + " at N=" + std::to_string(N);
        };
        check("and", boolfun::BooleanFunction::conjunction(N), N);
        check("or", boolfun::BooleanFunction::disjunction(N), N);
        check("parity", boolfun::BooleanFunction::parity(N), N);
        check("const", boolfun::BooleanFunction::constant(N, true), 0);
    }
    rep.observed = failure.empty() ? "all exact" : failure;
    rep.verdict = failure.empty() ? Verdict::pass : Verdict::fail;
    rep.runtime_ms = t.ms();
    return rep;
}

VerificationReport verify_gamma0_family(u32 min_instances) {
    Timer t;
    auto rep = make_report("gamma0_inequalities_family",
                           {{"min_instances", min_instances}},
                           "cluster inequalities hold on every instance");
    u32 count = 0;
    std::string failure;
    auto run = [&](u64 p, u64 alpha, const perm::PermGroup& delta) {
        if (!failure.empty()) return;
        const u64 q = checked_pow(p, alpha);
        if (q * delta.n > 200) return;
        auto r = verify_orbital_bounds_gamma0(p, alpha, delta);
        if (r.verdict != Verdict::pass)
            failure = "instance p=" + std::to_string(p) +
                      " alpha=" + std::to_string(alpha) + " k=" +
                      std::to_string(delta.n) + ": " + r.observed;
        ++count;
    };
    const std::vector<std::pair<u64, u64>> pas = {
        {2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 1}, {3, 2}, {3, 3},
        {5, 1}, {5, 2}, {7, 1}, {7, 2}, {11, 1}, {13, 1}};
    for (auto [p, alpha] : pas) {
        run(p, alpha, perm::trivial_group(1));
        run(p, alpha, perm::trivial_group(2));
        run(p, alpha, perm::cyclic_group(2));
        run(p, alpha, perm::cyclic_group(3));
        run(p, alpha, perm::symmetric_group(3));
        run(p, alpha, perm::delta_k_vinogradov(4, {2, 2}));
        run(p, alpha, perm::delta_k_vinogradov(5, {2, 3}));
        run(p, alpha, perm::delta_k_vinogradov(10, {5, 5}));
    }
    json obs = {{"instances", count}};
    if (!failure.empty()) obs["failure"] = failure;
    rep.observed = obs.dump();
    rep.verdict = (failure.empty() && count >= min_instances) ? Verdict::pass
                                                              : Verdict::fail;
    rep.runtime_ms = t.ms();
    return rep;
}

VerificationReport verify_planner_roundtrip(u32 draws, u64 seed) {
    Timer t;
    auto rep = make_report("planner_roundtrip",
                           {{"draws", draws}, {"seed", seed}},
                           "erh and chowla plans verify, round-trip, and reject mutations");
    rep.theorem_backed = false;  // window emptiness is conditional-data, not a defect
    Rng rng(seed);
    std::string failure;
    u32 done = 0;
    for (u32 i = 0; i < draws && failure.empty(); ++i) {
        const u64 n = rng.in_range(10'000, 1'000'000'000);
        for (int scheme = 0; scheme < 2 && failure.empty(); ++scheme) {
            numth::PartitionCertificate cert;
            try {
                cert = scheme == 0
                           ? numth::plan_erh(n, {1, 20})
                           : numth::plan_chowla(n, {1, 5});
            } catch (const NoPrimeInWindowError& e) {
                failure = std::string("window empty: ") + e.what() +
                          " at n=" + std::to_string(n);
                break;
            }
            if (!cert.all_hold()) {
                failure = "fresh certificate failed recheck at n=" + std::to_string(n);
                break;
            }
            // round-trip
            auto back = numth::PartitionCertificate::from_json(cert.to_json());
            if (!back.all_hold()) {
                failure = "round-trip lost validity";
                break;
            }
            // mutations must be rejected
            auto mut1 = cert;
            mut1.ints["r"] += 1;
            auto checks1 = numth::recheck(mut1);
            bool rejected1 = std::any_of(checks1.begin(), checks1.end(),
                                         [](const auto& c) { return !c.holds; });
            auto mut2 = cert;
            mut2.lists["partition"][0] += 1;
            auto checks2 = numth::recheck(mut2);
            bool rejected2 = std::any_of(checks2.begin(), checks2.end(),
                                         [](const auto& c) { return !c.holds; });
            if (!rejected1 || !rejected2) {
                failure = "mutated certificate not rejected at n=" + std::to_string(n);
                break;
            }
        }
        ++done;
    }
    rep.observed = failure.empty() ? json({{"draws", done}}).dump() : failure;
    rep.verdict = failure.empty() ? Verdict::pass : Verdict::fail;
    rep.runtime_ms = t.ms();
    return rep;
}

VerificationReport verify_near_fermat_fixed_points(u64 limit) {
    Timer t;
    auto rep = make_report("near_fermat_fixed_points", {{"limit", limit}},
                           "Fermat primes appear for every eps");
    std::string failure;
    for (auto eps : std::vector<numth::Rational>{{1, 2}, {1, 4}, {1, 6}, {1, 8}}) {
        auto primes = numth::near_fermat_primes(eps, limit);
        for (u64 f : {3ull, 5ull, 17ull, 257ull, 65537ull}) {
            if (f > limit) continue;
            if (!std::binary_search(primes.begin(), primes.end(), f)) {
                failure = "missing Fermat prime " + std::to_string(f);
                break;
            }
        }
        if (!failure.empty()) break;
    }
    rep.observed = failure.empty() ? "present" : failure;
    rep.verdict = failure.empty() ? Verdict::pass : Verdict::fail;
    rep.runtime_ms = t.ms();
    return rep;
}

// ---------------------------------------------------------------------------

std::vector<VerificationReport> verify_all(u64 seed) {
    std::vector<VerificationReport> out;
    out.push_back(verify_dtc_named(12));
    out.push_back(verify_ark_exhaustive(3));
    out.push_back(verify_ark_exhaustive(4));
    out.push_back(verify_cks_sweep());
    out.push_back(verify_weil_sweep(2000, 50, seed));
    out.push_back(verify_paley_orbital_range(100));
    out.push_back(verify_gamma0_family(30));
    out.push_back(verify_orbital_bounds_pqr(3, 2, 7, 3, {2}));
    out.push_back(verify_orbital_bounds_pqr(5, 4, 11, 5, {2, 2}));
    out.push_back(verify_oliver_consistency(100, seed));
    out.push_back(verify_invariant_graph_cliques(perm::gamma_qd(17, 16), 3));
    out.push_back(verify_invariant_graph_cliques(perm::lambda1(5, 1, 6), 3));
    out.push_back(verify_fixed_point_isomorphism(31, hgraph::complete_graph(3)));
    out.push_back(verify_planner_roundtrip(20, seed));
    out.push_back(verify_near_fermat_fixed_points(1'000'000));
    return out;
}

bool any_theorem_backed_failure(const std::vector<VerificationReport>& reports) {
    return std::any_of(reports.begin(), reports.end(), [](const auto& r) {
        return r.theorem_backed &&
               (r.verdict == Verdict::fail);
    });
}

}  // namespace evlab::verify

#include "evlab/hgraph.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "evlab/errors.hpp"
#include "evlab/kernels/mask_scan.hpp"
#include "evlab/numth.hpp"

namespace evlab::hgraph {

SmallGraph::SmallGraph(u32 n) : adj_(n, 0) {
    if (n > 64) throw TooLargeError("SmallGraph limited to 64 vertices");
}

void SmallGraph::add_edge(u32 u, u32 v) {
    if (u == v) throw Error("no loops");
    if (u >= n() || v >= n()) throw Error("edge endpoint out of range");
    adj_[u] |= u64(1) << v;
    adj_[v] |= u64(1) << u;
}

u64 SmallGraph::edge_count() const {
    u64 s = 0;
    for (u64 r : adj_) s += std::popcount(r);
    return s / 2;
}

u32 SmallGraph::degree(u32 v) const { return std::popcount(adj_[v]); }

SmallGraph SmallGraph::from_edge_mask(u32 n, u64 mask) {
    SmallGraph g(n);
    u64 idx = 0;
    for (u32 i = 0; i < n; ++i)
        for (u32 j = i + 1; j < n; ++j, ++idx)
            if ((mask >> idx) & 1) g.add_edge(i, j);
    return g;
}

u64 SmallGraph::edge_mask() const {
    u64 mask = 0, idx = 0;
    for (u32 i = 0; i < n(); ++i)
        for (u32 j = i + 1; j < n(); ++j, ++idx)
            if (edge(i, j)) mask |= u64(1) << idx;
    return mask;
}

std::string SmallGraph::to_graph6() const {
    const u32 nn = n();
    std::string out;
    if (nn <= 62) {
        out.push_back(char(63 + nn));
    } else {
        out.push_back(char(126));
        out.push_back(char(63 + ((nn >> 12) & 63)));
        out.push_back(char(63 + ((nn >> 6) & 63)));
        out.push_back(char(63 + (nn & 63)));
    }
    // upper triangle, column-major: x(0,1), x(0,2), x(1,2), x(0,3), ...
    int bitpos = 5;
    char cur = 0;
    for (u32 j = 1; j < nn; ++j) {
        for (u32 i = 0; i < j; ++i) {
            if (edge(i, j)) cur |= char(1 << bitpos);
            if (--bitpos < 0) {
                out.push_back(char(63 + cur));
                cur = 0;
                bitpos = 5;
            }
        }
    }
    if (bitpos != 5) out.push_back(char(63 + cur));
    return out;
}

SmallGraph SmallGraph::from_graph6(const std::string& s) {
    std::size_t pos = 0;
    auto next = [&]() -> u32 {
        if (pos >= s.size()) throw FormatError("graph6: truncated");
        int c = s[pos++] - 63;
        if (c < 0 || c > 63) throw FormatError("graph6: bad character");
        return static_cast<u32>(c);
    };
    u32 nn;
    u32 c0 = next();
    if (c0 < 63) {
        nn = c0;
    } else {
        u32 a = next(), b = next(), c = next();
        nn = (a << 12) | (b << 6) | c;
    }
    if (nn > 64) throw TooLargeError("graph6: more than 64 vertices");
    SmallGraph g(nn);
    int bitpos = -1;
    u32 cur = 0;
    for (u32 j = 1; j < nn; ++j) {
        for (u32 i = 0; i < j; ++i) {
            if (bitpos < 0) {
                cur = next();
                bitpos = 5;
            }
            if ((cur >> bitpos) & 1) g.add_edge(i, j);
            --bitpos;
        }
    }
    return g;
}

SmallGraph complete_graph(u32 n) {
    SmallGraph g(n);
    for (u32 i = 0; i < n; ++i)
        for (u32 j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
}

SmallGraph cycle_graph(u32 n) {
    if (n < 3) throw Error("cycle needs at least 3 vertices");
    SmallGraph g(n);
    for (u32 i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

SmallGraph path_graph(u32 n) {
    SmallGraph g(n);
    for (u32 i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

SmallGraph empty_graph(u32 n) { return SmallGraph(n); }

SmallGraph star_graph(u32 leaves) {
    SmallGraph g(leaves + 1);
    for (u32 i = 1; i <= leaves; ++i) g.add_edge(0, i);
    return g;
}

SmallGraph petersen_graph() {
    SmallGraph g(10);
    for (u32 i = 0; i < 5; ++i) {
        g.add_edge(i, (i + 1) % 5);        // outer cycle
        g.add_edge(i, i + 5);              // spokes
        g.add_edge(i + 5, (i + 2) % 5 + 5);  // inner pentagram
    }
    return g;
}

SmallGraph named_graph(const std::string& name) {
    if (name == "K2") return complete_graph(2);
    if (name == "K3") return complete_graph(3);
    if (name == "K4") return complete_graph(4);
    if (name == "K5") return complete_graph(5);
    if (name == "C4") return cycle_graph(4);
    if (name == "C5") return cycle_graph(5);
    if (name == "P3") return path_graph(3);
    if (name == "P4") return path_graph(4);
    if (name == "petersen") return petersen_graph();
    return SmallGraph::from_graph6(name);
}

// ---------------------------------------------------------------------------

bool verify_witness(const HomWitness& w, const SmallGraph& H, const SmallGraph& G) {
    if (w.mapping.size() != H.n()) return false;
    for (u32 v : w.mapping)
        if (v >= G.n()) return false;
    for (u32 u = 0; u < H.n(); ++u)
        for (u32 v = u + 1; v < H.n(); ++v)
            if (H.edge(u, v) && !G.edge(w.mapping[u], w.mapping[v])) return false;
    if (w.injective) {
        auto m = w.mapping;
        std::sort(m.begin(), m.end());
        if (std::adjacent_find(m.begin(), m.end()) != m.end()) return false;
    }
    return true;
}

namespace {

// Backtracking hom/subgraph search.  Variable order: descending H-degree
// (fail-first); neighbor pruning against already-assigned vertices.
struct HomSearch {
    const SmallGraph& H;
    const SmallGraph& G;
    bool injective;
    std::vector<u32> order;    // H vertices in assignment order
    std::vector<u32> mapping;  // by H vertex
    u64 used = 0;              // G vertices taken (injective mode)

    HomSearch(const SmallGraph& h, const SmallGraph& g, bool inj)
        : H(h), G(g), injective(inj), mapping(h.n(), UINT32_MAX) {
        order.resize(H.n());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](u32 a, u32 b) {
            return H.degree(a) > H.degree(b);
        });
    }

    bool run(std::size_t depth) {
        if (depth == order.size()) return true;
        const u32 u = order[depth];
        for (u32 v = 0; v < G.n(); ++v) {
            if (injective && ((used >> v) & 1)) continue;
            if (!injective && G.degree(v) < 1 && H.degree(u) > 0) continue;
            bool ok = true;
            for (u32 w = 0; w < H.n(); ++w) {
                if (mapping[w] == UINT32_MAX || !H.edge(u, w)) continue;
                if (!G.edge(v, mapping[w])) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            // loops are impossible: an H-edge to an assigned vertex equal to v
            // would need G.edge(v, v); unassigned H-neighbors can still map
            // elsewhere, so only check assigned ones (done above)
            mapping[u] = v;
            used |= u64(1) << v;
            if (run(depth + 1)) return true;
            used &= ~(u64(1) << v);
            mapping[u] = UINT32_MAX;
        }
        return false;
    }
};

}  // namespace

std::optional<HomWitness> exists_hom(const SmallGraph& H, const SmallGraph& G) {
    if (H.n() > 10) throw TooLargeError("exists_hom: |V(H)| > 10");
    HomSearch s(H, G, false);
    if (!s.run(0)) return std::nullopt;
    return HomWitness{s.mapping, false};
}

std::optional<HomWitness> has_subgraph(const SmallGraph& G, const SmallGraph& H) {
    if (H.n() > 8) throw TooLargeError("has_subgraph: |V(H)| > 8");
    if (H.n() > G.n()) return std::nullopt;
    HomSearch s(H, G, true);
    if (!s.run(0)) return std::nullopt;
    return HomWitness{s.mapping, true};
}

u64 t_of_h(const SmallGraph& H) { return numth::t_threshold(H.n()); }

// ---------------------------------------------------------------------------

namespace {

std::vector<u32> image_patterns(const SmallGraph& H, u32 r, bool injective) {
    if (pair_count(r) > 31) throw TooLargeError("patterns: C(r,2) > 31");
    const u32 h = H.n();
    std::vector<u32> pats;
    std::vector<u32> f(h, 0);
    const u64 total = [&] {
        u64 t = 1;
        for (u32 i = 0; i < h; ++i) t *= r;
        return t;
    }();
    for (u64 code = 0; code < total; ++code) {
        u64 v = code;
        for (u32 i = 0; i < h; ++i) {
            f[i] = static_cast<u32>(v % r);
            v /= r;
        }
        if (injective) {
            u64 seen = 0;
            bool dup = false;
            for (u32 i = 0; i < h; ++i) {
                if ((seen >> f[i]) & 1) {
                    dup = true;
                    break;
                }
                seen |= u64(1) << f[i];
            }
            if (dup) continue;
        }
        u32 mask = 0;
        bool ok = true;
        for (u32 a = 0; a < h && ok; ++a) {
            for (u32 b = a + 1; b < h && ok; ++b) {
                if (!H.edge(a, b)) continue;
                if (f[a] == f[b]) {
                    ok = false;
                    break;
                }
                u32 i = std::min(f[a], f[b]), j = std::max(f[a], f[b]);
                mask |= u32(1) << pair_index(r, i, j);
            }
        }
        if (ok) pats.push_back(mask);
    }
    std::sort(pats.begin(), pats.end());
    pats.erase(std::unique(pats.begin(), pats.end()), pats.end());
    // keep only minimal patterns
    std::vector<u32> minimal;
    for (u32 a : pats) {
        bool keep = true;
        for (u32 b : pats) {
            if (b != a && (a & b) == b) {
                keep = false;
                break;
            }
        }
        if (keep) minimal.push_back(a);
    }
    return minimal;
}

}  // namespace

std::vector<u32> hom_image_patterns(const SmallGraph& H, u32 r) {
    return image_patterns(H, r, false);
}

std::vector<u32> subgraph_patterns(const SmallGraph& H, u32 r) {
    return image_patterns(H, r, true);
}

scomplex::ExplicitComplex q_hom_complex(u32 r, const SmallGraph& H) {
    const u64 slots = pair_count(r);
    if (slots > 21) throw TooLargeError("q_hom_complex: C(r,2) > 21");
    auto pats = hom_image_patterns(H, r);
    std::vector<u64> table;
    kernels::fill_avoiding_table(pats, static_cast<int>(slots), table);
    // downward closed by construction: removing edges cannot create a hom
    return scomplex::ExplicitComplex::from_table(static_cast<int>(slots),
                                                 std::move(table), false);
}

CksReport cks_parity_check(u32 r, const SmallGraph& H) {
    CksReport rep;
    rep.t_h = t_of_h(H);
    if (r % rep.t_h != 1 % rep.t_h) {
        rep.verdict = ParityVerdict::inapplicable;
        return rep;
    }
    auto K = q_hom_complex(r, H);
    rep.chi = K.euler_characteristic();
    rep.verdict = (rep.chi % 2 == 0) ? ParityVerdict::holds : ParityVerdict::fails;
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

ffield::Field paley_field(u64 q, u64 d) {
    auto fac = numth::factorize(q);
    if (fac.size() != 1) throw Error("paley: q must be a prime power");
    if (q % 2 == 0) throw Error("paley: q must be odd");
    if (d == 0 || (q - 1) % d != 0)
        throw NotDivisorError("paley: d must divide q-1");
    if (d % 2 != 0) throw OddDError("paley: d must be even");
    return ffield::Field::make(fac[0].first, u64(fac[0].second));
}

}  // namespace

SmallGraph paley(u64 q, u64 d) {
    if (q > 64) throw TooLargeError("explicit paley graph needs q <= 64");
    ffield::Field F = paley_field(q, d);
    auto sub = F.multiplicative_subgroup(d);
    std::vector<bool> in_sub(q, false);
    for (u64 s : sub) in_sub[s] = true;
    SmallGraph g(static_cast<u32>(q));
    for (u64 i = 0; i < q; ++i)
        for (u64 j = i + 1; j < q; ++j)
            if (in_sub[F.sub(i, j)]) g.add_edge(u32(i), u32(j));
    return g;
}

PaleyOracle::PaleyOracle(u64 q, u64 d) : field_(paley_field(q, d)), d_(d) {
    if (q > 100'000) throw TooLargeError("paley oracle needs q <= 10^5");
    auto sub = field_.multiplicative_subgroup(d);
    in_subgroup_.assign(q, false);
    for (u64 s : sub) in_subgroup_[s] = true;
}

bool PaleyOracle::adjacent(u64 i, u64 j) const {
    if (i == j) return false;
    return in_subgroup_[field_.sub(i, j)];
}

// ---------------------------------------------------------------------------

namespace {

// Tomita-style branch and bound with greedy coloring bound.
struct CliqueSearch {
    const SmallGraph& G;
    u32 target;
    std::vector<u32> current, best;

    explicit CliqueSearch(const SmallGraph& g, u32 t) : G(g), target(t) {}

    // color vertices of cand greedily; order by color for pruning
    void expand(std::vector<u32>& cand) {
        if (current.size() >= target) return;  // found
        if (cand.empty()) return;
        // greedy coloring
        std::vector<u32> color(cand.size());
        std::vector<u64> color_sets;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            u32 v = cand[i];
            u32 c = 0;
            while (c < color_sets.size() && (color_sets[c] & G.row(v))) ++c;
            if (c == color_sets.size()) color_sets.push_back(0);
            color_sets[c] |= u64(1) << v;
            color[i] = c + 1;
        }
        // process in decreasing color
        std::vector<u32> idx(cand.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](u32 a, u32 b) { return color[a] < color[b]; });
        std::vector<u32> ordered(cand.size());
        std::vector<u32> ocolor(cand.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            ordered[i] = cand[idx[i]];
            ocolor[i] = color[idx[i]];
        }
        for (std::size_t i = ordered.size(); i-- > 0;) {
            if (current.size() + ocolor[i] < target) return;  // bound
            u32 v = ordered[i];
            current.push_back(v);
            std::vector<u32> next;
            for (std::size_t j = 0; j < i; ++j)
                if (G.edge(v, ordered[j])) next.push_back(ordered[j]);
            if (current.size() >= target) {
                best = current;
                return;
            }
            expand(next);
            if (!best.empty()) return;
            current.pop_back();
        }
    }
};

}  // namespace

std::optional<std::vector<u32>> has_clique(const SmallGraph& G, u32 h) {
    if (h == 0) return std::vector<u32>{};
    if (h == 1) {
        if (G.n() == 0) return std::nullopt;
        return std::vector<u32>{0};
    }
    if (h > G.n()) return std::nullopt;
    CliqueSearch cs(G, h);
    std::vector<u32> cand(G.n());
    std::iota(cand.begin(), cand.end(), 0);
    cs.expand(cand);
    if (cs.best.empty()) return std::nullopt;
    std::sort(cs.best.begin(), cs.best.end());
    return cs.best;
}

namespace {

bool oracle_clique_dfs(const PaleyOracle& G, u32 h, std::vector<u64>& cur,
                       u64 start) {
    if (cur.size() == h) return true;
    for (u64 v = start; v < G.q(); ++v) {
        bool ok = true;
        for (u64 u : cur)
            if (!G.adjacent(u, v)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        cur.push_back(v);
        if (oracle_clique_dfs(G, h, cur, v + 1)) return true;
        cur.pop_back();
    }
    return false;
}

}  // namespace

std::optional<std::vector<u64>> has_clique(const PaleyOracle& G, u32 h) {
    if (h > 8) throw TooLargeError("oracle clique search limited to h <= 8");
    std::vector<u64> cur;
    // vertex-transitivity: anchor the first vertex at 0
    if (h >= 1) cur.push_back(0);
    if (h <= 1) return cur;
    if (oracle_clique_dfs(G, h, cur, 1)) return cur;
    return std::nullopt;
}

PaleyCliqueReport paley_clique_check(u64 q, u64 d, u32 h) {
    PaleyCliqueReport rep;
    // (q-1)/d <= q^(1/2h)  <=>  ((q-1)/d)^(2h) <= q, exactly
    if ((q - 1) % d != 0) throw NotDivisorError("paley_clique_check: d | q-1");
    const u64 ratio = (q - 1) / d;
    rep.hypothesis_holds = numth::cmp_pow(ratio, 2 * u64(h), q, 1) <= 0;
    if (q <= 64) {
        auto g = paley(q, d);
        auto w = has_clique(g, h);
        rep.clique_found = w.has_value();
        if (w)
            for (u32 v : *w) rep.witness.push_back(v);
    } else {
        PaleyOracle g(q, d);
        auto w = has_clique(g, h);
        rep.clique_found = w.has_value();
        if (w) rep.witness = *w;
    }
    rep.consistent = !rep.hypothesis_holds || rep.clique_found;
    return rep;
}

// ---------------------------------------------------------------------------

WeilReport weil_count_check(u64 q, u64 l, const std::vector<u64>& a_list) {
    if (!numth::is_prime(q)) throw NonPrimeError("weil_count_check: q must be prime");
    if (q > 100'000) throw TooLargeError("weil_count_check: q <= 10^5");
    if (l == 0 || (q - 1) % l != 0)
        throw NotDivisorError("weil_count_check: l must divide q-1");
    if (a_list.size() > 4) throw TooLargeError("weil_count_check: t <= 4");
    for (std::size_t i = 0; i < a_list.size(); ++i)
        for (std::size_t j = i + 1; j < a_list.size(); ++j)
            if (a_list[i] % q == a_list[j] % q)
                throw Error("weil_count_check: a_i must be distinct");

    const u64 e = (q - 1) / l;
    const u64 t = a_list.size();
    // indicator table: y^e == 1
    std::vector<bool> ind(q, false);
    for (u64 y = 1; y < q; ++y) ind[y] = numth::powmod(y, e, q) == 1;

    u64 count = 0;
    for (u64 x = 0; x < q; ++x) {
        bool all = true;
        for (u64 a : a_list) {
            u64 y = (a + x) % q;
            if (y == 0 || !ind[y]) {
                all = false;
                break;
            }
        }
        if (all) ++count;
    }

    WeilReport rep;
    rep.count = count;
    const double lt = std::pow(double(l), double(t));
    rep.bound_lo = double(q) / lt - double(t) * std::sqrt(double(q));
    rep.bound_hi = double(q) / lt + double(t) * std::sqrt(double(q));
    // exact: |count * l^t - q| <= t * l^t * sqrt(q), squared in big integers
    mpz_class lt_z;
    mpz_ui_pow_ui(lt_z.get_mpz_t(), static_cast<unsigned long>(l),
                  static_cast<unsigned long>(t));
    mpz_class lhs = mpz_class(static_cast<unsigned long>(count)) * lt_z -
                    mpz_class(static_cast<unsigned long>(q));
    mpz_class lhs2 = lhs * lhs;
    mpz_class rhs = mpz_class(static_cast<unsigned long>(t * t)) * lt_z * lt_z *
                    mpz_class(static_cast<unsigned long>(q));
    rep.within = lhs2 <= rhs;
    return rep;
}

}  // namespace evlab::hgraph

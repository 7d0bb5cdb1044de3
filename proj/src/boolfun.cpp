#include "evlab/boolfun.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_map>

#include "evlab/errors.hpp"
#include "evlab/kernels/mask_scan.hpp"
#include "evlab/perm.hpp"

namespace evlab::boolfun {

using nlohmann::json;

BooleanFunction::BooleanFunction(u32 n_vars, std::vector<u64> table) : n_(n_vars) {
    if (n_vars > 24) throw TooLargeError("BooleanFunction limited to 24 variables");
    const u64 total = u64(1) << n_vars;
    table.resize((total + 63) / 64, 0);
    if (total < 64) table[0] &= (u64(1) << total) - 1;
    table_ = std::move(table);
}

BooleanFunction BooleanFunction::constant(u32 n_vars, bool value) {
    const u64 total = u64(1) << n_vars;
    std::vector<u64> t((total + 63) / 64, value ? ~u64(0) : 0);
    return BooleanFunction(n_vars, std::move(t));
}

BooleanFunction BooleanFunction::conjunction(u32 n_vars) {
    auto f = constant(n_vars, false);
    f.set((u32(1) << n_vars) - 1, true);
    return f;
}

BooleanFunction BooleanFunction::disjunction(u32 n_vars) {
    auto f = constant(n_vars, true);
    f.set(0, false);
    return f;
}

BooleanFunction BooleanFunction::parity(u32 n_vars) {
    auto f = constant(n_vars, false);
    const u64 total = u64(1) << n_vars;
    for (u64 x = 0; x < total; ++x)
        if (std::popcount(x) & 1) f.set(static_cast<u32>(x), true);
    return f;
}

BooleanFunction BooleanFunction::dictator(u32 n_vars, u32 var) {
    auto f = constant(n_vars, false);
    const u64 total = u64(1) << n_vars;
    for (u64 x = 0; x < total; ++x)
        if ((x >> var) & 1) f.set(static_cast<u32>(x), true);
    return f;
}

void BooleanFunction::set(u32 x, bool v) {
    if (v)
        table_[x >> 6] |= u64(1) << (x & 63);
    else
        table_[x >> 6] &= ~(u64(1) << (x & 63));
}

BooleanFunction BooleanFunction::permute_vars(const std::vector<u32>& pi) const {
    if (pi.size() != n_) throw Error("permute_vars: wrong length");
    auto g = constant(n_, false);
    const u64 total = u64(1) << n_;
    for (u64 x = 0; x < total; ++x) {
        u32 y = 0;  // y has bit pi(j) = bit j of x
        for (u32 j = 0; j < n_; ++j)
            if ((x >> j) & 1) y |= u32(1) << pi[j];
        if (eval(static_cast<u32>(x))) g.set(y, true);
    }
    return g;
}

std::string BooleanFunction::to_json(const std::string& order_tag) const {
    json j;
    j["n_vars"] = n_;
    j["edge_order"] = order_tag;
    j["table_hex"] = hex_encode_bits(table_, u64(1) << n_);
    return j.dump();
}

BooleanFunction BooleanFunction::from_json(const std::string& text) {
    json j = json::parse(text);
    u32 n = j.at("n_vars").get<u32>();
    auto words = hex_decode_bits(j.at("table_hex").get<std::string>(), u64(1) << n);
    return BooleanFunction(n, std::move(words));
}

// ---------------------------------------------------------------------------
// Decision-tree solver.

namespace {

struct BudgetHit {};

struct Solver {
    const BooleanFunction& f;
    const u32 N;
    const DtcOptions opt;
    u64 nodes = 0;
    std::unordered_map<u64, u32> memo;

    Solver(const BooleanFunction& fn, DtcOptions o) : f(fn), N(fn.n_vars()), opt(o) {}

    // is f constant on {x : x & queried == assign}? value out when constant
    bool restriction_constant(u32 queried, u32 assign, bool* value) const {
        const u32 free = ~queried & ((N == 32 ? ~u32(0) : (u32(1) << N) - 1));
        bool first = f.eval(assign);
        // enumerate submasks of free
        u32 s = free;
        for (;;) {
            if (f.eval(assign | s) != first) return false;
            if (s == 0) break;
            s = (s - 1) & free;
        }
        *value = first;
        return true;
    }

    u64 memo_key(u32 queried, u32 assign) const {
        if (!opt.table_hash_memo) return u64(queried) | (u64(assign) << N);
        // canonical subfunction: hash the restricted table over free vars
        const u32 free = ~queried & ((u32(1) << N) - 1);
        const u64 prime = 0x100000001b3ull;
        u64 h = (0xcbf29ce484222325ull ^ u64(std::popcount(free))) * prime;
        u32 s = free;
        u64 bits = 0;
        int nb = 0;
        for (;;) {
            bits = (bits << 1) | u64(f.eval(assign | s));
            if (++nb == 64) {
                h = (h ^ bits) * prime;
                bits = 0;
                nb = 0;
            }
            if (s == 0) break;
            s = (s - 1) & free;
        }
        h = (h ^ (bits + u64(nb))) * prime;
        h ^= h >> 29;
        return h;
    }

    u32 solve(u32 queried, u32 assign) {
        if (++nodes > opt.node_budget) throw BudgetHit{};
        bool value;
        if (restriction_constant(queried, assign, &value)) return 0;
        const u64 key = memo_key(queried, assign);
        if (auto it = memo.find(key); it != memo.end()) return it->second;

        const u32 unqueried_count = N - std::popcount(queried);
        u32 best = unqueried_count;  // query everything that is left
        for (u32 i = 0; i < N; ++i) {
            if ((queried >> i) & 1) continue;
            const u32 bit = u32(1) << i;
            u32 d0 = solve(queried | bit, assign);
            if (d0 + 1 >= best) continue;  // this variable cannot improve
            u32 d1 = solve(queried | bit, assign | bit);
            best = std::min(best, 1 + std::max(d0, d1));
            if (best == 1) break;
        }
        memo.emplace(key, best);
        return best;
    }
};

}  // namespace

DtcResult decision_tree_complexity(const BooleanFunction& f, DtcOptions opt) {
    Solver s(f, opt);
    DtcResult res;
    try {
        u32 d = s.solve(0, 0);
        res.lo = res.hi = d;
    } catch (const BudgetHit&) {
        bool value;
        res.lo = s.restriction_constant(0, 0, &value) ? 0 : 1;
        res.hi = f.n_vars();
    }
    res.nodes = s.nodes;
    return res;
}

bool is_evasive(const BooleanFunction& f, DtcOptions opt) {
    auto r = decision_tree_complexity(f, opt);
    if (!r.exact()) throw CapExceededError("is_evasive: node budget exhausted");
    return r.lo == f.n_vars();
}

AdversaryCertificate adversary_certificate(const BooleanFunction& f) {
    if (f.n_vars() > 12)
        throw TooLargeError("adversary certificates limited to 12 variables");
    Solver s(f, DtcOptions{});
    AdversaryCertificate cert;
    cert.depth = s.solve(0, 0);

    std::unordered_map<u64, i64> node_of;  // restriction -> node id
    std::function<i64(u32, u32)> build = [&](u32 queried, u32 assign) -> i64 {
        bool value;
        if (s.restriction_constant(queried, assign, &value)) return -1;
        const u64 key = u64(queried) | (u64(assign) << f.n_vars());
        if (auto it = node_of.find(key); it != node_of.end()) return it->second;
        const i64 id = static_cast<i64>(cert.nodes.size());
        node_of.emplace(key, id);
        cert.nodes.emplace_back();
        for (u32 i = 0; i < f.n_vars(); ++i) {
            if ((queried >> i) & 1) continue;
            const u32 bit = u32(1) << i;
            u32 d0 = s.solve(queried | bit, assign);
            u32 d1 = s.solve(queried | bit, assign | bit);
            const bool answer = d1 > d0;  // keep the harder branch; ties -> 0
            const u32 na = assign | (answer ? bit : 0);
            i64 child = build(queried | bit, na);
            cert.nodes[id].moves[i] = {answer, child};
        }
        return id;
    };
    if (cert.depth > 0) build(0, 0);
    return cert;
}

bool replay_certificate(const BooleanFunction& f, const AdversaryCertificate& c,
                        Rng& rng, int trials) {
    if (c.depth == 0) return true;
    Solver s(f, DtcOptions{});
    for (int t = 0; t < trials; ++t) {
        u32 queried = 0, assign = 0;
        i64 node = 0;
        for (u32 step = 0; step < c.depth; ++step) {
            // before the claimed depth is reached the function must still be
            // undetermined
            bool value;
            if (s.restriction_constant(queried, assign, &value)) return false;
            if (node < 0) return false;
            // querier probes a random unqueried variable
            std::vector<u32> options;
            for (u32 i = 0; i < f.n_vars(); ++i)
                if (!((queried >> i) & 1)) options.push_back(i);
            u32 var = options[rng.below(options.size())];
            auto it = c.nodes[node].moves.find(var);
            if (it == c.nodes[node].moves.end()) return false;
            auto [answer, child] = it->second;
            queried |= u32(1) << var;
            if (answer) assign |= u32(1) << var;
            node = child;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Graph properties.

GraphPropertySpec named_property(const std::string& name, u32 n) {
    GraphPropertySpec spec;
    spec.n = n;
    spec.name = name;
    if (name == "triangle-free") {
        spec.monotone = true;
        spec.predicate = [](const hgraph::SmallGraph& g) {
            return !hgraph::has_subgraph(g, hgraph::complete_graph(3));
        };
        return spec;
    }
    if (name.rfind("forbid:", 0) == 0) {
        auto H = hgraph::named_graph(name.substr(7));
        spec.monotone = true;
        spec.predicate = [H](const hgraph::SmallGraph& g) {
            return !hgraph::has_subgraph(g, H);
        };
        return spec;
    }
    if (name == "connectivity") {
        spec.monotone = false;  // increasing, not decreasing
        spec.predicate = [](const hgraph::SmallGraph& g) {
            if (g.n() == 0) return true;
            u64 seen = 1;
            std::vector<u32> stack{0};
            while (!stack.empty()) {
                u32 v = stack.back();
                stack.pop_back();
                u64 nb = g.row(v) & ~seen;
                seen |= g.row(v);
                while (nb) {
                    stack.push_back(std::countr_zero(nb));
                    nb &= nb - 1;
                }
            }
            return std::popcount(seen) == int(g.n());
        };
        return spec;
    }
    if (name.rfind("max-edges:", 0) == 0) {
        u64 m = std::stoull(name.substr(10));
        spec.monotone = true;
        spec.predicate = [m](const hgraph::SmallGraph& g) {
            return g.edge_count() <= m;
        };
        return spec;
    }
    throw FormatError("unknown property: " + name);
}

namespace {

std::vector<std::vector<u32>> all_vertex_perms(u32 n) {
    std::vector<u32> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<u32>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

u64 apply_vertex_perm_to_mask(u32 n, u64 mask, const std::vector<u32>& p) {
    u64 out = 0;
    u64 idx = 0;
    for (u32 i = 0; i < n; ++i) {
        for (u32 j = i + 1; j < n; ++j, ++idx) {
            if (!((mask >> idx) & 1)) continue;
            u32 a = p[i], b = p[j];
            if (a > b) std::swap(a, b);
            out |= u64(1) << pair_index(n, a, b);
        }
    }
    return out;
}

}  // namespace

bool check_invariance(const GraphPropertySpec& spec, Rng& rng, int trials) {
    const u32 n = spec.n;
    const u64 total = u64(1) << pair_count(n);
    if (n <= 5) {
        auto perms = all_vertex_perms(n);
        for (u64 m = 0; m < total; ++m) {
            bool v = spec.predicate(hgraph::SmallGraph::from_edge_mask(n, m));
            for (const auto& p : perms) {
                u64 pm = apply_vertex_perm_to_mask(n, m, p);
                if (spec.predicate(hgraph::SmallGraph::from_edge_mask(n, pm)) != v)
                    return false;
            }
        }
        return true;
    }
    for (int t = 0; t < trials; ++t) {
        u64 m = rng.below(total);
        std::vector<u32> p(n);
        std::iota(p.begin(), p.end(), 0);
        for (u32 i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
        u64 pm = apply_vertex_perm_to_mask(n, m, p);
        if (spec.predicate(hgraph::SmallGraph::from_edge_mask(n, m)) !=
            spec.predicate(hgraph::SmallGraph::from_edge_mask(n, pm)))
            return false;
    }
    return true;
}

bool check_monotone(const GraphPropertySpec& spec, Rng& rng, int trials) {
    const u32 n = spec.n;
    const u64 total = u64(1) << pair_count(n);
    auto closed_at = [&](u64 m) {
        if (!spec.predicate(hgraph::SmallGraph::from_edge_mask(n, m))) return true;
        u64 rest = m;
        while (rest) {
            u64 bit = rest & (~rest + 1);
            if (!spec.predicate(hgraph::SmallGraph::from_edge_mask(n, m ^ bit)))
                return false;
            rest ^= bit;
        }
        return true;
    };
    if (n <= 5) {
        for (u64 m = 0; m < total; ++m)
            if (!closed_at(m)) return false;
        return true;
    }
    for (int t = 0; t < trials; ++t)
        if (!closed_at(rng.below(total))) return false;
    return true;
}

BooleanFunction property_to_function(const GraphPropertySpec& spec) {
    if (spec.n > 7) throw TooLargeError("property_to_function: n > 7");
    const u32 N = static_cast<u32>(pair_count(spec.n));
    auto f = BooleanFunction::constant(N, false);
    const u64 total = u64(1) << N;
    for (u64 m = 0; m < total; ++m)
        if (spec.predicate(hgraph::SmallGraph::from_edge_mask(spec.n, m)))
            f.set(static_cast<u32>(m), true);
    return f;
}

// ---------------------------------------------------------------------------

IsoClasses graph_iso_classes(u32 n) {
    if (n > 5) throw TooLargeError("graph_iso_classes: n > 5");
    IsoClasses cls;
    cls.n = n;
    const u32 N = static_cast<u32>(pair_count(n));
    const u64 total = u64(1) << N;
    auto perms = all_vertex_perms(n);
    cls.class_of_mask.assign(total, UINT32_MAX);
    for (u64 m = 0; m < total; ++m) {
        if (cls.class_of_mask[m] != UINT32_MAX) continue;
        const u32 id = cls.count();
        u64 canon = m;
        std::vector<u64> orbit_masks;
        for (const auto& p : perms) {
            u64 pm = apply_vertex_perm_to_mask(n, m, p);
            canon = std::min(canon, pm);
            orbit_masks.push_back(pm);
        }
        for (u64 pm : orbit_masks) cls.class_of_mask[pm] = id;
        cls.class_rep.push_back(static_cast<u32>(canon));
        cls.class_edges.push_back(std::popcount(canon));
    }
    // subgraph (edge-deletion) order, transitively closed
    cls.below.assign(cls.count(), 0);
    for (u32 c = 0; c < cls.count(); ++c) cls.below[c] = u64(1) << c;
    for (u64 m = 0; m < total; ++m) {
        u32 cm = cls.class_of_mask[m];
        u64 rest = m;
        while (rest) {
            u64 bit = rest & (~rest + 1);
            cls.below[cm] |= u64(1) << cls.class_of_mask[m ^ bit];
            rest ^= bit;
        }
    }
    // transitive closure (classes ordered by edge count, so a few sweeps do)
    bool changed = true;
    while (changed) {
        changed = false;
        for (u32 c = 0; c < cls.count(); ++c) {
            u64 acc = cls.below[c];
            u64 rest = acc;
            while (rest) {
                u32 j = std::countr_zero(rest);
                rest &= rest - 1;
                acc |= cls.below[j];
            }
            if (acc != cls.below[c]) {
                cls.below[c] = acc;
                changed = true;
            }
        }
    }
    return cls;
}

bool enumerate_monotone_properties(u32 n, u64 max_count,
                                   const std::function<void(u64)>& yield) {
    auto cls = graph_iso_classes(n);
    const u32 k = cls.count();
    // topological order: by edge count then id (already grouped that way by
    // construction since masks enumerate in popcount-compatible order only
    // roughly; sort explicitly)
    std::vector<u32> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](u32 a, u32 b) {
        return cls.class_edges[a] < cls.class_edges[b];
    });
    u64 emitted = 0;
    bool complete = true;
    std::function<bool(u32, u64)> dfs = [&](u32 pos, u64 included) -> bool {
        if (pos == k) {
            if (emitted == max_count) {
                complete = false;
                return false;
            }
            ++emitted;
            yield(included);
            return true;
        }
        const u32 c = order[pos];
        // excluding c: fine as long as nothing above c is later forced; the
        // downward-closure constraint is enforced when including
        if (!dfs(pos + 1, included)) return false;
        const u64 strictly_below = cls.below[c] & ~(u64(1) << c);
        if ((strictly_below & ~included) == 0) {
            if (!dfs(pos + 1, included | (u64(1) << c))) return false;
        }
        return true;
    };
    dfs(0, 0);
    return complete;
}

BooleanFunction function_from_class_set(const IsoClasses& cls, u64 class_set) {
    const u32 N = static_cast<u32>(pair_count(cls.n));
    auto f = BooleanFunction::constant(N, false);
    const u64 total = u64(1) << N;
    for (u64 m = 0; m < total; ++m)
        if ((class_set >> cls.class_of_mask[m]) & 1) f.set(static_cast<u32>(m), true);
    return f;
}

// ---------------------------------------------------------------------------

BooleanFunction restricted_function_bnh(u32 n, u32 kprime,
                                        const hgraph::SmallGraph& H) {
    if (kprime > n) throw BadShapeError("restricted_function_bnh: k' > n");
    const u64 n_slots = pair_count(n);
    const u64 tail_slots = pair_count(kprime);
    const u64 nprime = n_slots - tail_slots;
    if (nprime > 21) throw TooLargeError("restricted_function_bnh: N' > 21");

    // map full slots -> restricted variable index (tail-tail slots dropped)
    const u32 tail_start = n - kprime;
    std::vector<i64> var_of_slot(n_slots, -1);
    u32 next = 0;
    u64 idx = 0;
    for (u32 i = 0; i < n; ++i) {
        for (u32 j = i + 1; j < n; ++j, ++idx) {
            if (i >= tail_start && j >= tail_start) continue;
            var_of_slot[idx] = next++;
        }
    }

    auto full_pats = hgraph::subgraph_patterns(H, n);
    std::vector<u32> pats;
    for (u64 pm : full_pats) {
        u32 translated = 0;
        bool usable = true;
        u64 rest = pm;
        while (rest) {
            u32 slot = std::countr_zero(rest);
            rest &= rest - 1;
            if (var_of_slot[slot] < 0) {
                usable = false;  // pattern needs a tail edge: never present
                break;
            }
            translated |= u32(1) << var_of_slot[slot];
        }
        if (usable) pats.push_back(translated);
    }
    std::vector<u64> table;
    kernels::fill_avoiding_table(pats, static_cast<int>(nprime), table);
    return BooleanFunction(static_cast<u32>(nprime), std::move(table));
}

}  // namespace evlab::boolfun

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <numeric>

#include "dtc_naive.hpp"
#include "evlab/boolfun.hpp"
#include "evlab/errors.hpp"
#include "evlab/hgraph.hpp"
#include "evlab/util.hpp"

using namespace evlab;
using namespace evlab::boolfun;

TEST_CASE("decision-tree complexity of the named functions") {
    for (u32 n = 1; n <= 10; ++n) {
        CHECK(decision_tree_complexity(BooleanFunction::conjunction(n)).lo == n);
        CHECK(decision_tree_complexity(BooleanFunction::disjunction(n)).lo == n);
        CHECK(decision_tree_complexity(BooleanFunction::parity(n)).lo == n);
        CHECK(decision_tree_complexity(BooleanFunction::constant(n, false)).lo == 0);
    }
    CHECK(decision_tree_complexity(BooleanFunction::dictator(5, 0)).lo == 1);
    CHECK(is_evasive(BooleanFunction::parity(5)));
    CHECK_FALSE(is_evasive(BooleanFunction::dictator(5, 2)));
}

TEST_CASE("memoized solver equals the naive recursion exhaustively at N=3") {
    for (u32 bits = 0; bits < 256; ++bits) {
        BooleanFunction f(3, {bits});
        auto d = decision_tree_complexity(f);
        CHECK(d.exact());
        CHECK(d.lo == test_support::dtc_naive(f));
    }
}

TEST_CASE("memoized solver equals the naive recursion on random functions") {
    Rng rng(404);
    for (int trial = 0; trial < 500; ++trial) {
        const u32 n = 4 + static_cast<u32>(rng.below(5));  // up to 8
        const u64 total = u64(1) << n;
        std::vector<u64> words((total + 63) / 64);
        for (auto& w : words) w = rng.next();
        BooleanFunction f(n, std::move(words));
        auto d = decision_tree_complexity(f);
        CHECK(d.exact());
        CHECK(d.lo == test_support::dtc_naive(f));
    }
}

TEST_CASE("table-hash memo keys give the same answers") {
    Rng rng(77);
    DtcOptions hashed;
    hashed.table_hash_memo = true;
    for (int trial = 0; trial < 100; ++trial) {
        const u32 n = 4 + static_cast<u32>(rng.below(4));
        const u64 total = u64(1) << n;
        std::vector<u64> words((total + 63) / 64);
        for (auto& w : words) w = rng.next();
        BooleanFunction f(n, std::move(words));
        CHECK(decision_tree_complexity(f, hashed).lo ==
              decision_tree_complexity(f).lo);
    }
}

TEST_CASE("complexity is invariant under variable permutation") {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const u32 n = 4 + static_cast<u32>(rng.below(3));
        const u64 total = u64(1) << n;
        std::vector<u64> words((total + 63) / 64);
        for (auto& w : words) w = rng.next();
        BooleanFunction f(n, std::move(words));
        std::vector<u32> pi(n);
        std::iota(pi.begin(), pi.end(), 0);
        for (u32 j = n; j > 1; --j) std::swap(pi[j - 1], pi[rng.below(j)]);
        CHECK(decision_tree_complexity(f).lo ==
              decision_tree_complexity(f.permute_vars(pi)).lo);
    }
}

TEST_CASE("budget exhaustion returns sound bounds") {
    DtcOptions tiny;
    tiny.node_budget = 10;
    auto f = BooleanFunction::parity(8);
    auto d = decision_tree_complexity(f, tiny);
    CHECK_FALSE(d.exact());
    CHECK(d.lo >= 1);
    CHECK(d.hi <= 8);
    CHECK(d.lo <= 8);
    CHECK_THROWS_AS(is_evasive(f, tiny), CapExceededError);
}

TEST_CASE("adversary certificates replay") {
    Rng rng(15);
    auto and6 = BooleanFunction::conjunction(6);
    auto cert = adversary_certificate(and6);
    CHECK(cert.depth == 6);
    CHECK(replay_certificate(and6, cert, rng, 50));

    auto spec = named_property("triangle-free", 4);
    auto f = property_to_function(spec);
    auto c2 = adversary_certificate(f);
    CHECK(c2.depth == 6);
    CHECK(replay_certificate(f, c2, rng, 50));

    // a constant function has an empty certificate
    auto c3 = adversary_certificate(BooleanFunction::constant(4, true));
    CHECK(c3.depth == 0);
}

TEST_CASE("triangle-free property on 4 vertices") {
    auto spec = named_property("triangle-free", 4);
    auto f = property_to_function(spec);
    CHECK(f.n_vars() == 6);
    // 41 triangle-free labeled graphs on 4 vertices (exhaustive count)
    u64 ones = 0;
    for (u32 m = 0; m < 64; ++m)
        if (f.eval(m)) ++ones;
    CHECK(ones == 41);
    auto d = decision_tree_complexity(f);
    CHECK(d.lo == 6);
    CHECK(d.lo == test_support::dtc_naive(f));
}

TEST_CASE("degenerate properties as functions") {
    GraphPropertySpec empty;
    empty.n = 3;
    empty.predicate = [](const hgraph::SmallGraph&) { return false; };
    auto f = property_to_function(empty);
    for (u32 m = 0; m < 8; ++m) CHECK_FALSE(f.eval(m));

    GraphPropertySpec no_edges;
    no_edges.n = 3;
    no_edges.predicate = [](const hgraph::SmallGraph& g) {
        return g.edge_count() == 0;
    };
    auto f2 = property_to_function(no_edges);
    CHECK(f2.eval(0));
    for (u32 m = 1; m < 8; ++m) CHECK_FALSE(f2.eval(m));
}

TEST_CASE("invariance and monotonicity checks") {
    Rng rng(3);
    auto tf = named_property("triangle-free", 5);
    CHECK(check_invariance(tf, rng));
    CHECK(check_monotone(tf, rng));

    auto conn = named_property("connectivity", 5);
    CHECK(check_invariance(conn, rng));
    CHECK_FALSE(check_monotone(conn, rng));  // increasing, not decreasing

    auto me = named_property("max-edges:3", 4);
    CHECK(check_invariance(me, rng));
    CHECK(check_monotone(me, rng));

    // a labeled-edge predicate is not isomorphism-invariant
    GraphPropertySpec bad;
    bad.n = 4;
    bad.predicate = [](const hgraph::SmallGraph& g) { return g.edge(0, 1); };
    CHECK_FALSE(check_invariance(bad, rng));
}

TEST_CASE("iso classes of small graphs") {
    CHECK(graph_iso_classes(3).count() == 4);
    CHECK(graph_iso_classes(4).count() == 11);
    CHECK(graph_iso_classes(5).count() == 34);
}

TEST_CASE("monotone property enumeration matches brute force") {
    // n = 3: a chain of 4 classes gives 5 downward-closed sets
    std::vector<u64> sets3;
    CHECK(enumerate_monotone_properties(3, 1'000,
                                        [&](u64 cs) { sets3.push_back(cs); }));
    CHECK(sets3.size() == 5);

    // independent oracle at n = 4: scan all subsets of the class poset
    auto cls = graph_iso_classes(4);
    u64 expect = 0;
    for (u64 s = 0; s < (u64(1) << cls.count()); ++s) {
        bool closed = true;
        for (u32 c = 0; c < cls.count() && closed; ++c)
            if ((s >> c) & 1)
                closed = (cls.below[c] & ~s) == 0;
        if (closed) ++expect;
    }
    std::vector<u64> sets4;
    CHECK(enumerate_monotone_properties(4, 1'000'000,
                                        [&](u64 cs) { sets4.push_back(cs); }));
    CHECK(sets4.size() == expect);
    CHECK(expect == 24);
    // each emitted set is distinct and downward closed; both trivial
    // properties are present
    std::sort(sets4.begin(), sets4.end());
    CHECK(std::adjacent_find(sets4.begin(), sets4.end()) == sets4.end());
    CHECK(sets4.front() == 0);
    CHECK(sets4.back() == (u64(1) << cls.count()) - 1);

    // the budget path reports incompleteness
    u64 seen = 0;
    CHECK_FALSE(enumerate_monotone_properties(4, 5, [&](u64) { ++seen; }));
    CHECK(seen == 5);
}

TEST_CASE("functions from class sets respect isomorphism invariance") {
    auto cls = graph_iso_classes(4);
    Rng rng(8);
    std::vector<u64> sets;
    enumerate_monotone_properties(4, 1'000, [&](u64 cs) { sets.push_back(cs); });
    for (u64 cs : sets) {
        auto f = function_from_class_set(cls, cs);
        // masks in the same class agree
        for (int t = 0; t < 40; ++t) {
            u32 m = static_cast<u32>(rng.below(64));
            CHECK(f.eval(m) == ((cs >> cls.class_of_mask[m]) & 1));
        }
    }
}

TEST_CASE("tail-restricted forbidden-subgraph function") {
    auto H = hgraph::complete_graph(3);

    // k' = 0: the plain forbidden-subgraph indicator on all slots
    auto b0 = restricted_function_bnh(7, 0, H);
    auto full = property_to_function(named_property("triangle-free", 7));
    CHECK(b0 == full);

    // n = 7, k' = 1: the tail vertex has no constrained slots
    auto b1 = restricted_function_bnh(7, 1, H);
    CHECK(b1.n_vars() == 21);
    CHECK(b1 == full);

    // k' = n: no variables left; the empty graph is H-free
    auto bn = restricted_function_bnh(5, 5, H);
    CHECK(bn.n_vars() == 0);
    CHECK(bn.eval(0));

    // a case with a real tail: n=6, k'=3 drops C(3,2)=3 slots
    auto b63 = restricted_function_bnh(6, 3, H);
    CHECK(b63.n_vars() == 12);
    // oracle: direct scan over the 2^12 assignments
    const u32 tail_start = 3;
    u64 idx = 0;
    std::vector<std::pair<u32, u32>> slots;
    for (u32 i = 0; i < 6; ++i)
        for (u32 j = i + 1; j < 6; ++j, ++idx)
            if (!(i >= tail_start && j >= tail_start)) slots.push_back({i, j});
    REQUIRE(slots.size() == 12);
    for (u32 m = 0; m < (1u << 12); ++m) {
        hgraph::SmallGraph g(6);
        for (u32 v = 0; v < 12; ++v)
            if ((m >> v) & 1) g.add_edge(slots[v].first, slots[v].second);
        CHECK(b63.eval(m) == !hgraph::has_subgraph(g, H).has_value());
    }

    CHECK_THROWS_AS(restricted_function_bnh(8, 0, H), TooLargeError);
}

TEST_CASE("boolean function JSON round trip") {
    auto f = property_to_function(named_property("triangle-free", 4));
    auto back = BooleanFunction::from_json(f.to_json());
    CHECK(back == f);
    CHECK(f.to_json().find("lex_pairs") != std::string::npos);
}

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

#include "evlab/errors.hpp"
#include "evlab/ffield.hpp"
#include "evlab/perm.hpp"
#include "evlab/util.hpp"

using namespace evlab;
using namespace evlab::perm;

TEST_CASE("permutation basics") {
    auto a = Permutation::from_cycles(4, {{0, 1, 2}});
    CHECK(a(0) == 1);
    CHECK(a(3) == 3);
    CHECK((a * a.inverse()).is_identity());
    // left-to-right composition: (a*b)(x) = b(a(x))
    auto b = Permutation::from_cycles(4, {{2, 3}});
    CHECK((a * b)(1) == 3);
    CHECK((b * a)(1) == 2);
    CHECK_THROWS_AS(Permutation({0, 0, 1}), Error);
}

TEST_CASE("orbits") {
    PermGroup g;
    g.n = 4;
    g.generators.push_back(Permutation::from_cycles(4, {{0, 1, 2}}));
    CHECK(orbit(g, 0) == std::vector<u32>{0, 1, 2});
    CHECK(orbit(g, 3) == std::vector<u32>{3});

    auto triv = trivial_group(4);
    CHECK(orbit(triv, 3) == std::vector<u32>{3});

    auto agl5 = gamma_qd(5, 4);
    CHECK(orbit(agl5, 2) == std::vector<u32>{0, 1, 2, 3, 4});
}

TEST_CASE("u-orbitals of Gamma(7,2)") {
    auto g = gamma_qd(7, 2);
    auto rep = u_orbitals(g);
    REQUIRE(rep.orbitals.size() == 3);
    for (const auto& o : rep.orbitals) CHECK(o.size == 7);
    CHECK(rep.m_star == 7);
}

TEST_CASE("u-orbitals of the symmetric and trivial groups") {
    auto s6 = symmetric_group(6);
    auto rep = u_orbitals(s6);
    REQUIRE(rep.orbitals.size() == 1);
    CHECK(rep.orbitals[0].size == 15);

    auto t4 = trivial_group(4);
    auto rep4 = u_orbitals(t4);
    CHECK(rep4.orbitals.size() == 6);
    CHECK(rep4.m_star == 1);
}

TEST_CASE("generators map each orbital onto itself") {
    for (const auto& g :
         {gamma_qd(13, 4), gamma0(3, 1, cyclic_group(2)), lambda1(3, 1, 4),
          lambda_neareva(5, 2, 3), gamma_pqr(3, 2, 7, 3, {2})}) {
        auto rep = u_orbitals(g);
        for (u64 pi = 0; pi < rep.pair_orbital.size(); ++pi) {
            auto [i, j] = pair_unindex(g.n, pi);
            for (const auto& gen : g.generators) {
                u32 a = gen(i), b = gen(j);
                if (a > b) std::swap(a, b);
                CHECK(rep.pair_orbital[pair_index(g.n, a, b)] ==
                      rep.pair_orbital[pi]);
            }
        }
    }
}

TEST_CASE("element enumeration and orders") {
    CHECK(group_order(symmetric_group(4)) == 24);
    CHECK(group_order(cyclic_group(12)) == 12);
    CHECK(group_order(trivial_group(5)) == 1);
    CHECK(group_order(gamma_qd(7, 6)) == 42);
    CHECK(group_order(gamma_qd(7, 1)) == 7);
    CHECK(group_order(gamma_qd(17, 8)) == 136);
}

TEST_CASE("semidirect product realizes AGL(1,5)") {
    // gamma: translations of F_5; delta: scalings by the full F_5^*
    ffield::Field F = ffield::Field::make(5, 1);
    PermGroup gamma, delta;
    gamma.n = delta.n = 5;
    {
        std::vector<u32> img(5);
        for (u64 x = 0; x < 5; ++x) img[x] = u32(F.add(x, 1));
        gamma.generators.emplace_back(std::move(img));
    }
    {
        std::vector<u32> img(5);
        for (u64 x = 0; x < 5; ++x) img[x] = u32(F.mul(2, x));  // 2 generates
        delta.generators.emplace_back(std::move(img));
    }
    auto theta = semidirect(gamma, delta);
    CHECK(group_order(theta) == 20);

    // the product identities: gamma normal, trivial intersection
    auto eg = *enumerate_elements(gamma, 1000);
    auto ed = *enumerate_elements(delta, 1000);
    auto et = *enumerate_elements(theta, 1000);
    std::unordered_set<Permutation, PermHash> gset(eg.begin(), eg.end());
    for (const auto& t : et)
        for (const auto& g : eg) CHECK(gset.count(t.inverse() * g * t));
    int common = 0;
    for (const auto& d : ed)
        if (gset.count(d)) ++common;
    CHECK(common == 1);  // identity only
    CHECK(et.size() == eg.size() * ed.size());

    // the defining multiplication law, with conjugation as the twist
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto& g1 = eg[rng.below(eg.size())];
        const auto& g2 = eg[rng.below(eg.size())];
        const auto& d1 = ed[rng.below(ed.size())];
        const auto& d2 = ed[rng.below(ed.size())];
        auto lhs = (d1 * g1) * (d2 * g2);
        auto rhs = (d1 * d2) * ((d2.inverse() * g1 * d2) * g2);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("semidirect with the trivial group is the identity case") {
    auto g = gamma_qd(7, 3);
    auto t = semidirect(g, trivial_group(7));
    CHECK(group_order(t) == 21);
}

TEST_CASE("semidirect rejects a non-action") {
    PermGroup gamma, delta;
    gamma.n = delta.n = 3;
    gamma.generators.push_back(Permutation::from_cycles(3, {{0, 1}}));
    delta.generators.push_back(Permutation::from_cycles(3, {{1, 2}}));
    CHECK_THROWS_AS(semidirect(gamma, delta), NotAnActionError);
}

TEST_CASE("Gamma(7,3) consists of the 21 affine maps with cubic-residue slope") {
    auto g = gamma_qd(7, 3);
    auto elems = *enumerate_elements(g, 1000);
    REQUIRE(elems.size() == 21);
    // oracle: all x -> ax + b with a in {1,2,4}
    std::set<std::vector<u32>> expect;
    for (u64 a : {1ull, 2ull, 4ull}) {
        for (u64 b = 0; b < 7; ++b) {
            std::vector<u32> img(7);
            for (u64 x = 0; x < 7; ++x) img[x] = u32((a * x + b) % 7);
            expect.insert(img);
        }
    }
    std::set<std::vector<u32>> got;
    for (const auto& e : elems) got.insert(e.image());
    CHECK(got == expect);
}

TEST_CASE("gamma0 small instances") {
    // k = 1 degenerate: AGL(1,3) on 3 points
    auto g1 = gamma0(3, 1, trivial_group(1));
    CHECK(group_order(g1) == 6);
    CHECK(g1.n == 3);

    // p=3, Delta = Z_2: order 3^2 * 2 * 2 = 36 on 6 points
    auto g2 = gamma0(3, 1, cyclic_group(2));
    CHECK(g2.n == 6);
    CHECK(group_order(g2) == 36);

    // block-major layout: clusters are [0,q), [q,2q), ...
    REQUIRE(g2.clusters.has_value());
    CHECK((*g2.clusters) == std::vector<u32>{0, 0, 0, 1, 1, 1});
}

TEST_CASE("gamma0 exact orbital minima at p=5, trivial Delta on [2]") {
    auto g = gamma0(5, 1, trivial_group(2));
    auto rep = u_orbitals(g);
    REQUIRE(rep.m_intra.has_value());
    REQUIRE(rep.m_inter.has_value());
    CHECK(*rep.m_intra == 10);  // C(5,2) * m'_k = 10 * 1, met with equality
    CHECK(*rep.m_inter == 25);  // 5^2 * m''_k = 25 * 1
    CHECK(*rep.m_k_prime == 1);
    CHECK(*rep.m_k_dblprime == 1);
}

TEST_CASE("vinogradov delta actions") {
    auto d1 = delta_k_vinogradov(10, {5, 5});
    CHECK(d1.generators.size() == 1);  // one diagonal Z_5
    CHECK(group_order(d1) == 5);
    for (const auto& orb : orbits(d1)) CHECK(orb.size() == 5);

    auto d2 = delta_k_vinogradov(12, {5, 7});
    CHECK(group_order(d2) == 35);
    auto os = orbits(d2);
    REQUIRE(os.size() == 2);
    CHECK(os[0].size() == 5);
    CHECK(os[1].size() == 7);

    auto d3 = delta_k_vinogradov(21, {7, 7, 7});
    auto rep = u_orbitals(d3);
    CHECK(rep.m_star >= 7);

    CHECK_THROWS_AS(delta_k_vinogradov(10, {4, 6}), BadPartitionError);
    CHECK_THROWS_AS(delta_k_vinogradov(10, {3, 5}), BadPartitionError);
}

TEST_CASE("gamma_pqr on 13 points") {
    auto g = gamma_pqr(3, 2, 7, 3, {2});
    CHECK(g.n == 13);
    CHECK(group_order(g) == 756);  // (9 * 2 * 2) * 21
    auto rep = u_orbitals(g);
    CHECK(rep.m_star == 6);
    // orbital size census: {6, 9, 21, 42}
    std::multiset<u64> sizes;
    for (const auto& o : rep.orbitals) sizes.insert(o.size);
    CHECK(sizes == std::multiset<u64>{6, 9, 21, 42});
    CHECK_THROWS_AS(gamma_pqr(3, 2, 7, 1, {2}), NonPrimeError);
}

TEST_CASE("lambda1 block actions") {
    // p=3, t=0, k=2: two 3-blocks, multiplicative part acts through its
    // order-2 image in F_3^*
    auto g = lambda1(3, 0, 2);
    CHECK(g.n == 6);
    CHECK(group_order(g) == 18);  // 3^2 * 2

    // p=3, t=1, k=3: one 9-block, no 3-blocks
    auto g2 = lambda1(3, 1, 3);
    CHECK(g2.n == 9);
    CHECK(group_order(g2) == 72);  // 9 * 8

    // intra-block orbitals are cliques of size >= p: every pair within a
    // block lies in one orbital covering the whole block
    auto rep = u_orbitals(g);
    for (const auto& o : rep.orbitals)
        if (o.tag == "intra") CHECK(o.size >= 3);

    // the alternative multiplicative map (norm squared) is also accepted
    auto galt = lambda1(3, 0, 2, 2 * (3 + 1));
    CHECK(group_order(galt) == 9);  // norm^2 is trivial on F_3
    auto repa = u_orbitals(galt);
    for (const auto& o : repa.orbitals)
        if (o.tag == "intra") CHECK(o.size >= 3);

    CHECK_THROWS_AS(lambda1(3, 2, 5), BadShapeError);
    CHECK_THROWS_AS(lambda1(3, 0, 2, 5), BadShapeError);
    CHECK_THROWS_AS(lambda1(4, 0, 2), NonPrimeError);
}

TEST_CASE("lambda_neareva") {
    // the n = 31 instance: 6 blocks of 5 plus a fixed tail point
    auto g = lambda_neareva(5, 6, 1);
    CHECK(g.n == 31);
    CHECK(group_order(g) == 62500);  // 5^6 * 4
    for (u32 x = 0; x < 30; ++x) CHECK(orbit(g, x).size() == 5);
    CHECK(orbit(g, 30).size() == 1);

    // p=3, kT=1, k'=1: AGL(1,3) x trivial
    auto g2 = lambda_neareva(3, 1, 1);
    CHECK(group_order(g2) == 6);

    // flagged when gcd(p-1, k') > 1
    auto g3 = lambda_neareva(5, 1, 2);
    CHECK_FALSE(g3.notes.empty());
    auto g4 = lambda_neareva(5, 1, 3);
    CHECK(g4.notes.empty());

    CHECK_THROWS_AS(lambda_neareva(5, 1, 0), BadShapeError);
}

TEST_CASE("oliver condition by lattice search on Sym(4)") {
    auto cert = oliver_condition(symmetric_group(4));
    REQUIRE(cert.has_value());
    CHECK(cert->order_g == 24);
    CHECK(cert->order_gamma2 == 4);   // the Klein four group
    CHECK(cert->order_gamma1 == 12);  // A_4, quotient Z_3
    CHECK(cert->p == 2);
    CHECK(cert->q == 2);
    std::string why;
    CHECK(verify_oliver_certificate(symmetric_group(4), *cert, &why));
}

TEST_CASE("oliver condition for cyclic groups") {
    auto cert = oliver_condition(cyclic_group(6));
    REQUIRE(cert.has_value());
    std::string why;
    CHECK(verify_oliver_certificate(cyclic_group(6), *cert, &why));
}

TEST_CASE("oliver condition from construction hints") {
    for (const auto& g : {gamma_qd(7, 6), gamma_qd(17, 8), lambda1(3, 1, 3),
                          lambda_neareva(5, 6, 1), gamma0(2, 2, cyclic_group(2))}) {
        auto cert = oliver_condition(g);
        REQUIRE_MESSAGE(cert.has_value(), g.structure_tag);
        std::string why;
        CHECK_MESSAGE(verify_oliver_certificate(g, *cert, &why), why);
    }
}

TEST_CASE("a Lambda1 x Lambda2 product satisfies the 2-on-top chain") {
    // Lambda1 over p=3 with two 3-blocks; Lambda2 = Gamma(5,4): the 2-part
    // of 5-1 is 4, so the top factor is a 2-group
    auto l1 = lambda1(3, 0, 2);
    auto l2 = gamma_qd(5, 4);
    auto prod = direct_product(l1, l2);
    CHECK(group_order(prod) == 18 * 20);

    OliverCertificate cert;
    cert.p = 3;
    cert.q = 2;
    auto lift = [&](const Permutation& g, bool left) {
        std::vector<u32> img(prod.n);
        std::iota(img.begin(), img.end(), 0);
        if (left)
            for (u32 i = 0; i < l1.n; ++i) img[i] = g(i);
        else
            for (u32 i = 0; i < l2.n; ++i) img[l1.n + i] = l1.n + g(i);
        return Permutation(std::move(img));
    };
    // gamma2 = the 3-group of Lambda1 translations
    for (std::size_t i = 0; i < 2; ++i) cert.gens_gamma2.push_back(lift(l1.generators[i], true));
    // gamma1 adds the cyclic parts: Lambda1's multiplicative factor and F_5^+
    cert.gens_gamma1 = cert.gens_gamma2;
    cert.gens_gamma1.push_back(lift(l1.generators[2], true));
    cert.gens_gamma1.push_back(lift(l2.generators[0], false));
    cert.order_gamma2 = 9;
    cert.order_gamma1 = 9 * 2 * 5;
    cert.order_g = 360;
    std::string why;
    CHECK_MESSAGE(verify_oliver_certificate(prod, cert, &why), why);
}

TEST_CASE("oliver certificate verification is sound under corruption") {
    auto g = gamma_qd(7, 6);
    auto cert = *oliver_condition(g);
    std::string why;
    REQUIRE(verify_oliver_certificate(g, cert, &why));

    auto c1 = cert;
    c1.p = 3;  // wrong prime for the translation part
    CHECK_FALSE(verify_oliver_certificate(g, c1, &why));

    auto c2 = cert;
    c2.order_gamma1 = c2.order_gamma1 * 2;
    CHECK_FALSE(verify_oliver_certificate(g, c2, &why));

    auto c3 = cert;
    c3.gens_gamma2.push_back(g.generators.back());  // smuggle the full group in
    CHECK_FALSE(verify_oliver_certificate(g, c3, &why));

    auto c4 = cert;
    c4.gens_gamma1 = c4.gens_gamma2;  // quotient no longer a q-group
    c4.order_gamma1 = c4.order_gamma2;
    CHECK_FALSE(verify_oliver_certificate(g, c4, &why));
}

TEST_CASE("order hints always match enumeration on the constructions") {
    for (const auto& g :
         {gamma_qd(9, 4), gamma_qd(8, 7), gamma0(2, 1, symmetric_group(3)),
          lambda1(5, 0, 2), lambda_neareva(3, 2, 2), gamma_pqr(3, 2, 7, 3, {2}),
          delta_k_vinogradov(12, {5, 7})}) {
        REQUIRE(g.order_hint.has_value());
        // group_order throws if the hint disagrees with enumeration
        CHECK(group_order(g) == *g.order_hint);
    }
}

TEST_CASE("pair action indexes match the shared lexicographic order") {
    auto g = Permutation::from_cycles(4, {{0, 1, 2, 3}});
    auto pa = pair_action(g);
    CHECK(pa.n() == 6);
    // pair {0,1} -> {1,2}
    CHECK(pa(u32(pair_index(4, 0, 1))) == u32(pair_index(4, 1, 2)));
    // pair {0,3} -> {1,0} = {0,1}
    CHECK(pa(u32(pair_index(4, 0, 3))) == u32(pair_index(4, 0, 1)));
}

TEST_CASE("group JSON round trip") {
    auto g = gamma_qd(7, 2);
    auto back = PermGroup::from_json(g.to_json());
    CHECK(back.n == g.n);
    REQUIRE(back.generators.size() == g.generators.size());
    for (std::size_t i = 0; i < g.generators.size(); ++i)
        CHECK(back.generators[i] == g.generators[i]);
    CHECK(back.order_hint == g.order_hint);
}

TEST_CASE("orbital report serialization") {
    auto rep = u_orbitals(gamma_qd(7, 2));
    auto js = rep.to_json();
    CHECK(js.find("\"m_star\":7") != std::string::npos);
    auto tsv = rep.to_tsv();
    CHECK(tsv.find("rep_i\trep_j\tsize\ttag") == 0);
}

#include <doctest.h>

#include <algorithm>

#include "evlab/errors.hpp"
#include "evlab/ffield.hpp"
#include "evlab/util.hpp"

using namespace evlab;
using namespace evlab::ffield;

TEST_CASE("prime field construction") {
    auto f = Field::make(7, 1);
    CHECK(f.q() == 7);
    CHECK(f.modulus().empty());
    CHECK(f.inv(3) == 5);  // 3 * 5 = 15 == 1 mod 7
    CHECK(f.add(5, 4) == 2);
    CHECK(f.neg(0) == 0);
    CHECK_THROWS_AS(Field::make(6, 1), NonPrimeError);
    CHECK_THROWS_AS(Field::make(3, 41), OverflowError);
    CHECK_THROWS_AS(f.inv(0), DivisionByZeroError);
}

TEST_CASE("F4 has the unique modulus x^2 + x + 1") {
    auto f = Field::make(2, 2);
    CHECK(f.modulus() == std::vector<u32>{1, 1, 1});
    // x * x = x + 1 under that modulus: code(x) = 2, code(x+1) = 3
    CHECK(f.mul(2, 2) == 3);
}

TEST_CASE("F25 modulus is the lexicographically least irreducible") {
    // oracle: a monic quadratic over F_5 is irreducible iff it has no root;
    // scan (c0, c1) in lexicographic order
    std::vector<u32> expect;
    for (u32 c0 = 0; c0 < 5 && expect.empty(); ++c0) {
        for (u32 c1 = 0; c1 < 5 && expect.empty(); ++c1) {
            bool root = false;
            for (u32 x = 0; x < 5; ++x)
                if ((x * x + c1 * x + c0) % 5 == 0) root = true;
            if (!root) expect = {c0, c1, 1};
        }
    }
    auto f = Field::make(5, 2);
    CHECK(f.modulus() == expect);
    CHECK(expect == std::vector<u32>{1, 1, 1});
}

TEST_CASE("multiplicative orders in F25") {
    auto f = Field::make(5, 2);
    for (u64 g : {1ull, 2ull, 5ull, 7ull, 13ull, 24ull}) CHECK(f.pow(g, 24) == 1);
}

TEST_CASE("field axioms on random samples") {
    for (auto [p, a] : std::vector<std::pair<u64, u64>>{
             {7, 1}, {2, 3}, {3, 2}, {5, 2}, {7, 2}, {13, 1}}) {
        auto f = Field::make(p, a);
        Rng rng(42 + p * 10 + a);
        for (int i = 0; i < 200; ++i) {
            u64 x = rng.below(f.q()), y = rng.below(f.q()), z = rng.below(f.q());
            CHECK(f.add(x, y) == f.add(y, x));
            CHECK(f.mul(x, y) == f.mul(y, x));
            CHECK(f.add(f.add(x, y), z) == f.add(x, f.add(y, z)));
            CHECK(f.mul(f.mul(x, y), z) == f.mul(x, f.mul(y, z)));
            CHECK(f.mul(x, f.add(y, z)) == f.add(f.mul(x, y), f.mul(x, z)));
            CHECK(f.sub(f.add(x, y), y) == x);
            if (x != 0) CHECK(f.mul(x, f.inv(x)) == 1);
        }
    }
}

TEST_CASE("coefficient codec round-trips") {
    auto f = Field::make(3, 3);
    for (u64 x = 0; x < f.q(); ++x) CHECK(f.from_coeffs(f.coeffs(x)) == x);
    CHECK(f.coeffs(5) == std::vector<u32>{2, 1, 0});
}

TEST_CASE("multiplicative subgroups") {
    auto f7 = Field::make(7, 1);
    CHECK(f7.multiplicative_subgroup(2) == std::vector<u64>{1, 6});
    CHECK(f7.multiplicative_subgroup(6) == std::vector<u64>{1, 2, 3, 4, 5, 6});
    CHECK_THROWS_AS(f7.multiplicative_subgroup(4), NotDivisorError);

    // the 8 quadratic residues mod 17, derived by squaring
    auto f17 = Field::make(17, 1);
    std::vector<u64> squares;
    for (u64 x = 1; x < 17; ++x) squares.push_back(x * x % 17);
    std::sort(squares.begin(), squares.end());
    squares.erase(std::unique(squares.begin(), squares.end()), squares.end());
    CHECK(f17.multiplicative_subgroup(8) == squares);
    CHECK(squares == std::vector<u64>{1, 2, 4, 8, 9, 13, 15, 16});
}

TEST_CASE("subgroup members satisfy y^d = 1, and sizes match") {
    for (auto [p, a] : std::vector<std::pair<u64, u64>>{{13, 1}, {3, 2}, {5, 2}}) {
        auto f = Field::make(p, a);
        const u64 qm1 = f.q() - 1;
        for (u64 d = 1; d <= qm1; ++d) {
            if (qm1 % d != 0) continue;
            auto sub = f.multiplicative_subgroup(d);
            CHECK(sub.size() == d);
            for (u64 y : sub) CHECK(f.pow(y, d) == 1);
        }
    }
}

TEST_CASE("frobenius is an automorphism fixing exactly the prime subfield") {
    for (auto [p, a] : std::vector<std::pair<u64, u64>>{
             {2, 2}, {2, 4}, {3, 2}, {3, 3}, {5, 2}, {7, 2}, {2, 8}}) {
        auto f = Field::make(p, a);
        Rng rng(7 * p + a);
        for (int i = 0; i < 100; ++i) {
            u64 x = rng.below(f.q()), y = rng.below(f.q());
            CHECK(f.frobenius(f.add(x, y)) ==
                  f.add(f.frobenius(x), f.frobenius(y)));
            CHECK(f.frobenius(f.mul(x, y)) ==
                  f.mul(f.frobenius(x), f.frobenius(y)));
        }
        for (u64 x = 0; x < f.q(); ++x) CHECK((f.frobenius(x) == x) == (x < p));
    }
}

TEST_CASE("checked element layer") {
    auto f7 = Field::make(7, 1);
    auto f5 = Field::make(5, 1);
    auto a = elem(f7, 3), b = elem(f7, 6);
    CHECK((a * b).code == 4);
    CHECK((a + b).code == 2);
    CHECK(inv(a).code == 5);
    CHECK(pow(a, 6).code == 1);
    auto c = elem(f5, 2);
    CHECK_THROWS_AS((void)(a + c), FieldMismatchError);
    CHECK_THROWS_AS((void)(a * c), FieldMismatchError);
}

TEST_CASE("field JSON round trip") {
    auto f = Field::make(5, 2);
    auto back = Field::from_json(f.to_json());
    CHECK(back.same_spec(f));
    auto f7 = Field::make(7, 1);
    CHECK(f7.to_json().find("modulus") == std::string::npos);
    CHECK(Field::from_json("{\"p\":7,\"alpha\":1}").same_spec(f7));
}

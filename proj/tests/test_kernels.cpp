#include <doctest.h>

#include <bit>
#include <string>

#include "evlab/kernels/mask_scan.hpp"
#include "evlab/util.hpp"

using namespace evlab;
using namespace evlab::kernels;

namespace {

// bit-by-bit reference, no word tricks at all
std::vector<u64> naive_avoid(const std::vector<u32>& pats, int n) {
    const u64 total = u64(1) << n;
    std::vector<u64> out((total + 63) / 64, 0);
    for (u64 m = 0; m < total; ++m) {
        bool avoid = true;
        for (u32 p : pats)
            if ((m & p) == p) avoid = false;
        if (avoid) out[m >> 6] |= u64(1) << (m & 63);
    }
    return out;
}

ParityCount naive_parity(const std::vector<u64>& table, int n) {
    ParityCount pc;
    const u64 total = u64(1) << n;
    for (u64 m = 0; m < total; ++m) {
        if (!((table[m >> 6] >> (m & 63)) & 1)) continue;
        if (std::popcount(m) & 1)
            ++pc.odd;
        else
            ++pc.even;
    }
    return pc;
}

std::vector<u32> random_patterns(Rng& rng, int n, int count) {
    std::vector<u32> pats;
    for (int i = 0; i < count; ++i)
        pats.push_back(static_cast<u32>(rng.below(u64(1) << n)));
    return pats;
}

}  // namespace

TEST_CASE("scalar backend matches the naive reference") {
    force_backend("scalar");
    Rng rng(99);
    for (int n : {0, 1, 3, 6, 7, 10, 14}) {
        for (int trial = 0; trial < 8; ++trial) {
            auto pats = random_patterns(rng, n, 1 + int(rng.below(20)));
            std::vector<u64> table;
            fill_avoiding_table(pats, n, table);
            CHECK(table == naive_avoid(pats, n));
            auto pc = parity_count(table, n);
            auto ref = naive_parity(table, n);
            CHECK(pc.even == ref.even);
            CHECK(pc.odd == ref.odd);
        }
    }
}

TEST_CASE("avx2 backend matches scalar bit for bit") {
    bool have_avx2 = true;
    try {
        force_backend("avx2");
    } catch (const Error&) {
        have_avx2 = false;  // not available on this machine
    }
    if (!have_avx2) {
        force_backend("scalar");
        return;
    }
    Rng rng(12345);
    for (int n : {1, 5, 6, 8, 12, 16, 18}) {
        for (int trial = 0; trial < 6; ++trial) {
            auto pats = random_patterns(rng, n, 1 + int(rng.below(40)));
            std::vector<u64> avx_table, scalar_table;
            force_backend("avx2");
            fill_avoiding_table(pats, n, avx_table);
            auto avx_pc = parity_count(avx_table, n);
            force_backend("scalar");
            fill_avoiding_table(pats, n, scalar_table);
            auto sc_pc = parity_count(scalar_table, n);
            CHECK(avx_table == scalar_table);
            CHECK(avx_pc.even == sc_pc.even);
            CHECK(avx_pc.odd == sc_pc.odd);
        }
    }
    force_backend("scalar");
}

TEST_CASE("empty pattern list accepts every mask") {
    std::vector<u64> table;
    fill_avoiding_table({}, 10, table);
    auto pc = parity_count(table, 10);
    CHECK(pc.even + pc.odd == 1024);
    CHECK(pc.even == 512);
    CHECK(pc.odd == 512);
}

TEST_CASE("the zero pattern rejects every mask") {
    std::vector<u64> table;
    fill_avoiding_table({0}, 8, table);
    auto pc = parity_count(table, 8);
    CHECK(pc.even + pc.odd == 0);
}

TEST_CASE("single-bit sanity for the parity split") {
    // mask 0b0110 has even popcount; 0b0100 odd
    std::vector<u64> table(1, 0);
    table[0] |= u64(1) << 6;  // popcount(6) = 2
    table[0] |= u64(1) << 4;  // popcount(4) = 1
    auto pc = parity_count(table, 6);
    CHECK(pc.even == 1);
    CHECK(pc.odd == 1);
}

TEST_CASE("active backend is reported") {
    std::string name = active_backend();
    CHECK((name == "scalar" || name == "avx2"));
}

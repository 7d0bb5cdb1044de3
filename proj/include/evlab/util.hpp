#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "evlab/errors.hpp"

namespace evlab {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// ---------------------------------------------------------------------------
// Deterministic RNG.  std::uniform_int_distribution is implementation-defined,
// so bounded draws are done by rejection on the raw mt19937_64 stream; output
// is identical on every platform for a given seed.
class Rng {
  public:
    explicit Rng(u64 seed) : eng_(seed) {}

    u64 next() { return eng_(); }

    // uniform in [0, n), n >= 1
    u64 below(u64 n) {
        if (n == 0) throw Error("Rng::below(0)");
        if ((n & (n - 1)) == 0) return eng_() & (n - 1);
        const u64 limit = n * (UINT64_MAX / n);
        u64 x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    u64 in_range(u64 lo, u64 hi) {  // inclusive bounds
        return lo + below(hi - lo + 1);
    }

    bool coin() { return (eng_() & 1) != 0; }

  private:
    std::mt19937_64 eng_;
};

// ---------------------------------------------------------------------------
// Dynamic bitset over an arbitrary ground-set size (used for face masks of
// oracle-backed complexes, where the ground set can exceed 64 slots).
class DynBitset {
  public:
    DynBitset() : n_(0) {}
    explicit DynBitset(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }

    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(std::size_t i) { w_[i >> 6] |= u64(1) << (i & 63); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(u64(1) << (i & 63)); }
    void clear() { std::fill(w_.begin(), w_.end(), 0); }

    std::size_t count() const {
        std::size_t c = 0;
        for (u64 w : w_) c += std::popcount(w);
        return c;
    }
    bool any() const {
        for (u64 w : w_)
            if (w) return true;
        return false;
    }

    void or_with(const DynBitset& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    }

    bool is_subset_of(const DynBitset& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    friend bool operator==(const DynBitset& a, const DynBitset& b) {
        return a.n_ == b.n_ && a.w_ == b.w_;
    }

    const std::vector<u64>& words() const { return w_; }

  private:
    std::size_t n_;
    std::vector<u64> w_;
};

// ---------------------------------------------------------------------------
// Unordered-pair indexing.  Pairs {i, j} with i < j over [n] are numbered in
// lexicographic order: (0,1), (0,2), ..., (0,n-1), (1,2), ...  This is the
// fixed variable order for graph-property truth tables as well, so orbital
// indices and Boolean-function variables agree across modules.
inline u64 pair_count(u64 n) { return n * (n - 1) / 2; }

inline u64 pair_index(u64 n, u64 i, u64 j) {
    // requires i < j < n
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

inline std::pair<u32, u32> pair_unindex(u64 n, u64 idx) {
    u64 i = 0;
    u64 row = n - 1;
    while (idx >= row) {
        idx -= row;
        --row;
        ++i;
    }
    return {static_cast<u32>(i), static_cast<u32>(i + 1 + idx)};
}

// ---------------------------------------------------------------------------
// Saturating / checked integer arithmetic for exact threshold comparisons.

// a * b, or nullopt on 64-bit overflow.
inline std::optional<u64> checked_mul(u64 a, u64 b) {
    u128 p = u128(a) * b;
    if (p > UINT64_MAX) return std::nullopt;
    return static_cast<u64>(p);
}

// Exact test  base^exp <= bound  without overflow (bound < 2^64).
inline bool pow_leq(u64 base, u64 exp, u64 bound) {
    if (exp == 0) return 1 <= bound;
    if (base <= 1) return base <= bound;
    u64 acc = 1;
    for (u64 i = 0; i < exp; ++i) {
        if (acc > bound / base) return false;
        acc *= base;
    }
    return acc <= bound;
}

// Exact integer power with overflow error (used where the result must fit).
inline u64 checked_pow(u64 base, u64 exp) {
    u64 acc = 1;
    for (u64 i = 0; i < exp; ++i) {
        auto m = checked_mul(acc, base);
        if (!m) throw OverflowError("integer power exceeds 64 bits");
        acc = *m;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Hex encoding of bit tables (bit i of the table = bit (i & 7) of byte i/8).
std::string hex_encode_bits(const std::vector<u64>& words, u64 nbits);
std::vector<u64> hex_decode_bits(const std::string& hex, u64 nbits);

}  // namespace evlab

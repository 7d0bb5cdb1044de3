#pragma once

// Plain exponential decision-tree recursion with no memoization and no
// pruning: the independent oracle the solver is checked against.

#include "evlab/boolfun.hpp"

namespace test_support {

using evlab::u32;

inline bool naive_constant(const evlab::boolfun::BooleanFunction& f, u32 queried,
                           u32 assign, bool* value) {
    const u32 free = ~queried & ((u32(1) << f.n_vars()) - 1);
    bool first = f.eval(assign);
    u32 s = free;
    for (;;) {
        if (f.eval(assign | s) != first) return false;
        if (s == 0) break;
        s = (s - 1) & free;
    }
    *value = first;
    return true;
}

inline u32 dtc_naive_rec(const evlab::boolfun::BooleanFunction& f, u32 queried,
                         u32 assign) {
    bool value;
    if (naive_constant(f, queried, assign, &value)) return 0;
    u32 best = f.n_vars();
    for (u32 i = 0; i < f.n_vars(); ++i) {
        if ((queried >> i) & 1) continue;
        const u32 bit = u32(1) << i;
        u32 d0 = dtc_naive_rec(f, queried | bit, assign);
        u32 d1 = dtc_naive_rec(f, queried | bit, assign | bit);
        best = std::min(best, 1 + std::max(d0, d1));
    }
    return best;
}

inline u32 dtc_naive(const evlab::boolfun::BooleanFunction& f) {
    return dtc_naive_rec(f, 0, 0);
}

}  // namespace test_support

#pragma once

#include <string>
#include <vector>

#include "evlab/util.hpp"

namespace evlab::kernels {

// Bit-table kernels over the 2^n subset masks of an n-element ground set
// (n <= 24).  Bit m of a table corresponds to the subset with mask m.
// These are the arithmetic inner loops behind hom-free graph scans and
// Euler-characteristic sums; each has a scalar reference implementation and
// an AVX2 variant selected once at startup (override with EVLAB_SIMD=scalar
// or force_backend()).  The variants are equivalence-tested bit for bit.

struct ParityCount {
    u64 even = 0;  // set bits at masks with even popcount
    u64 odd = 0;   // set bits at masks with odd popcount
};

// out bit m = 1  iff  no pattern is a submask of m.
void fill_avoiding_table(const std::vector<u32>& patterns, int n_bits,
                         std::vector<u64>& out);

// Counts set bits of the table, split by popcount parity of the bit index.
ParityCount parity_count(const std::vector<u64>& table, int n_bits);

const char* active_backend();
// Test hook: "scalar" or "avx2"; throws if the backend is unavailable.
void force_backend(const std::string& name);

}  // namespace evlab::kernels

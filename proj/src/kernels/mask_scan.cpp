#include "evlab/kernels/mask_scan.hpp"

#include <bit>
#include <cstdlib>

#include "evlab/errors.hpp"

namespace evlab::kernels {

namespace detail {

constexpr u64 thue_morse64() {
    u64 v = 0;
    for (unsigned j = 0; j < 64; ++j)
        if (std::popcount(j) & 1) v |= u64(1) << j;
    return v;
}
constexpr u64 kThueMorse = thue_morse64();

void fill_scalar(const u32* pats, std::size_t np, int n_bits, u64* out) {
    const u64 total = u64(1) << n_bits;
    const u64 nwords = (total + 63) / 64;
    for (u64 w = 0; w < nwords; ++w) {
        const u64 base = w << 6;
        u64 word = 0;
        const int jmax = static_cast<int>(std::min<u64>(64, total - base));
        for (int j = 0; j < jmax; ++j) {
            const u32 m = static_cast<u32>(base + j);
            bool avoid = true;
            for (std::size_t k = 0; k < np; ++k) {
                if ((m & pats[k]) == pats[k]) {
                    avoid = false;
                    break;
                }
            }
            word |= u64(avoid) << j;
        }
        out[w] = word;
    }
}

ParityCount parity_scalar(const u64* table, std::size_t nwords) {
    ParityCount pc;
    for (std::size_t w = 0; w < nwords; ++w) {
        const u64 word = table[w];
        if (!word) continue;
        const bool base_odd = std::popcount(u64(w)) & 1;  // parity of high bits
        const u64 odd_mask = base_odd ? ~kThueMorse : kThueMorse;
        const u64 odd = std::popcount(word & odd_mask);
        pc.odd += odd;
        pc.even += std::popcount(word) - odd;
    }
    return pc;
}

#if defined(EVLAB_HAVE_AVX2)
void fill_avx2(const u32* pats, std::size_t np, int n_bits, u64* out);
ParityCount parity_avx2(const u64* table, std::size_t nwords);
#endif

using FillFn = void (*)(const u32*, std::size_t, int, u64*);
using ParityFn = ParityCount (*)(const u64*, std::size_t);

struct Backend {
    const char* name;
    FillFn fill;
    ParityFn parity;
};

Backend g_backend = {"scalar", fill_scalar, parity_scalar};

bool avx2_available() {
#if defined(EVLAB_HAVE_AVX2)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

struct BackendInit {
    BackendInit() {
        const char* env = std::getenv("EVLAB_SIMD");
        if (env && std::string(env) == "scalar") return;
#if defined(EVLAB_HAVE_AVX2)
        if (avx2_available()) g_backend = {"avx2", fill_avx2, parity_avx2};
#endif
    }
};
BackendInit g_init;

}  // namespace detail

void fill_avoiding_table(const std::vector<u32>& patterns, int n_bits,
                         std::vector<u64>& out) {
    if (n_bits < 0 || n_bits > 24) throw TooLargeError("mask table: n_bits > 24");
    const u64 total = u64(1) << n_bits;
    out.assign((total + 63) / 64, 0);
    detail::g_backend.fill(patterns.data(), patterns.size(), n_bits, out.data());
}

ParityCount parity_count(const std::vector<u64>& table, int n_bits) {
    const u64 total = u64(1) << n_bits;
    const u64 nwords = (total + 63) / 64;
    if (table.size() < nwords) throw Error("parity_count: table too small");
    return detail::g_backend.parity(table.data(), nwords);
}

const char* active_backend() { return detail::g_backend.name; }

void force_backend(const std::string& name) {
    if (name == "scalar") {
        detail::g_backend = {"scalar", detail::fill_scalar, detail::parity_scalar};
        return;
    }
#if defined(EVLAB_HAVE_AVX2)
    if (name == "avx2" && detail::avx2_available()) {
        detail::g_backend = {"avx2", detail::fill_avx2, detail::parity_avx2};
        return;
    }
#endif
    throw Error("backend unavailable: " + name);
}

}  // namespace evlab::kernels

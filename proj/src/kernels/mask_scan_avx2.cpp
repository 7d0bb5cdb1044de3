// AVX2 variants of the mask-scan kernels.  Compiled with -mavx2; only
// reached after the runtime cpuid check in mask_scan.cpp.
#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <algorithm>
#include <bit>

#include "evlab/kernels/mask_scan.hpp"

namespace evlab::kernels::detail {

namespace {

constexpr u64 thue_morse64() {
    u64 v = 0;
    for (unsigned j = 0; j < 64; ++j)
        if (std::popcount(j) & 1) v |= u64(1) << j;
    return v;
}
constexpr u64 kThueMorse = thue_morse64();

// per-byte popcount via nibble shuffle
inline __m256i popcount_epi8(__m256i v) {
    const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2,
                                         3, 3, 4, 0, 1, 1, 2, 1, 2, 2, 3, 1, 2,
                                         2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    __m256i lo = _mm256_and_si256(v, low_mask);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    return _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo),
                           _mm256_shuffle_epi8(lut, hi));
}

inline u64 hsum_epu8(__m256i v) {
    __m256i s = _mm256_sad_epu8(v, _mm256_setzero_si256());
    return u64(_mm256_extract_epi64(s, 0)) + u64(_mm256_extract_epi64(s, 1)) +
           u64(_mm256_extract_epi64(s, 2)) + u64(_mm256_extract_epi64(s, 3));
}

}  // namespace

void fill_avx2(const u32* pats, std::size_t np, int n_bits, u64* out) {
    const u64 total = u64(1) << n_bits;
    const u64 nwords = (total + 63) / 64;
    const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
    for (u64 w = 0; w < nwords; ++w) {
        const u64 base = w << 6;
        u64 word = 0;
        const int jmax = static_cast<int>(std::min<u64>(64, total - base));
        for (int j = 0; j + 8 <= jmax; j += 8) {
            __m256i m = _mm256_add_epi32(_mm256_set1_epi32(int(base + j)), lane);
            __m256i hit = _mm256_setzero_si256();
            for (std::size_t k = 0; k < np; ++k) {
                __m256i pv = _mm256_set1_epi32(int(pats[k]));
                __m256i sub = _mm256_cmpeq_epi32(_mm256_and_si256(m, pv), pv);
                hit = _mm256_or_si256(hit, sub);
                if (_mm256_movemask_ps(_mm256_castsi256_ps(hit)) == 0xff) break;
            }
            const unsigned hits =
                unsigned(_mm256_movemask_ps(_mm256_castsi256_ps(hit)));
            word |= u64(~hits & 0xffu) << j;
        }
        // tail (n_bits < 6 only): finish scalar
        for (int j = (jmax / 8) * 8; j < jmax; ++j) {
            const u32 m = static_cast<u32>(base + j);
            bool avoid = true;
            for (std::size_t k = 0; k < np; ++k)
                if ((m & pats[k]) == pats[k]) {
                    avoid = false;
                    break;
                }
            word |= u64(avoid) << j;
        }
        out[w] = word;
    }
}

ParityCount parity_avx2(const u64* table, std::size_t nwords) {
    ParityCount pc;
    const __m256i tm = _mm256_set1_epi64x(i64(kThueMorse));
    std::size_t w = 0;
    for (; w + 4 <= nwords; w += 4) {
        __m256i words = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(table + w));
        // per-word odd-index mask: Thue-Morse, flipped when the word index
        // itself has odd popcount
        alignas(32) u64 flips[4];
        for (int i = 0; i < 4; ++i)
            flips[i] = (std::popcount(u64(w + i)) & 1) ? ~u64(0) : u64(0);
        __m256i flip = _mm256_load_si256(reinterpret_cast<const __m256i*>(flips));
        __m256i odd_mask = _mm256_xor_si256(tm, flip);
        __m256i odd_bits = _mm256_and_si256(words, odd_mask);
        __m256i even_bits = _mm256_andnot_si256(odd_mask, words);
        pc.odd += hsum_epu8(popcount_epi8(odd_bits));
        pc.even += hsum_epu8(popcount_epi8(even_bits));
    }
    for (; w < nwords; ++w) {
        const u64 word = table[w];
        const bool base_odd = std::popcount(u64(w)) & 1;
        const u64 odd_mask = base_odd ? ~kThueMorse : kThueMorse;
        const u64 odd = std::popcount(word & odd_mask);
        pc.odd += odd;
        pc.even += std::popcount(word) - odd;
    }
    return pc;
}

}  // namespace evlab::kernels::detail

#endif  // x86

#include "evlab/util.hpp"

namespace evlab {

std::string hex_encode_bits(const std::vector<u64>& words, u64 nbits) {
    static const char* digits = "0123456789abcdef";
    u64 nbytes = (nbits + 7) / 8;
    std::string out;
    out.reserve(nbytes * 2);
    for (u64 b = 0; b < nbytes; ++b) {
        u64 word = b / 8 < words.size() ? words[b / 8] : 0;
        unsigned byte = (word >> (8 * (b % 8))) & 0xff;
        out.push_back(digits[byte >> 4]);
        out.push_back(digits[byte & 0xf]);
    }
    return out;
}

std::vector<u64> hex_decode_bits(const std::string& hex, u64 nbits) {
    u64 nbytes = (nbits + 7) / 8;
    if (hex.size() != nbytes * 2) throw FormatError("hex bit table: bad length");
    auto nibble = [](char c) -> unsigned {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw FormatError("hex bit table: bad digit");
    };
    std::vector<u64> words((nbits + 63) / 64, 0);
    for (u64 b = 0; b < nbytes; ++b) {
        unsigned byte = (nibble(hex[2 * b]) << 4) | nibble(hex[2 * b + 1]);
        words[b / 8] |= u64(byte) << (8 * (b % 8));
    }
    return words;
}

}  // namespace evlab

#pragma once

#include <string>
#include <vector>

#include "evlab/util.hpp"

namespace evlab::ffield {

// Exact arithmetic in F_q, q = p^alpha.  Elements are canonical codes in
// [0, q): the code of an element with coefficient vector (c_0 .. c_{a-1}) is
// sum c_i p^i, so equal elements always have equal codes.  For alpha > 1 the
// field is F_p[x] / (modulus), where modulus is the lexicographically least
// monic irreducible of degree alpha (c_0 compared first); the deterministic
// choice keeps serialized artifacts reproducible.
class Field {
  public:
    static Field make(u64 p, u64 alpha);

    u64 p() const { return p_; }
    u64 alpha() const { return alpha_; }
    u64 q() const { return q_; }
    // Coefficients c_0..c_alpha of the modulus polynomial (monic); empty for
    // prime fields.
    const std::vector<u32>& modulus() const { return modulus_; }

    u64 add(u64 x, u64 y) const;
    u64 sub(u64 x, u64 y) const;
    u64 neg(u64 x) const;
    u64 mul(u64 x, u64 y) const;
    u64 inv(u64 x) const;  // x != 0
    u64 pow(u64 x, u64 e) const;
    u64 frobenius(u64 x) const { return pow(x, p_); }

    std::vector<u32> coeffs(u64 x) const;             // length alpha
    u64 from_coeffs(const std::vector<u32>& c) const; // entries reduced mod p

    // Smallest generator of the multiplicative group, in code order.
    u64 primitive_root() const;
    // The unique subgroup of F_q^* of order d (d | q-1), sorted by code.
    std::vector<u64> multiplicative_subgroup(u64 d) const;

    bool same_spec(const Field& o) const {
        return p_ == o.p_ && alpha_ == o.alpha_ && modulus_ == o.modulus_;
    }

    std::string to_json() const;
    static Field from_json(const std::string& text);

  private:
    Field() = default;
    u64 p_ = 0, alpha_ = 0, q_ = 0;
    std::vector<u32> modulus_;
};

// Checked element wrapper: operations verify both operands live in the same
// field and raise FieldMismatchError otherwise.
struct FieldElem {
    const Field* field = nullptr;
    u64 code = 0;

    friend bool operator==(const FieldElem&, const FieldElem&) = default;
};

FieldElem elem(const Field& f, u64 code);
FieldElem operator+(FieldElem a, FieldElem b);
FieldElem operator-(FieldElem a, FieldElem b);
FieldElem operator*(FieldElem a, FieldElem b);
FieldElem operator-(FieldElem a);
FieldElem inv(FieldElem a);
FieldElem pow(FieldElem a, u64 e);

}  // namespace evlab::ffield

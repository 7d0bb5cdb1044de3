#include "evlab/ffield.hpp"

#include <json.hpp>

#include <algorithm>

#include "evlab/errors.hpp"
#include "evlab/numth.hpp"

namespace evlab::ffield {

using nlohmann::json;

namespace {

using Poly = std::vector<u32>;  // coefficients, low degree first

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& mod, u64 p) {
    std::vector<u64> acc(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            acc[i + j] = (acc[i + j] + u64(a[i]) * b[j]) % p;
    }
    // reduce by the monic modulus
    const std::size_t deg = mod.size() - 1;
    for (std::size_t i = acc.size(); i-- > deg;) {
        u64 c = acc[i] % p;
        if (!c) continue;
        acc[i] = 0;
        for (std::size_t j = 0; j < deg; ++j)
            acc[i - deg + j] = (acc[i - deg + j] + (p - c % p) * mod[j]) % p;
    }
    Poly out(deg);
    for (std::size_t i = 0; i < deg && i < acc.size(); ++i)
        out[i] = static_cast<u32>(acc[i] % p);
    return out;
}

Poly poly_powmod_x(u64 e_p, u64 e_exp, const Poly& mod, u64 p) {
    // computes x^(e_p^e_exp) mod `mod` by repeated Frobenius-style powering
    Poly x = {0, 1};
    if (mod.size() - 1 == 1) x = {static_cast<u32>((p - mod[0] % p) % p)};
    Poly r = x;
    for (u64 i = 0; i < e_exp; ++i) {
        // r = r^p mod `mod` via square-and-multiply on the exponent p
        Poly base = r, out = {1};
        u64 e = e_p;
        while (e) {
            if (e & 1) out = poly_mul_mod(out, base, mod, p);
            base = poly_mul_mod(base, base, mod, p);
            e >>= 1;
        }
        r = out;
    }
    return r;
}

Poly poly_mod(Poly a, const Poly& mod, u64 p) {
    const std::size_t deg = mod.size() - 1;
    for (std::size_t i = a.size(); i-- > deg;) {
        u64 c = a[i] % p;
        if (!c) continue;
        a[i] = 0;
        for (std::size_t j = 0; j < deg; ++j)
            a[i - deg + j] =
                static_cast<u32>((a[i - deg + j] + (p - c) * mod[j]) % p);
    }
    a.resize(std::min(a.size(), deg));
    trim(a);
    return a;
}

Poly poly_gcd(Poly a, Poly b, u64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b with b made monic
        u64 lead_inv = numth::invmod(b.back(), p);
        Poly bm = b;
        for (auto& c : bm) c = static_cast<u32>(u64(c) * lead_inv % p);
        while (a.size() >= bm.size() && !a.empty()) {
            u64 c = a.back() % p;
            std::size_t shift = a.size() - bm.size();
            for (std::size_t j = 0; j < bm.size(); ++j)
                a[shift + j] =
                    static_cast<u32>((a[shift + j] + (p - c) * bm[j] % p) % p);
            trim(a);
        }
        std::swap(a, b);
    }
    return a;
}

bool is_irreducible(const Poly& f, u64 p, u64 alpha) {
    // x^(p^alpha) == x mod f, and gcd(x^(p^(alpha/l)) - x, f) = 1 for each
    // prime l | alpha
    Poly xp = poly_powmod_x(p, alpha, f, p);
    Poly x = poly_mod({0, 1}, f, p);
    if (poly_mod(xp, f, p) != x) return false;
    for (auto [l, e] : numth::factorize(alpha)) {
        (void)e;
        Poly xs = poly_powmod_x(p, alpha / l, f, p);
        // xs - x
        Poly diff = xs;
        diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
        diff[1] = static_cast<u32>((diff[1] + p - 1) % p);
        trim(diff);
        Poly g = poly_gcd(diff, f, p);
        if (!(g.size() == 1)) return false;  // gcd must be a nonzero constant
    }
    return true;
}

}  // namespace

Field Field::make(u64 p, u64 alpha) {
    if (!numth::is_prime(p)) throw NonPrimeError("make_field: p is not prime");
    if (alpha < 1) throw Error("make_field: alpha must be >= 1");
    if (alpha > 1 && p >= (u64(1) << 21))
        throw OverflowError("make_field: extension fields need p < 2^21");
    Field f;
    f.p_ = p;
    f.alpha_ = alpha;
    u64 q = 1;
    for (u64 i = 0; i < alpha; ++i) {
        auto m = checked_mul(q, p);
        if (!m) throw OverflowError("make_field: p^alpha exceeds 64 bits");
        q = *m;
    }
    f.q_ = q;
    if (alpha == 1) return f;

    // lexicographically least monic irreducible: compare (c_0, c_1, ...)
    // with c_0 most significant
    u64 total = q;  // p^alpha choices of lower coefficients
    for (u64 lex = 0; lex < total; ++lex) {
        Poly cand(alpha + 1, 0);
        cand[alpha] = 1;
        u64 v = lex;
        for (u64 i = alpha; i-- > 0;) {  // c_0 gets the most significant digit
            cand[alpha - 1 - i] = static_cast<u32>(v / checked_pow(p, i) % p);
            v %= checked_pow(p, i);
        }
        if (is_irreducible(cand, p, alpha)) {
            f.modulus_ = cand;
            return f;
        }
    }
    throw Error("make_field: no irreducible polynomial found");  // unreachable
}

std::vector<u32> Field::coeffs(u64 x) const {
    std::vector<u32> c(alpha_);
    for (u64 i = 0; i < alpha_; ++i) {
        c[i] = static_cast<u32>(x % p_);
        x /= p_;
    }
    return c;
}

u64 Field::from_coeffs(const std::vector<u32>& c) const {
    u64 x = 0;
    for (std::size_t i = std::min<std::size_t>(c.size(), alpha_); i-- > 0;)
        x = x * p_ + c[i] % p_;
    return x;
}

u64 Field::add(u64 x, u64 y) const {
    if (alpha_ == 1) return (x + y) % p_;
    u64 out = 0, mult = 1;
    for (u64 i = 0; i < alpha_; ++i) {
        out += (x % p_ + y % p_) % p_ * mult;
        x /= p_;
        y /= p_;
        mult *= p_;
    }
    return out;
}

u64 Field::neg(u64 x) const {
    if (alpha_ == 1) return (p_ - x % p_) % p_;
    u64 out = 0, mult = 1;
    for (u64 i = 0; i < alpha_; ++i) {
        out += (p_ - x % p_) % p_ * mult;
        x /= p_;
        mult *= p_;
    }
    return out;
}

u64 Field::sub(u64 x, u64 y) const { return add(x, neg(y)); }

u64 Field::mul(u64 x, u64 y) const {
    if (alpha_ == 1) return numth::mulmod(x, y, p_);
    Poly a = [&] {
        Poly c(alpha_);
        u64 v = x;
        for (u64 i = 0; i < alpha_; ++i) {
            c[i] = static_cast<u32>(v % p_);
            v /= p_;
        }
        return c;
    }();
    Poly b = [&] {
        Poly c(alpha_);
        u64 v = y;
        for (u64 i = 0; i < alpha_; ++i) {
            c[i] = static_cast<u32>(v % p_);
            v /= p_;
        }
        return c;
    }();
    Poly r = poly_mul_mod(a, b, modulus_, p_);
    u64 out = 0;
    for (std::size_t i = r.size(); i-- > 0;) out = out * p_ + r[i];
    return out;
}

u64 Field::pow(u64 x, u64 e) const {
    u64 r = 1 % q_;
    x %= q_;
    while (e) {
        if (e & 1) r = mul(r, x);
        x = mul(x, x);
        e >>= 1;
    }
    return r;
}

u64 Field::inv(u64 x) const {
    if (x % q_ == 0) throw DivisionByZeroError("field inverse of zero");
    if (alpha_ == 1) return numth::invmod(x, p_);
    return pow(x, q_ - 2);
}

u64 Field::primitive_root() const {
    auto fac = numth::factorize(q_ - 1);
    for (u64 g = 1; g < q_; ++g) {
        bool ok = true;
        for (auto [l, e] : fac) {
            (void)e;
            if (pow(g, (q_ - 1) / l) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw Error("no primitive root found");  // unreachable for a field
}

std::vector<u64> Field::multiplicative_subgroup(u64 d) const {
    if (d == 0 || (q_ - 1) % d != 0)
        throw NotDivisorError("multiplicative_subgroup: d does not divide q-1");
    const u64 g = primitive_root();
    const u64 step = (q_ - 1) / d;
    std::vector<u64> out;
    out.reserve(d);
    u64 base = pow(g, step);
    u64 cur = 1;
    for (u64 j = 0; j < d; ++j) {
        out.push_back(cur);
        cur = mul(cur, base);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string Field::to_json() const {
    json j;
    j["p"] = p_;
    j["alpha"] = alpha_;
    if (alpha_ > 1) j["modulus"] = modulus_;
    return j.dump();
}

Field Field::from_json(const std::string& text) {
    json j = json::parse(text);
    Field f = make(j.at("p").get<u64>(), j.at("alpha").get<u64>());
    if (f.alpha_ > 1 && j.contains("modulus")) {
        auto m = j.at("modulus").get<std::vector<u32>>();
        if (m != f.modulus_)
            throw FormatError("field modulus does not match canonical choice");
    }
    return f;
}

FieldElem elem(const Field& f, u64 code) { return {&f, code % f.q()}; }

namespace {
void require_same(const FieldElem& a, const FieldElem& b) {
    if (!a.field || !b.field || !a.field->same_spec(*b.field))
        throw FieldMismatchError("operands belong to different fields");
}
}  // namespace

FieldElem operator+(FieldElem a, FieldElem b) {
    require_same(a, b);
    return {a.field, a.field->add(a.code, b.code)};
}
FieldElem operator-(FieldElem a, FieldElem b) {
    require_same(a, b);
    return {a.field, a.field->sub(a.code, b.code)};
}
FieldElem operator*(FieldElem a, FieldElem b) {
    require_same(a, b);
    return {a.field, a.field->mul(a.code, b.code)};
}
FieldElem operator-(FieldElem a) { return {a.field, a.field->neg(a.code)}; }
FieldElem inv(FieldElem a) { return {a.field, a.field->inv(a.code)}; }
FieldElem pow(FieldElem a, u64 e) { return {a.field, a.field->pow(a.code, e)}; }

}  // namespace evlab::ffield

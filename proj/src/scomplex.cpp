#include "evlab/scomplex.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "evlab/errors.hpp"
#include "evlab/kernels/mask_scan.hpp"

namespace evlab::scomplex {

namespace {

void check_ground(int ground) {
    if (ground < 0 || ground > 24)
        throw TooLargeError("complex ground set limited to 24 points");
}

std::vector<u64> empty_table(int ground) {
    const u64 total = u64(1) << ground;
    return std::vector<u64>((total + 63) / 64, 0);
}

}  // namespace

ExplicitComplex ExplicitComplex::empty(int ground) {
    check_ground(ground);
    ExplicitComplex k;
    k.ground_ = ground;
    k.table_ = empty_table(ground);
    return k;
}

ExplicitComplex ExplicitComplex::full_simplex(int ground) {
    check_ground(ground);
    ExplicitComplex k;
    k.ground_ = ground;
    k.table_ = empty_table(ground);
    const u64 total = u64(1) << ground;
    for (u64 w = 0; w < k.table_.size(); ++w) k.table_[w] = ~u64(0);
    if (total < 64) k.table_[0] = (u64(1) << total) - 1;
    return k;
}

ExplicitComplex ExplicitComplex::from_table(int ground, std::vector<u64> table,
                                            bool validate) {
    check_ground(ground);
    ExplicitComplex k;
    k.ground_ = ground;
    const u64 total = u64(1) << ground;
    table.resize((total + 63) / 64, 0);
    if (total < 64) table[0] &= (u64(1) << total) - 1;
    k.table_ = std::move(table);
    if (validate && !k.downward_closed())
        throw Error("face set is not downward closed");
    return k;
}

ExplicitComplex ExplicitComplex::from_faces(int ground,
                                            const std::vector<u32>& faces) {
    check_ground(ground);
    auto table = empty_table(ground);
    bool any = false;
    for (u32 f : faces) {
        if (u64(f) >= (u64(1) << ground)) throw Error("face outside the ground set");
        table[f >> 6] |= u64(1) << (f & 63);
        any = true;
    }
    if (any) table[0] |= 1;  // empty face implied
    return from_table(ground, std::move(table), true);
}

bool ExplicitComplex::downward_closed() const {
    const u64 total = u64(1) << ground_;
    for (u64 m = 1; m < total; ++m) {
        if (!is_face(static_cast<u32>(m))) continue;
        u32 rest = static_cast<u32>(m);
        while (rest) {
            u32 bit = rest & (~rest + 1);
            if (!is_face(static_cast<u32>(m) ^ bit)) return false;
            rest ^= bit;
        }
    }
    return true;
}

u64 ExplicitComplex::face_count() const {
    u64 c = 0;
    for (u64 w : table_) c += std::popcount(w);
    return c;
}

std::vector<u32> ExplicitComplex::faces() const {
    std::vector<u32> out;
    const u64 total = u64(1) << ground_;
    for (u64 m = 0; m < total; ++m)
        if (is_face(static_cast<u32>(m))) out.push_back(static_cast<u32>(m));
    return out;
}

i64 ExplicitComplex::euler_characteristic() const {
    auto pc = kernels::parity_count(table_, ground_);
    i64 even_nonempty = i64(pc.even) - (is_face(0) ? 1 : 0);
    return i64(pc.odd) - even_nonempty;
}

int ExplicitComplex::dim() const {
    if (face_count() == 0) throw EmptyComplexError("dim of the void complex");
    int best = -1;
    const u64 total = u64(1) << ground_;
    for (u64 m = 0; m < total; ++m)
        if (is_face(static_cast<u32>(m)))
            best = std::max(best, int(std::popcount(m)) - 1);
    return best;
}

std::string ExplicitComplex::to_face_lines() const {
    std::string out;
    u64 listed = 0;
    const u64 total = u64(1) << ground_;
    for (u64 m = 1; m < total; ++m) {
        if (!is_face(static_cast<u32>(m))) continue;
        u32 rest = static_cast<u32>(m);
        bool first = true;
        while (rest) {
            int b = std::countr_zero(rest);
            rest &= rest - 1;
            if (!first) out += ' ';
            out += std::to_string(b);
            first = false;
        }
        out += '\n';
        ++listed;
    }
    if (listed == 0 && is_face(0)) out = "-\n";
    return out;
}

ExplicitComplex ExplicitComplex::from_face_lines(const std::string& text,
                                                 int ground) {
    std::vector<u32> faces;
    bool saw_empty = false;
    int max_idx = -1;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line == "-") {
            saw_empty = true;
            continue;
        }
        std::istringstream ls(line);
        u32 mask = 0;
        int idx;
        while (ls >> idx) {
            if (idx < 0 || idx > 23) throw FormatError("face index out of range");
            mask |= u32(1) << idx;
            max_idx = std::max(max_idx, idx);
        }
        faces.push_back(mask);
    }
    if (ground < 0) ground = max_idx + 1;
    if (faces.empty()) {
        auto table = empty_table(ground);
        if (saw_empty) table[0] |= 1;
        return from_table(ground, std::move(table), false);
    }
    return from_faces(ground, faces);
}

std::vector<std::uint8_t> ExplicitComplex::to_binary() const {
    std::vector<std::uint8_t> out = {'E', 'V', 'C', 'X', 1,
                                     static_cast<std::uint8_t>(ground_)};
    for (u64 w : table_)
        for (int b = 0; b < 8; ++b) out.push_back((w >> (8 * b)) & 0xff);
    return out;
}

ExplicitComplex ExplicitComplex::from_binary(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 6 || bytes[0] != 'E' || bytes[1] != 'V' || bytes[2] != 'C' ||
        bytes[3] != 'X' || bytes[4] != 1)
        throw FormatError("bad complex binary header");
    int ground = bytes[5];
    check_ground(ground);
    const u64 total = u64(1) << ground;
    const u64 nwords = (total + 63) / 64;
    if (bytes.size() != 6 + nwords * 8) throw FormatError("bad complex binary size");
    std::vector<u64> table(nwords, 0);
    for (u64 i = 0; i < nwords * 8; ++i)
        table[i / 8] |= u64(bytes[6 + i]) << (8 * (i % 8));
    return from_table(ground, std::move(table), true);
}

// ---------------------------------------------------------------------------

bool spot_check_downward_closed(const OracleComplex& K, Rng& rng, int trials) {
    for (int t = 0; t < trials; ++t) {
        DynBitset s(K.ground);
        // random subset, geometric-ish density
        u64 keep = 1 + rng.below(std::max<u64>(1, K.ground / 2));
        for (u64 i = 0; i < keep; ++i) s.set(rng.below(K.ground));
        if (!K.member(s)) continue;
        DynBitset t2 = s;
        for (std::size_t i = 0; i < K.ground; ++i) {
            if (!t2.test(i)) continue;
            DynBitset sub = t2;
            sub.reset(i);
            if (!K.member(sub)) return false;
        }
    }
    return true;
}

namespace {

FixedPointComplex fixed_point_impl(
    std::size_t ground, const std::function<bool(const DynBitset&)>& member,
    const perm::PermGroup& G) {
    if (G.n != ground)
        throw Error("fixed_point_complex: group domain does not match ground set");
    auto orbs = perm::orbits(G);
    if (orbs.size() > 24)
        throw TooManyOrbitsError("fixed_point_complex: more than 24 orbits");
    const int k = static_cast<int>(orbs.size());

    std::vector<DynBitset> orbit_sets;
    for (const auto& o : orbs) {
        DynBitset b(ground);
        for (u32 v : o) b.set(v);
        orbit_sets.push_back(std::move(b));
    }

    std::vector<u64> table((u64(1) << k) / 64 + 1, 0);
    // DFS over orbit subsets; a non-face prunes all supersets extending it
    std::vector<u32> stack_mask;
    std::vector<DynBitset> stack_union;
    DynBitset empty(ground);
    if (member(empty)) {
        table[0] |= 1;
        stack_mask.push_back(0);
        stack_union.push_back(empty);
        while (!stack_mask.empty()) {
            u32 s = stack_mask.back();
            DynBitset uni = std::move(stack_union.back());
            stack_mask.pop_back();
            stack_union.pop_back();
            int start = s == 0 ? 0 : 32 - std::countl_zero(s);
            for (int i = start; i < k; ++i) {
                DynBitset next = uni;
                next.or_with(orbit_sets[i]);
                if (member(next)) {
                    u32 sm = s | (u32(1) << i);
                    table[sm >> 6] |= u64(1) << (sm & 63);
                    stack_mask.push_back(sm);
                    stack_union.push_back(std::move(next));
                }
            }
        }
    }
    FixedPointComplex out;
    out.orbits = std::move(orbs);
    out.complex = ExplicitComplex::from_table(k, std::move(table), false);
    return out;
}

}  // namespace

FixedPointComplex fixed_point_complex(const ExplicitComplex& K,
                                      const perm::PermGroup& G) {
    auto member = [&K](const DynBitset& s) {
        u32 mask = 0;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s.test(i)) mask |= u32(1) << i;
        return K.is_face(mask);
    };
    return fixed_point_impl(std::size_t(K.ground()), member, G);
}

FixedPointComplex fixed_point_complex(const OracleComplex& K,
                                      const perm::PermGroup& G) {
    return fixed_point_impl(K.ground, K.member, G);
}

// ---------------------------------------------------------------------------
// Collapsibility.

namespace {

struct CollapseSearch {
    std::unordered_set<u32> faces;
    std::vector<std::pair<u32, u32>> steps;
    u64 budget;

    bool is_point() const {
        if (faces.size() != 2) return false;
        bool has_empty = faces.count(0) > 0;
        u32 other = 0;
        for (u32 f : faces)
            if (f != 0) other = f;
        return has_empty && std::popcount(other) == 1;
    }

    // the unique face properly containing sigma, or nullopt if not unique
    std::optional<u32> unique_coface(u32 sigma) const {
        std::optional<u32> found;
        for (u32 f : faces) {
            if (f == sigma) continue;
            if ((f & sigma) == sigma) {
                if (found) return std::nullopt;
                found = f;
            }
        }
        return found;
    }

    std::vector<std::pair<u32, u32>> free_pairs() const {
        std::vector<u32> sorted(faces.begin(), faces.end());
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::pair<u32, u32>> out;
        for (u32 f : sorted) {
            if (f == 0) continue;
            if (auto tau = unique_coface(f)) out.push_back({f, *tau});
        }
        return out;
    }

    bool dfs() {
        if (is_point()) return true;
        if (budget == 0) return false;
        auto pairs = free_pairs();
        for (auto [sigma, tau] : pairs) {
            if (budget == 0) return false;
            --budget;
            faces.erase(sigma);
            faces.erase(tau);
            steps.push_back({sigma, tau});
            if (dfs()) return true;
            steps.pop_back();
            faces.insert(sigma);
            faces.insert(tau);
        }
        return false;
    }
};

}  // namespace

CollapseResult is_collapsible(const ExplicitComplex& K, u64 budget) {
    CollapseResult res;
    auto fl = K.faces();
    if (fl.empty()) return res;  // void complex: not a point
    CollapseSearch cs;
    cs.faces.insert(fl.begin(), fl.end());
    cs.budget = budget;
    if (cs.dfs()) {
        res.collapsible = true;
        res.steps = std::move(cs.steps);
    }
    return res;
}

bool replay_collapse(const ExplicitComplex& K,
                     const std::vector<std::pair<u32, u32>>& steps) {
    std::unordered_set<u32> faces;
    auto fl = K.faces();
    faces.insert(fl.begin(), fl.end());
    for (auto [sigma, tau] : steps) {
        if (!faces.count(sigma) || !faces.count(tau) || sigma == 0) return false;
        if ((tau & sigma) != sigma || tau == sigma) return false;
        // sigma must have no other coface
        for (u32 f : faces)
            if (f != sigma && f != tau && (f & sigma) == sigma) return false;
        faces.erase(sigma);
        faces.erase(tau);
    }
    if (faces.size() != 2 || !faces.count(0)) return false;
    for (u32 f : faces)
        if (f != 0 && std::popcount(f) != 1) return false;
    return true;
}

}  // namespace evlab::scomplex

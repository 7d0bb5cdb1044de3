#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "evlab/perm.hpp"
#include "evlab/util.hpp"

namespace evlab::scomplex {

// Abstract simplicial complex on a ground set of at most 24 points, stored
// as a bit table over all 2^N subset masks (bit m = 1 iff m is a face).
// Downward closure is validated on construction unless the caller vouches
// for it (internal scans that are closed by construction).
class ExplicitComplex {
  public:
    ExplicitComplex() = default;

    static ExplicitComplex from_faces(int ground, const std::vector<u32>& faces);
    static ExplicitComplex from_table(int ground, std::vector<u64> table,
                                      bool validate = true);
    static ExplicitComplex empty(int ground);         // no faces at all
    static ExplicitComplex full_simplex(int ground);  // entire power set

    int ground() const { return ground_; }
    bool is_face(u32 mask) const {
        return (table_[mask >> 6] >> (mask & 63)) & 1;
    }
    u64 face_count() const;
    std::vector<u32> faces() const;  // ascending masks
    const std::vector<u64>& table() const { return table_; }

    i64 euler_characteristic() const;  // sum over nonempty faces of (-1)^dim
    int dim() const;                   // -1 for {empty face}; error if no faces

    bool downward_closed() const;

    friend bool operator==(const ExplicitComplex&, const ExplicitComplex&) = default;

    // newline-delimited face lines: each nonempty face as sorted indices,
    // "-" for the empty face when it is the only one
    std::string to_face_lines() const;
    static ExplicitComplex from_face_lines(const std::string& text,
                                           int ground = -1);
    std::vector<std::uint8_t> to_binary() const;
    static ExplicitComplex from_binary(const std::vector<std::uint8_t>& bytes);

  private:
    int ground_ = 0;
    std::vector<u64> table_ = {0};  // 2^ground bits
};

// Membership-predicate complex over an arbitrary ground set; used when the
// parent complex is far too large to enumerate but single queries are cheap.
struct OracleComplex {
    std::size_t ground = 0;
    std::function<bool(const DynBitset&)> member;
};

// Downward-closure spot check on random membership chains.
bool spot_check_downward_closed(const OracleComplex& K, Rng& rng, int trials);

struct FixedPointComplex {
    std::vector<std::vector<u32>> orbits;  // ground points per orbit class
    ExplicitComplex complex;               // faces over the orbit classes
};

// Fixed-point complex of a group action: S is a face iff the union of the
// orbits indexed by S is a face of the parent.
FixedPointComplex fixed_point_complex(const ExplicitComplex& K,
                                      const perm::PermGroup& G);
FixedPointComplex fixed_point_complex(const OracleComplex& K,
                                      const perm::PermGroup& G);

// Free-face collapsing.  Greedy with bounded backtracking; a negative answer
// is "not collapsed within budget", never a proof of non-collapsibility.
struct CollapseResult {
    bool collapsible = false;
    std::vector<std::pair<u32, u32>> steps;  // (free face, its unique coface)
};
CollapseResult is_collapsible(const ExplicitComplex& K, u64 budget = 200'000);

// Replays a collapse certificate against the complex.
bool replay_collapse(const ExplicitComplex& K,
                     const std::vector<std::pair<u32, u32>>& steps);

}  // namespace evlab::scomplex

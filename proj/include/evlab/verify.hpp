#pragma once

#include <string>
#include <vector>

#include "evlab/hgraph.hpp"
#include "evlab/perm.hpp"
#include "evlab/util.hpp"

namespace evlab::verify {

enum class Verdict { pass, fail, inapplicable, budget };
std::string verdict_name(Verdict v);

struct VerificationReport {
    std::string check_id;
    std::string params_json;  // the inputs, replayable
    std::string expected;
    std::string observed;
    Verdict verdict = Verdict::fail;
    bool theorem_backed = true;  // failure of a theorem-backed check is a defect
    double runtime_ms = 0;

    std::string to_json() const;
};

// Every nontrivial monotone graph property on [n] is evasive (exhaustive).
VerificationReport verify_ark_exhaustive(u32 n, u64 property_budget = 2'000'000);

// Seeded invariant cones over certified-Oliver groups: chi of the fixed-point
// complex is 1 mod q every time.
VerificationReport verify_oliver_consistency(u32 trials, u64 seed);

// The tail-restricted forbidden-subgraph function's fixed-point complex under
// the block construction equals the hom-free complex on r classes,
// face for face.
VerificationReport verify_fixed_point_isomorphism(u32 n, const hgraph::SmallGraph& H);

// Exact orbital minima against the cluster inequalities.
VerificationReport verify_orbital_bounds_gamma0(u64 p, u64 alpha,
                                                const perm::PermGroup& delta_k);
VerificationReport verify_orbital_bounds_pqr(u64 p, u64 k, u64 r, u64 q,
                                             const std::vector<u64>& partition);

// Every intra-block u-orbital's induced graph contains a clique of size h.
VerificationReport verify_invariant_graph_cliques(const perm::PermGroup& G, u32 h);

// Sweeps used by the acceptance gate and `verify all`.
VerificationReport verify_cks_sweep();                      // fixed (H, r) set
VerificationReport verify_paley_orbital_range(u64 q_max);   // prime q, even d
VerificationReport verify_weil_sweep(u64 q_max, u32 tuples_per, u64 seed);
VerificationReport verify_dtc_named(u32 n_max);             // AND/OR/parity/const
VerificationReport verify_gamma0_family(u32 min_instances); // criterion-6 sweep
VerificationReport verify_planner_roundtrip(u32 draws, u64 seed);
VerificationReport verify_near_fermat_fixed_points(u64 limit);

std::vector<VerificationReport> verify_all(u64 seed);
// exit-code policy: only theorem-backed failures count
bool any_theorem_backed_failure(const std::vector<VerificationReport>& reports);

}  // namespace evlab::verify

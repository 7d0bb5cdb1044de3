#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evlab/ffield.hpp"
#include "evlab/scomplex.hpp"
#include "evlab/util.hpp"

namespace evlab::hgraph {

// Undirected simple graph on at most 64 vertices, adjacency rows as bitmasks.
class SmallGraph {
  public:
    SmallGraph() = default;
    explicit SmallGraph(u32 n);

    u32 n() const { return static_cast<u32>(adj_.size()); }
    u64 row(u32 v) const { return adj_[v]; }
    bool edge(u32 u, u32 v) const { return (adj_[u] >> v) & 1; }
    void add_edge(u32 u, u32 v);
    u64 edge_count() const;
    u32 degree(u32 v) const;

    // edge-slot mask in lexicographic pair order (n <= 7 for 32-bit masks,
    // up to n = 11 for the 64-bit variant used internally)
    static SmallGraph from_edge_mask(u32 n, u64 mask);
    u64 edge_mask() const;

    std::string to_graph6() const;
    static SmallGraph from_graph6(const std::string& s);

    friend bool operator==(const SmallGraph&, const SmallGraph&) = default;

  private:
    std::vector<u64> adj_;
};

SmallGraph complete_graph(u32 n);
SmallGraph cycle_graph(u32 n);
SmallGraph path_graph(u32 n);  // n vertices, n-1 edges
SmallGraph empty_graph(u32 n);
SmallGraph star_graph(u32 leaves);
SmallGraph petersen_graph();
// K3, K4, C4, C5, P3, ... or a graph6 string
SmallGraph named_graph(const std::string& name);

// ---------------------------------------------------------------------------
// Homomorphism and subgraph search.

struct HomWitness {
    std::vector<u32> mapping;  // V(H) -> V(G)
    bool injective = false;
};

// Graph homomorphism H -> G (edges to edges, collisions allowed).
std::optional<HomWitness> exists_hom(const SmallGraph& H, const SmallGraph& G);
// Not-necessarily-induced subgraph: injective homomorphism H -> G.
std::optional<HomWitness> has_subgraph(const SmallGraph& G, const SmallGraph& H);

bool verify_witness(const HomWitness& w, const SmallGraph& H, const SmallGraph& G);

// T_H = min{ 2^(2^t) - 1 : 2^(2^t) >= h }, h = |V(H)|.
u64 t_of_h(const SmallGraph& H);

// ---------------------------------------------------------------------------
// Hom-free complexes and the parity check.

// Edge sets of all homomorphic images of H in K_r (no collapsed edge), as
// edge-slot masks; a graph on [r] admits an H-homomorphism iff it contains
// one of these patterns.  Supersets of other patterns are pruned.
std::vector<u32> hom_image_patterns(const SmallGraph& H, u32 r);

// Same for injective maps: a graph on [r] contains H as a subgraph iff it
// contains one of these edge-slot patterns.
std::vector<u32> subgraph_patterns(const SmallGraph& H, u32 r);

// The complex of H-hom-free graphs on the edge slots of K_r.
scomplex::ExplicitComplex q_hom_complex(u32 r, const SmallGraph& H);

enum class ParityVerdict { holds, fails, inapplicable };
struct CksReport {
    ParityVerdict verdict;
    u64 t_h = 0;
    i64 chi = 0;  // meaningful unless inapplicable skipped the scan
};
CksReport cks_parity_check(u32 r, const SmallGraph& H);

// ---------------------------------------------------------------------------
// Generalized Paley graphs.

// Explicit graph for q <= 64: vertices are field codes, i ~ j iff i - j lies
// in the order-d multiplicative subgroup.  d must be even (symmetry).
SmallGraph paley(u64 q, u64 d);

// Adjacency oracle for larger q (q <= 10^5).
class PaleyOracle {
  public:
    PaleyOracle(u64 q, u64 d);
    u64 q() const { return field_.q(); }
    u64 d() const { return d_; }
    bool adjacent(u64 i, u64 j) const;
    const ffield::Field& field() const { return field_; }

  private:
    ffield::Field field_;
    u64 d_;
    std::vector<bool> in_subgroup_;  // indexed by element code
};

// ---------------------------------------------------------------------------
// Clique search.

std::optional<std::vector<u32>> has_clique(const SmallGraph& G, u32 h);
std::optional<std::vector<u64>> has_clique(const PaleyOracle& G, u32 h);

// Hypothesis (q-1)/d <= q^(1/2h) evaluated in exact integer arithmetic, then
// the clique searched; consistent = hypothesis implies clique found.
struct PaleyCliqueReport {
    bool hypothesis_holds = false;
    bool clique_found = false;
    bool consistent = false;
    std::vector<u64> witness;
};
PaleyCliqueReport paley_clique_check(u64 q, u64 d, u32 h);

// ---------------------------------------------------------------------------
// Character-sum count check: the number of x with (a_i + x)^((q-1)/l) = 1
// for all i, against the bound q/l^t +- t sqrt(q) (exact arithmetic).
struct WeilReport {
    u64 count = 0;
    double bound_lo = 0, bound_hi = 0;  // for display only
    bool within = false;                // decided exactly, not via the doubles
};
WeilReport weil_count_check(u64 q, u64 l, const std::vector<u64>& a_list);

}  // namespace evlab::hgraph

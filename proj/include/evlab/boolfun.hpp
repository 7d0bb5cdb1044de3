#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evlab/hgraph.hpp"
#include "evlab/util.hpp"

namespace evlab::boolfun {

// Truth table on up to 24 variables; bit x of the table is the value at the
// assignment whose bit j gives variable j.
class BooleanFunction {
  public:
    BooleanFunction(u32 n_vars, std::vector<u64> table);
    static BooleanFunction constant(u32 n_vars, bool value);
    static BooleanFunction conjunction(u32 n_vars);  // AND of all variables
    static BooleanFunction disjunction(u32 n_vars);  // OR
    static BooleanFunction parity(u32 n_vars);
    static BooleanFunction dictator(u32 n_vars, u32 var);

    u32 n_vars() const { return n_; }
    bool eval(u32 x) const { return (table_[x >> 6] >> (x & 63)) & 1; }
    void set(u32 x, bool v);
    const std::vector<u64>& table() const { return table_; }

    // variable relabeling: result(x) = f(x permuted by pi^{-1}) so variable
    // i of the result corresponds to variable pi(i) of f
    BooleanFunction permute_vars(const std::vector<u32>& pi) const;

    std::string to_json(const std::string& order_tag = "lex_pairs") const;
    static BooleanFunction from_json(const std::string& text);

    friend bool operator==(const BooleanFunction&, const BooleanFunction&) = default;

  private:
    u32 n_;
    std::vector<u64> table_;
};

// ---------------------------------------------------------------------------
// Exact deterministic decision-tree complexity.

struct DtcOptions {
    u64 node_budget = 50'000'000;
    // key the memo on the canonical subfunction table instead of the
    // (queried, assignment) pair; collapses symmetric restrictions
    bool table_hash_memo = false;
};

struct DtcResult {
    u32 lo = 0, hi = 0;  // lo == hi when exact
    bool exact() const { return lo == hi; }
    u64 nodes = 0;
};

DtcResult decision_tree_complexity(const BooleanFunction& f, DtcOptions opt = {});
bool is_evasive(const BooleanFunction& f, DtcOptions opt = {});

// Adversary strategy witnessing the lower bound: at every node the strategy
// fixes an answer for each variable the querier might probe.  Shared
// restriction states make this a DAG.
struct AdversaryNode {
    std::map<u32, std::pair<bool, i64>> moves;  // var -> (answer, child id or -1)
};
struct AdversaryCertificate {
    u32 depth = 0;
    std::vector<AdversaryNode> nodes;  // [0] is the root
};
AdversaryCertificate adversary_certificate(const BooleanFunction& f);
// Plays random query orders against the certificate and checks the function
// stays undetermined for the claimed number of probes.
bool replay_certificate(const BooleanFunction& f, const AdversaryCertificate& c,
                        Rng& rng, int trials);

// ---------------------------------------------------------------------------
// Graph properties as Boolean functions (variables = lexicographic pairs).

struct GraphPropertySpec {
    u32 n = 0;
    std::function<bool(const hgraph::SmallGraph&)> predicate;
    bool monotone = false;
    std::string name;
};

// triangle-free | forbid:<name-or-graph6> | connectivity | max-edges:<m>
GraphPropertySpec named_property(const std::string& name, u32 n);

// Exhaustive for n <= 5, sampled above.
bool check_invariance(const GraphPropertySpec& spec, Rng& rng, int trials = 64);
bool check_monotone(const GraphPropertySpec& spec, Rng& rng, int trials = 64);

BooleanFunction property_to_function(const GraphPropertySpec& spec);  // n <= 7

// ---------------------------------------------------------------------------
// Isomorphism classes of n-vertex graphs and monotone-property enumeration.

struct IsoClasses {
    u32 n = 0;
    std::vector<u32> class_of_mask;  // per edge mask
    std::vector<u32> class_rep;      // canonical (minimum) mask per class
    std::vector<u32> class_edges;
    // bit j of below[i] set iff class j is reachable from i by edge deletion
    // (including i itself)
    std::vector<u64> below;
    u32 count() const { return static_cast<u32>(class_rep.size()); }
};
IsoClasses graph_iso_classes(u32 n);  // n <= 5

// Streams every monotone graph property on [n] as a downward-closed set of
// iso classes (each exactly once, including both trivial properties).
// Returns false when max_count was hit before completion.
bool enumerate_monotone_properties(u32 n, u64 max_count,
                                   const std::function<void(u64)>& yield);

BooleanFunction function_from_class_set(const IsoClasses& cls, u64 class_set);

// ---------------------------------------------------------------------------
// The tail-restricted forbidden-subgraph function: graphs on [n] with no
// edges among the last k' vertices, value 1 iff H-subgraph-free.  Variables
// are the non-tail edge slots in lexicographic order.
BooleanFunction restricted_function_bnh(u32 n, u32 kprime,
                                        const hgraph::SmallGraph& H);

}  // namespace evlab::boolfun

#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causalkit/ci.hpp"
#include "causalkit/graph.hpp"

namespace causalkit {

// Output of one discovery run: the learned Pdag, the number of distinct CI
// queries charged to the provider during the run, wall time, and an echo of
// the configuration.
struct DiscoveryReport {
    std::string algorithm;
    Pdag output;
    std::uint64_t ci_queries = 0;
    double elapsed_ms = 0.0;
    std::map<std::string, std::string> config;
    bool converged = true;
};

// PC: adjacency search with conditioning sets of increasing size drawn from
// the current neighborhoods of both endpoints, v-structure orientation from
// the stored separating sets, then Meek closure. Conflicting v-structure
// demands leave the edge undirected.
DiscoveryReport pc(CiProvider& provider, int p);

// Minimal I-MAP of the given ordering: edge (pi_i, pi_j), i < j, present iff
// the provider reports dependence given the predecessors of pi_j minus
// pi_i. Exactly one query per ordered pair.
Dag minimal_imap(CiProvider& provider, const Permutation& perm);

// SP: minimal I-MAP for every permutation of 1..p; returns the CPDAG of a
// sparsest one, ties broken by the lexicographically smallest permutation.
// Guarded against large p.
DiscoveryReport sp(CiProvider& provider, int p, int guard = 7);

struct GspOptions {
    int dfs_depth = 4;
    std::uint64_t seed = 0;  // draws the initial permutation(s)
    int restarts = 4;        // independent initial permutations per run
    std::optional<Permutation> initial_order;  // overrides restarts with one fixed start
};

// GSP: from an initial permutation's minimal I-MAP, depth-first search over
// covered-edge reversals inside the current MEC for a reversal whose
// consistent permutation yields a strictly sparser minimal I-MAP; descend
// there and repeat until no sparser I-MAP is reachable within the depth
// budget. Several random initial permutations are tried and the sparsest
// final I-MAP wins; all queries count toward the same report.
// converged=false when the depth budget truncated a final sweep.
DiscoveryReport gsp(CiProvider& provider, int p, const GspOptions& options = {});

// Monotone nested sequence S_0 = {} through S_L = {1..p} of node sets.
class PrefixSets {
public:
    PrefixSets() = default;
    explicit PrefixSets(std::vector<NodeSet> sets);
    const std::vector<NodeSet>& sets() const { return sets_; }

private:
    std::vector<NodeSet> sets_;
};

// GAS: grows a nested sequence of prefix sets, admitting a candidate only
// when neither the v-structure certificate nor the Meek-rule-1 certificate
// exhibits an unplaced ancestor; the learned order then determines edges
// with one targeted query per pair. The prefix sets are echoed in the
// report config. Throws StuckPrefixError when no node is admissible
// (faithfulness violation).
DiscoveryReport gas(CiProvider& provider, int p);

// Invariance findings for one intervention with a known target set.
struct InterventionEvidence {
    int intervention_id = 0;
    NodeSet targets;
    std::vector<InvarianceResult> invariance;
};

// Orients undirected edges of a CPDAG from marginal-invariance evidence:
// for an undirected u-v with u targeted, u -> v when v changed and v -> u
// when v did not. Meek closure afterwards. Adjacencies are never removed
// and existing directions never reversed; contradictory demands raise
// OrientationConflictError.
Pdag interventional_orient(const Pdag& base,
                           const std::vector<InterventionEvidence>& evidence);

}  // namespace causalkit

#pragma once

#include <array>
#include <set>
#include <utility>
#include <vector>

namespace causalkit {

using NodeSet = std::set<int>;
using Edge = std::pair<int, int>;  // (i, j) reads i -> j

// Directed acyclic graph over nodes 1..p. Immutable after construction;
// the constructor rejects self-loops, duplicate or antiparallel edges,
// out-of-range nodes, and directed cycles.
class Dag {
public:
    Dag() = default;
    Dag(int p, const std::vector<Edge>& edges);

    int node_count() const { return p_; }
    std::size_t edge_count() const { return n_edges_; }
    bool has_edge(int i, int j) const;
    bool adjacent(int i, int j) const;
    const NodeSet& parents_of(int i) const;
    const NodeSet& children_of(int i) const;

    // All edges in lexicographic order.
    std::vector<Edge> edges() const;

    // Canonical topological order (smallest label first among sources).
    std::vector<int> topological_order() const;

    bool operator==(const Dag& other) const;

private:
    int p_ = 0;
    std::size_t n_edges_ = 0;
    std::vector<NodeSet> parents_, children_;  // index 0 unused

    void check_node(int i) const;
};

// Partially directed graph: a set of directed edges plus a set of
// undirected edges, disjoint as adjacencies. Undirected pairs are stored
// with the smaller node first.
class Pdag {
public:
    Pdag() = default;
    explicit Pdag(int p);
    Pdag(int p, const std::vector<Edge>& directed,
         const std::vector<Edge>& undirected);

    int node_count() const { return p_; }
    std::size_t directed_count() const { return directed_.size(); }
    std::size_t undirected_count() const { return undirected_.size(); }

    bool has_directed(int i, int j) const;
    bool has_undirected(int i, int j) const;
    bool adjacent(int i, int j) const;

    void add_directed(int i, int j);
    void add_undirected(int i, int j);
    void remove_between(int i, int j);
    // Turn the undirected edge i-j into i -> j.
    void orient(int i, int j);

    std::vector<Edge> directed_edges() const;    // lexicographic
    std::vector<Edge> undirected_edges() const;  // lexicographic, i < j

    const NodeSet& parents_of(int i) const;
    const NodeSet& children_of(int i) const;
    const NodeSet& neighbors_of(int i) const;  // undirected only
    NodeSet adjacents_of(int i) const;

    bool directed_part_acyclic() const;

    // Undirected copy of all adjacencies.
    Pdag to_skeleton() const;

    bool operator==(const Pdag& other) const;

private:
    int p_ = 0;
    std::set<Edge> directed_;
    std::set<Edge> undirected_;                        // (min, max)
    std::vector<NodeSet> parents_, children_, neighbors_;  // index 0 unused

    void check_node(int i) const;
};

// Permutation of the node labels 1..p.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> order);

    int size() const { return static_cast<int>(order_.size()); }
    int at(int position) const { return order_.at(position); }  // 0-based position
    const std::vector<int>& order() const { return order_; }

private:
    std::vector<int> order_;
};

enum class Relative { Parents, Children, Ancestors, Descendants };

NodeSet relatives(const Dag& dag, int i, Relative kind);

// True iff every path between i and j is blocked by S (collider rules
// including the descendant clause). Linear-time reachability, no
// moralization; see the note in graph.cpp.
bool is_d_separated(const Dag& dag, int i, int j, const NodeSet& s);

Pdag skeleton(const Dag& dag);

// The Pdag with every edge of the DAG directed.
Pdag as_pdag(const Dag& dag);

// All triples (i, k, j) with i -> k <- j, i and j non-adjacent, i < j.
std::vector<std::array<int, 3>> v_structures(const Dag& dag);

// Fixpoint of Meek rules 1-4. In strict mode an orientation that would
// create a directed cycle raises InconsistentPdagError; in relaxed mode it
// is skipped (used on finite-sample inputs whose v-structures may clash).
Pdag meek_closure(const Pdag& pdag, bool strict = true);

// CPDAG of the Markov equivalence class: skeleton + v-structure
// orientations + Meek closure.
Pdag essential_graph(const Dag& dag);

// Verma-Pearl criterion: same skeleton and same v-structures.
bool markov_equivalent(const Dag& a, const Dag& b);

// Edges i -> j with Pa(j) = Pa(i) u {i}; reversing one stays in the MEC.
std::vector<Edge> covered_edges(const Dag& dag);

// The DAG with edge (i, j) reversed.
Dag reverse_edge(const Dag& dag, int i, int j);

// Every DAG Markov-equivalent to the input, discovered by breadth-first
// closure under covered-edge reversals. Guarded: throws above the node
// limit. Output is sorted by edge list and contains the input.
std::vector<Dag> enumerate_mec(const Dag& dag, int guard = 10);

// Edge i -> j for every ancestor relation i in Anc(j).
Dag transitive_closure(const Dag& dag);

bool is_consistent_order(const Permutation& perm, const Dag& dag);

// Size of the largest clique made of undirected edges only (>= 1 for any
// non-empty graph). Exact branch and bound.
int max_undirected_clique(const Pdag& pdag);

}  // namespace causalkit

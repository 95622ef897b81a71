#include "causalkit/graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <queue>
#include <string>

#include "causalkit/errors.hpp"

namespace causalkit {

namespace {

std::string edge_str(int i, int j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

// ---------------------------------------------------------------- Dag

Dag::Dag(int p, const std::vector<Edge>& edges) : p_(p) {
    if (p < 0) throw DataError("Dag: negative node count");
    parents_.assign(p_ + 1, {});
    children_.assign(p_ + 1, {});
    for (const auto& [i, j] : edges) {
        check_node(i);
        check_node(j);
        if (i == j) throw DataError("Dag: self-loop at node " + std::to_string(i));
        if (children_[i].count(j)) throw DataError("Dag: duplicate edge " + edge_str(i, j));
        if (children_[j].count(i))
            throw DataError("Dag: antiparallel edges between " + std::to_string(i) + " and " +
                            std::to_string(j));
        children_[i].insert(j);
        parents_[j].insert(i);
        ++n_edges_;
    }
    topological_order();  // throws on cycles
}

void Dag::check_node(int i) const {
    if (i < 1 || i > p_)
        throw DataError("Dag: node " + std::to_string(i) + " out of range 1.." +
                        std::to_string(p_));
}

bool Dag::has_edge(int i, int j) const {
    check_node(i);
    check_node(j);
    return children_[i].count(j) != 0;
}

bool Dag::adjacent(int i, int j) const { return has_edge(i, j) || has_edge(j, i); }

const NodeSet& Dag::parents_of(int i) const {
    check_node(i);
    return parents_[i];
}

const NodeSet& Dag::children_of(int i) const {
    check_node(i);
    return children_[i];
}

std::vector<Edge> Dag::edges() const {
    std::vector<Edge> out;
    out.reserve(n_edges_);
    for (int i = 1; i <= p_; ++i)
        for (int j : children_[i]) out.emplace_back(i, j);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> Dag::topological_order() const {
    std::vector<int> indeg(p_ + 1, 0);
    for (int i = 1; i <= p_; ++i) indeg[i] = static_cast<int>(parents_[i].size());
    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (int i = 1; i <= p_; ++i)
        if (indeg[i] == 0) ready.push(i);
    std::vector<int> order;
    order.reserve(p_);
    while (!ready.empty()) {
        const int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int c : children_[v])
            if (--indeg[c] == 0) ready.push(c);
    }
    if (static_cast<int>(order.size()) != p_) throw DataError("Dag: edges contain a cycle");
    return order;
}

bool Dag::operator==(const Dag& other) const {
    return p_ == other.p_ && children_ == other.children_;
}

// ---------------------------------------------------------------- Pdag

Pdag::Pdag(int p) : p_(p) {
    if (p < 0) throw DataError("Pdag: negative node count");
    parents_.assign(p_ + 1, {});
    children_.assign(p_ + 1, {});
    neighbors_.assign(p_ + 1, {});
}

Pdag::Pdag(int p, const std::vector<Edge>& directed, const std::vector<Edge>& undirected)
    : Pdag(p) {
    for (const auto& [i, j] : directed) add_directed(i, j);
    for (const auto& [i, j] : undirected) add_undirected(i, j);
}

void Pdag::check_node(int i) const {
    if (i < 1 || i > p_)
        throw DataError("Pdag: node " + std::to_string(i) + " out of range 1.." +
                        std::to_string(p_));
}

bool Pdag::has_directed(int i, int j) const {
    check_node(i);
    check_node(j);
    return directed_.count({i, j}) != 0;
}

bool Pdag::has_undirected(int i, int j) const {
    check_node(i);
    check_node(j);
    return undirected_.count({std::min(i, j), std::max(i, j)}) != 0;
}

bool Pdag::adjacent(int i, int j) const {
    return has_directed(i, j) || has_directed(j, i) || has_undirected(i, j);
}

void Pdag::add_directed(int i, int j) {
    check_node(i);
    check_node(j);
    if (i == j) throw DataError("Pdag: self-loop at node " + std::to_string(i));
    if (adjacent(i, j)) throw DataError("Pdag: pair already adjacent " + edge_str(i, j));
    directed_.insert({i, j});
    children_[i].insert(j);
    parents_[j].insert(i);
}

void Pdag::add_undirected(int i, int j) {
    check_node(i);
    check_node(j);
    if (i == j) throw DataError("Pdag: self-loop at node " + std::to_string(i));
    if (adjacent(i, j)) throw DataError("Pdag: pair already adjacent " + edge_str(i, j));
    undirected_.insert({std::min(i, j), std::max(i, j)});
    neighbors_[i].insert(j);
    neighbors_[j].insert(i);
}

void Pdag::remove_between(int i, int j) {
    check_node(i);
    check_node(j);
    directed_.erase({i, j});
    directed_.erase({j, i});
    undirected_.erase({std::min(i, j), std::max(i, j)});
    children_[i].erase(j);
    children_[j].erase(i);
    parents_[i].erase(j);
    parents_[j].erase(i);
    neighbors_[i].erase(j);
    neighbors_[j].erase(i);
}

void Pdag::orient(int i, int j) {
    if (!has_undirected(i, j))
        throw DataError("Pdag: cannot orient non-undirected pair " + edge_str(i, j));
    undirected_.erase({std::min(i, j), std::max(i, j)});
    neighbors_[i].erase(j);
    neighbors_[j].erase(i);
    directed_.insert({i, j});
    children_[i].insert(j);
    parents_[j].insert(i);
}

std::vector<Edge> Pdag::directed_edges() const {
    return {directed_.begin(), directed_.end()};
}

std::vector<Edge> Pdag::undirected_edges() const {
    return {undirected_.begin(), undirected_.end()};
}

const NodeSet& Pdag::parents_of(int i) const {
    check_node(i);
    return parents_[i];
}

const NodeSet& Pdag::children_of(int i) const {
    check_node(i);
    return children_[i];
}

const NodeSet& Pdag::neighbors_of(int i) const {
    check_node(i);
    return neighbors_[i];
}

NodeSet Pdag::adjacents_of(int i) const {
    check_node(i);
    NodeSet out = neighbors_[i];
    out.insert(parents_[i].begin(), parents_[i].end());
    out.insert(children_[i].begin(), children_[i].end());
    return out;
}

bool Pdag::directed_part_acyclic() const {
    std::vector<int> indeg(p_ + 1, 0);
    for (int i = 1; i <= p_; ++i) indeg[i] = static_cast<int>(parents_[i].size());
    std::deque<int> ready;
    for (int i = 1; i <= p_; ++i)
        if (indeg[i] == 0) ready.push_back(i);
    int seen = 0;
    while (!ready.empty()) {
        const int v = ready.front();
        ready.pop_front();
        ++seen;
        for (int c : children_[v])
            if (--indeg[c] == 0) ready.push_back(c);
    }
    return seen == p_;
}

Pdag Pdag::to_skeleton() const {
    Pdag out(p_);
    for (const auto& [i, j] : undirected_) out.add_undirected(i, j);
    for (const auto& [i, j] : directed_) out.add_undirected(i, j);
    return out;
}

bool Pdag::operator==(const Pdag& other) const {
    return p_ == other.p_ && directed_ == other.directed_ && undirected_ == other.undirected_;
}

// ---------------------------------------------------------------- Permutation

Permutation::Permutation(std::vector<int> order) : order_(std::move(order)) {
    const int p = static_cast<int>(order_.size());
    std::vector<char> seen(p + 1, 0);
    for (int v : order_) {
        if (v < 1 || v > p || seen[v])
            throw DataError("Permutation: order is not a bijection on 1.." + std::to_string(p));
        seen[v] = 1;
    }
}

// ---------------------------------------------------------------- operations

NodeSet relatives(const Dag& dag, int i, Relative kind) {
    switch (kind) {
        case Relative::Parents:
            return dag.parents_of(i);
        case Relative::Children:
            return dag.children_of(i);
        case Relative::Ancestors:
        case Relative::Descendants: {
            const bool up = kind == Relative::Ancestors;
            NodeSet out;
            std::deque<int> frontier{i};
            // excludes i itself unless reachable through a cycle, which the
            // Dag invariant rules out
            while (!frontier.empty()) {
                const int v = frontier.front();
                frontier.pop_front();
                for (int w : up ? dag.parents_of(v) : dag.children_of(v)) {
                    if (out.insert(w).second) frontier.push_back(w);
                }
            }
            return out;
        }
    }
    throw std::logic_error("relatives: unknown kind");
}

// Reachability formulation of d-separation. A trail is explored as states
// (node, arrival), where arrival records whether the trail entered the node
// through an incoming or an outgoing edge; collider checks then only need
// the ancestor set of S.
bool is_d_separated(const Dag& dag, int i, int j, const NodeSet& s) {
    const int p = dag.node_count();
    auto check = [&](int v) {
        if (v < 1 || v > p)
            throw DataError("is_d_separated: node " + std::to_string(v) + " out of range");
    };
    check(i);
    check(j);
    for (int v : s) check(v);
    if (i == j) throw DataError("is_d_separated: i and j must differ");
    if (s.count(i) || s.count(j))
        throw DataError("is_d_separated: endpoints cannot be in the conditioning set");

    std::vector<char> in_s(p + 1, 0), in_a(p + 1, 0);
    std::deque<int> frontier;
    for (int v : s) {
        in_s[v] = 1;
        in_a[v] = 1;
        frontier.push_back(v);
    }
    while (!frontier.empty()) {  // in_a = S plus ancestors of S
        const int v = frontier.front();
        frontier.pop_front();
        for (int w : dag.parents_of(v))
            if (!in_a[w]) {
                in_a[w] = 1;
                frontier.push_back(w);
            }
    }

    enum { kInto = 0, kOutOf = 1 };
    std::vector<std::array<char, 2>> visited(p + 1, {0, 0});
    std::deque<std::pair<int, int>> queue;
    auto push = [&](int v, int t) {
        if (!visited[v][t]) {
            visited[v][t] = 1;
            queue.emplace_back(v, t);
        }
    };
    for (int c : dag.children_of(i)) push(c, kInto);
    for (int q : dag.parents_of(i)) push(q, kOutOf);

    while (!queue.empty()) {
        const auto [v, t] = queue.front();
        queue.pop_front();
        if (v == j) return false;
        if (t == kInto) {
            if (!in_s[v])
                for (int w : dag.children_of(v)) push(w, kInto);
            if (in_a[v])  // v is a collider here; open iff v or a descendant is in S
                for (int w : dag.parents_of(v)) push(w, kOutOf);
        } else {
            if (!in_s[v]) {
                for (int w : dag.children_of(v)) push(w, kInto);
                for (int w : dag.parents_of(v)) push(w, kOutOf);
            }
        }
    }
    return true;
}

Pdag skeleton(const Dag& dag) {
    Pdag out(dag.node_count());
    for (const auto& [i, j] : dag.edges()) out.add_undirected(i, j);
    return out;
}

Pdag as_pdag(const Dag& dag) {
    Pdag out(dag.node_count());
    for (const auto& [i, j] : dag.edges()) out.add_directed(i, j);
    return out;
}

std::vector<std::array<int, 3>> v_structures(const Dag& dag) {
    std::vector<std::array<int, 3>> out;
    for (int k = 1; k <= dag.node_count(); ++k) {
        const auto& pa = dag.parents_of(k);
        for (auto it = pa.begin(); it != pa.end(); ++it) {
            for (auto jt = std::next(it); jt != pa.end(); ++jt) {
                if (!dag.adjacent(*it, *jt)) out.push_back({*it, k, *jt});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

bool directed_reaches(const Pdag& g, int from, int to) {
    if (from == to) return true;
    std::vector<char> seen(g.node_count() + 1, 0);
    std::deque<int> frontier{from};
    seen[from] = 1;
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop_front();
        for (int c : g.children_of(v)) {
            if (c == to) return true;
            if (!seen[c]) {
                seen[c] = 1;
                frontier.push_back(c);
            }
        }
    }
    return false;
}

// Rule 1: a -> b, b - c, a and c non-adjacent  =>  b -> c.
bool meek_rule1(const Pdag& g, int b, int c) {
    for (int a : g.parents_of(b))
        if (!g.adjacent(a, c)) return true;
    return false;
}

// Rule 2: a -> b -> c, a - c  =>  a -> c.
bool meek_rule2(const Pdag& g, int a, int c) {
    for (int b : g.children_of(a))
        if (g.has_directed(b, c)) return true;
    return false;
}

// Rule 3: a - b, a - c, a - d, c -> b, d -> b, c and d non-adjacent  =>  a -> b.
bool meek_rule3(const Pdag& g, int a, int b) {
    const auto& nb = g.neighbors_of(a);
    std::vector<int> into_b;
    for (int c : nb)
        if (g.has_directed(c, b)) into_b.push_back(c);
    for (std::size_t x = 0; x < into_b.size(); ++x)
        for (std::size_t y = x + 1; y < into_b.size(); ++y)
            if (!g.adjacent(into_b[x], into_b[y])) return true;
    return false;
}

// Rule 4: a - b with chains a - c -> d and c -> d -> b, c and b non-adjacent
// =>  a -> b.
bool meek_rule4(const Pdag& g, int a, int b) {
    for (int c : g.neighbors_of(a)) {
        if (c == b || g.adjacent(c, b)) continue;
        for (int d : g.children_of(c))
            if (g.has_directed(d, b)) return true;
    }
    return false;
}

}  // namespace

Pdag meek_closure(const Pdag& pdag, bool strict) {
    if (!pdag.directed_part_acyclic())
        throw InconsistentPdagError("meek_closure: directed edges already contain a cycle");
    Pdag g = pdag;
    std::set<Edge> refused;  // relaxed mode: orientations skipped to stay acyclic

    auto try_orient = [&](int x, int y) -> bool {
        if (refused.count({x, y})) return false;
        if (directed_reaches(g, y, x)) {
            if (strict)
                throw InconsistentPdagError("meek_closure: orienting " + edge_str(x, y) +
                                            " would create a directed cycle");
            refused.insert({x, y});
            return false;
        }
        g.orient(x, y);
        return true;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [u, v] : g.undirected_edges()) {
            if (!g.has_undirected(u, v)) continue;  // oriented earlier in this sweep
            for (const auto& [x, y] : {Edge{u, v}, Edge{v, u}}) {
                if (meek_rule1(g, x, y) || meek_rule2(g, x, y) || meek_rule3(g, x, y) ||
                    meek_rule4(g, x, y)) {
                    if (try_orient(x, y)) {
                        changed = true;
                        break;
                    }
                }
            }
        }
    }
    return g;
}

Pdag essential_graph(const Dag& dag) {
    Pdag g = skeleton(dag);
    for (const auto& [i, k, j] : v_structures(dag)) {
        if (g.has_undirected(i, k)) g.orient(i, k);
        if (g.has_undirected(j, k)) g.orient(j, k);
    }
    return meek_closure(g);
}

bool markov_equivalent(const Dag& a, const Dag& b) {
    if (a.node_count() != b.node_count())
        throw DataError("markov_equivalent: node counts differ");
    return skeleton(a) == skeleton(b) && v_structures(a) == v_structures(b);
}

std::vector<Edge> covered_edges(const Dag& dag) {
    std::vector<Edge> out;
    for (const auto& [i, j] : dag.edges()) {
        NodeSet expected = dag.parents_of(i);
        expected.insert(i);
        if (dag.parents_of(j) == expected) out.emplace_back(i, j);
    }
    return out;
}

Dag reverse_edge(const Dag& dag, int i, int j) {
    if (!dag.has_edge(i, j))
        throw DataError("reverse_edge: no edge " + edge_str(i, j));
    std::vector<Edge> edges = dag.edges();
    for (auto& e : edges)
        if (e == Edge{i, j}) e = {j, i};
    return Dag(dag.node_count(), edges);
}

std::vector<Dag> enumerate_mec(const Dag& dag, int guard) {
    if (dag.node_count() > guard)
        throw GuardExceededError("enumerate_mec: node count " +
                                     std::to_string(dag.node_count()) +
                                     " exceeds the enumeration guard " + std::to_string(guard),
                                 guard);
    std::map<std::vector<Edge>, Dag> found;
    std::deque<Dag> frontier{dag};
    found.emplace(dag.edges(), dag);
    while (!frontier.empty()) {
        const Dag g = frontier.front();
        frontier.pop_front();
        for (const auto& [i, j] : covered_edges(g)) {
            Dag flipped = reverse_edge(g, i, j);
            auto key = flipped.edges();
            if (found.emplace(std::move(key), flipped).second) frontier.push_back(flipped);
        }
    }
    std::vector<Dag> out;
    out.reserve(found.size());
    for (auto& [key, g] : found) out.push_back(std::move(g));
    return out;
}

Dag transitive_closure(const Dag& dag) {
    std::vector<Edge> edges;
    for (int i = 1; i <= dag.node_count(); ++i)
        for (int d : relatives(dag, i, Relative::Descendants)) edges.emplace_back(i, d);
    return Dag(dag.node_count(), edges);
}

bool is_consistent_order(const Permutation& perm, const Dag& dag) {
    if (perm.size() != dag.node_count())
        throw DataError("is_consistent_order: permutation size does not match node count");
    std::vector<int> pos(dag.node_count() + 1, 0);
    for (int k = 0; k < perm.size(); ++k) pos[perm.at(k)] = k;
    for (const auto& [i, j] : dag.edges())
        if (pos[i] >= pos[j]) return false;
    return true;
}

int max_undirected_clique(const Pdag& pdag) {
    const int p = pdag.node_count();
    if (p == 0) return 0;
    int best = 1;
    // Bron-Kerbosch with pivoting on the undirected subgraph.
    std::function<void(NodeSet&, NodeSet, NodeSet)> expand = [&](NodeSet& r, NodeSet cand,
                                                                 NodeSet excl) {
        if (cand.empty() && excl.empty()) {
            best = std::max(best, static_cast<int>(r.size()));
            return;
        }
        if (static_cast<int>(r.size() + cand.size()) <= best) return;
        int pivot = -1;
        std::size_t pivot_deg = 0;
        for (const NodeSet& side : {cand, excl}) {
            for (int u : side) {
                std::size_t deg = 0;
                for (int w : pdag.neighbors_of(u)) deg += cand.count(w);
                if (pivot == -1 || deg > pivot_deg) {
                    pivot = u;
                    pivot_deg = deg;
                }
            }
        }
        std::vector<int> branch;
        for (int v : cand)
            if (!pdag.neighbors_of(pivot).count(v)) branch.push_back(v);
        for (int v : branch) {
            NodeSet cand2, excl2;
            const auto& nv = pdag.neighbors_of(v);
            for (int w : cand)
                if (nv.count(w)) cand2.insert(w);
            for (int w : excl)
                if (nv.count(w)) excl2.insert(w);
            r.insert(v);
            expand(r, std::move(cand2), std::move(excl2));
            r.erase(v);
            cand.erase(v);
            excl.insert(v);
        }
    };
    NodeSet all;
    for (int v = 1; v <= p; ++v) all.insert(v);
    NodeSet r;
    expand(r, std::move(all), {});
    return best;
}

}  // namespace causalkit

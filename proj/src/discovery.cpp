#include "causalkit/discovery.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

#include "causalkit/errors.hpp"
#include "causalkit/rng.hpp"

namespace causalkit {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void check_provider_range(const CiProvider& provider, int p) {
    if (p < 1) throw DataError("discovery: p must be positive");
    if (p > provider.node_count())
        throw DataError("discovery: provider answers fewer nodes than requested");
}

// Visits the size-k subsets of the sorted pool in lexicographic order;
// stops early when the visitor returns true.
bool for_each_subset(const std::vector<int>& pool, int k,
                     const std::function<bool(const NodeSet&)>& visit) {
    const int n = static_cast<int>(pool.size());
    if (k > n) return false;
    std::vector<int> idx(k);
    for (int t = 0; t < k; ++t) idx[t] = t;
    while (true) {
        NodeSet s;
        for (int t : idx) s.insert(pool[t]);
        if (visit(s)) return true;
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) return false;
        ++idx[pos];
        for (int t = pos + 1; t < k; ++t) idx[t] = idx[t - 1] + 1;
    }
}

std::string order_to_string(const std::vector<int>& order) {
    std::ostringstream os;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k) os << ",";
        os << order[k];
    }
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------- PC

DiscoveryReport pc(CiProvider& provider, int p) {
    check_provider_range(provider, p);
    const auto t0 = Clock::now();
    const std::uint64_t q0 = provider.query_count();

    std::vector<NodeSet> adj(p + 1);
    for (int i = 1; i <= p; ++i)
        for (int j = 1; j <= p; ++j)
            if (i != j) adj[i].insert(j);

    std::map<Edge, NodeSet> sepset;  // keyed (min, max)

    for (int level = 0;; ++level) {
        for (int i = 1; i <= p; ++i) {
            for (int j = i + 1; j <= p; ++j) {
                if (!adj[i].count(j)) continue;
                bool removed = false;
                for (int side = 0; side < 2 && !removed; ++side) {
                    const int a = side == 0 ? i : j;
                    const int b = side == 0 ? j : i;
                    std::vector<int> pool(adj[a].begin(), adj[a].end());
                    pool.erase(std::remove(pool.begin(), pool.end(), b), pool.end());
                    for_each_subset(pool, level, [&](const NodeSet& s) {
                        if (provider.query(i, j, s)) {
                            adj[i].erase(j);
                            adj[j].erase(i);
                            sepset[{i, j}] = s;
                            removed = true;
                        }
                        return removed;
                    });
                }
            }
        }
        bool more = false;
        for (int i = 1; i <= p && !more; ++i)
            for (int j : adj[i])
                if (static_cast<int>(adj[i].size()) - 1 >= level + 1 ||
                    static_cast<int>(adj[j].size()) - 1 >= level + 1) {
                    more = true;
                    break;
                }
        if (!more) break;
    }

    // v-structures from the recorded separating sets; conflicting demands
    // cancel and leave the edge undirected
    std::set<Edge> demands;
    for (int k = 1; k <= p; ++k) {
        std::vector<int> nbrs(adj[k].begin(), adj[k].end());
        for (std::size_t a = 0; a < nbrs.size(); ++a) {
            for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
                const int i = nbrs[a], j = nbrs[b];
                if (adj[i].count(j)) continue;  // shielded
                auto it = sepset.find({std::min(i, j), std::max(i, j)});
                if (it == sepset.end()) continue;
                if (!it->second.count(k)) {
                    demands.insert({i, k});
                    demands.insert({j, k});
                }
            }
        }
    }

    Pdag g(p);
    for (int i = 1; i <= p; ++i)
        for (int j : adj[i])
            if (i < j) g.add_undirected(i, j);
    for (const auto& [a, b] : demands) {
        if (demands.count({b, a})) continue;  // conflict: stay undirected
        if (g.has_undirected(a, b)) g.orient(a, b);
    }
    g = meek_closure(g, /*strict=*/false);

    DiscoveryReport report;
    report.algorithm = "pc";
    report.output = std::move(g);
    report.ci_queries = provider.query_count() - q0;
    report.elapsed_ms = ms_since(t0);
    report.config["p"] = std::to_string(p);
    return report;
}

// ---------------------------------------------------------------- minimal I-MAP

Dag minimal_imap(CiProvider& provider, const Permutation& perm) {
    const int p = perm.size();
    check_provider_range(provider, p);
    std::vector<Edge> edges;
    NodeSet predecessors;
    for (int jpos = 0; jpos < p; ++jpos) {
        const int target = perm.at(jpos);
        for (int ipos = 0; ipos < jpos; ++ipos) {
            const int source = perm.at(ipos);
            NodeSet s = predecessors;
            s.erase(source);
            if (!provider.query(source, target, s)) edges.emplace_back(source, target);
        }
        predecessors.insert(target);
    }
    return Dag(p, edges);
}

// ---------------------------------------------------------------- SP

DiscoveryReport sp(CiProvider& provider, int p, int guard) {
    check_provider_range(provider, p);
    if (p > guard)
        throw GuardExceededError("sp: p=" + std::to_string(p) +
                                     " exceeds the permutation-enumeration guard " +
                                     std::to_string(guard) + " (raise --sp-max-p to override)",
                                 guard);
    const auto t0 = Clock::now();
    const std::uint64_t q0 = provider.query_count();

    std::vector<int> order(p);
    for (int i = 0; i < p; ++i) order[i] = i + 1;
    Dag best;
    std::size_t best_edges = 0;
    bool have_best = false;
    do {
        Dag imap = minimal_imap(provider, Permutation(order));
        if (!have_best || imap.edge_count() < best_edges) {
            best_edges = imap.edge_count();
            best = std::move(imap);
            have_best = true;
        }
    } while (std::next_permutation(order.begin(), order.end()));

    DiscoveryReport report;
    report.algorithm = "sp";
    report.output = essential_graph(best);
    report.ci_queries = provider.query_count() - q0;
    report.elapsed_ms = ms_since(t0);
    report.config["p"] = std::to_string(p);
    report.config["guard"] = std::to_string(guard);
    return report;
}

// ---------------------------------------------------------------- GSP

namespace {

// One greedy descent: repeatedly sweep the MEC of the current minimal
// I-MAP by covered-edge reversals for a member whose consistent
// permutation yields a strictly sparser minimal I-MAP. Sets truncated
// when the depth budget hid part of the final sweep.
Dag gsp_descend(CiProvider& provider, std::vector<int> order, int dfs_depth,
                bool& truncated, int& descents) {
    Dag current = minimal_imap(provider, Permutation(std::move(order)));
    for (bool improved = true; improved;) {
        improved = false;
        bool cut = false;
        std::set<std::vector<Edge>> visited{current.edges()};
        std::vector<std::pair<Dag, int>> stack{{current, 0}};
        while (!stack.empty() && !improved) {
            auto [g, depth] = std::move(stack.back());
            stack.pop_back();
            for (const auto& [i, j] : covered_edges(g)) {
                Dag flipped = reverse_edge(g, i, j);
                auto key = flipped.edges();
                if (visited.count(key)) continue;
                if (depth == dfs_depth) {
                    cut = true;  // unexplored member beyond the budget
                    continue;
                }
                visited.insert(std::move(key));
                Dag imap = minimal_imap(provider, Permutation(flipped.topological_order()));
                if (imap.edge_count() < current.edge_count()) {
                    current = std::move(imap);
                    improved = true;
                    ++descents;
                    break;
                }
                stack.emplace_back(std::move(flipped), depth + 1);
            }
        }
        if (!improved && cut) truncated = true;
    }
    return current;
}

}  // namespace

DiscoveryReport gsp(CiProvider& provider, int p, const GspOptions& options) {
    check_provider_range(provider, p);
    if (options.dfs_depth < 1) throw DataError("gsp: dfs_depth must be at least 1");
    if (options.restarts < 1) throw DataError("gsp: restarts must be at least 1");
    const auto t0 = Clock::now();
    const std::uint64_t q0 = provider.query_count();

    std::vector<std::vector<int>> starts;
    if (options.initial_order) {
        if (options.initial_order->size() != p)
            throw DataError("gsp: initial order size does not match p");
        starts.push_back(options.initial_order->order());
    } else {
        std::vector<int> order(p);
        for (int i = 0; i < p; ++i) order[i] = i + 1;
        Rng rng(options.seed);
        for (int r = 0; r < options.restarts; ++r) {
            for (int i = p - 1; i > 0; --i) {
                const auto k =
                    static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(i) + 1));
                std::swap(order[i], order[k]);
            }
            starts.push_back(order);
        }
    }

    bool truncated = false;
    int descents = 0;
    Dag best;
    bool have_best = false;
    for (const auto& start : starts) {
        Dag result = gsp_descend(provider, start, options.dfs_depth, truncated, descents);
        if (!have_best || result.edge_count() < best.edge_count()) {
            best = std::move(result);
            have_best = true;
        }
    }

    DiscoveryReport report;
    report.algorithm = "gsp";
    report.output = essential_graph(best);
    report.ci_queries = provider.query_count() - q0;
    report.elapsed_ms = ms_since(t0);
    report.converged = !truncated;
    report.config["p"] = std::to_string(p);
    report.config["dfs_depth"] = std::to_string(options.dfs_depth);
    report.config["seed"] = std::to_string(options.seed);
    report.config["restarts"] = std::to_string(static_cast<int>(starts.size()));
    report.config["initial_order"] = order_to_string(starts.front());
    report.config["descents"] = std::to_string(descents);
    return report;
}

// ---------------------------------------------------------------- GAS

PrefixSets::PrefixSets(std::vector<NodeSet> sets) : sets_(std::move(sets)) {
    if (sets_.empty() || !sets_.front().empty())
        throw DataError("PrefixSets: sequence must start at the empty set");
    for (std::size_t k = 1; k < sets_.size(); ++k)
        if (!std::includes(sets_[k].begin(), sets_[k].end(), sets_[k - 1].begin(),
                           sets_[k - 1].end()))
            throw DataError("PrefixSets: sequence must be nested");
}

namespace {

struct GasState {
    CiProvider& provider;
    int p;
    std::vector<int> all_nodes;
    std::map<Edge, bool> adjacent;  // pair adjacency verdicts for this run
};

// a ~ b iff no conditioning set at all separates them. Scanned by subset
// size so separable pairs resolve early; queries hit the provider cache.
bool ci_adjacent(GasState& st, int a, int b) {
    const Edge key{std::min(a, b), std::max(a, b)};
    if (auto it = st.adjacent.find(key); it != st.adjacent.end()) return it->second;
    std::vector<int> pool;
    for (int v : st.all_nodes)
        if (v != a && v != b) pool.push_back(v);
    bool separated = false;
    for (int k = 0; k <= static_cast<int>(pool.size()) && !separated; ++k) {
        for_each_subset(pool, k, [&](const NodeSet& s) {
            separated = st.provider.query(a, b, s);
            return separated;
        });
    }
    st.adjacent.emplace(key, !separated);
    return !separated;
}

// u and c can be screened off by conditioning on placed nodes only. When
// they cannot, their coupling runs through unplaced structure on the
// parent side of c (descendants of an unplaced candidate are unplaced and
// cannot open colliders below c).
bool separable_by_placed(GasState& st, const NodeSet& placed, int u, int c) {
    std::vector<int> pool(placed.begin(), placed.end());
    bool separated = false;
    for (int k = 0; k <= static_cast<int>(pool.size()) && !separated; ++k) {
        for_each_subset(pool, k, [&](const NodeSet& t) {
            separated = st.provider.query(u, c, t);
            return separated;
        });
    }
    return separated;
}

// A candidate is blocked while some certificate exhibits an unplaced
// ancestor of it. If every parent of the candidate were already placed,
// then (a) every placed non-adjacent node would be screened off from the
// candidate by the rest of the prefix, and (b) any pair unblocked by
// conditioning on the candidate would have its endpoints separable from
// the candidate using placed nodes alone (paths through the candidate's
// unplaced descendants cannot be opened by placed colliders). Violating
// (a) is the Meek-rule-1 certificate with the conditioning set grown to
// the current prefix; violating (b) is the v-structure certificate.
bool gas_blocked(GasState& st, const NodeSet& placed, int c) {
    // Meek-rule-1 certificates: a placed node that stays coupled to the
    // candidate given the rest of the prefix, despite being non-adjacent,
    // is coupled through an unplaced ancestor.
    for (int i : placed) {
        NodeSet base = placed;
        base.erase(i);
        if (st.provider.query(i, c, base)) continue;  // screened off
        if (!ci_adjacent(st, i, c)) return true;
    }
    // v-structure certificates
    for (int x : st.all_nodes) {
        if (x == c) continue;
        for (int y : st.all_nodes) {
            if (y <= x || y == c) continue;
            const bool x_unplaced = !placed.count(x);
            const bool y_unplaced = !placed.count(y);
            if (!x_unplaced && !y_unplaced) continue;
            std::vector<int> pool;
            for (int v : st.all_nodes)
                if (v != x && v != y && v != c) pool.push_back(v);
            bool fired = false;
            for (int k = 0; k <= static_cast<int>(pool.size()) && !fired; ++k) {
                for_each_subset(pool, k, [&](const NodeSet& s) {
                    if (!st.provider.query(x, y, s)) return false;
                    NodeSet with_c = s;
                    with_c.insert(c);
                    fired = !st.provider.query(x, y, with_c);
                    return fired;
                });
            }
            if (!fired) continue;
            if (x_unplaced && !separable_by_placed(st, placed, x, c)) return true;
            if (y_unplaced && !separable_by_placed(st, placed, y, c)) return true;
        }
    }
    return false;
}

}  // namespace

DiscoveryReport gas(CiProvider& provider, int p) {
    check_provider_range(provider, p);
    const auto t0 = Clock::now();
    const std::uint64_t q0 = provider.query_count();

    GasState st{provider, p, {}, {}};
    for (int v = 1; v <= p; ++v) st.all_nodes.push_back(v);

    NodeSet placed;
    std::vector<int> order;
    std::vector<NodeSet> grown{{}};
    while (static_cast<int>(placed.size()) < p) {
        bool progress = false;
        for (int c : st.all_nodes) {
            if (placed.count(c)) continue;
            if (gas_blocked(st, placed, c)) continue;
            placed.insert(c);
            order.push_back(c);
            progress = true;
        }
        if (!progress)
            throw StuckPrefixError(
                "gas: no admissible node beyond prefix {" +
                    order_to_string({placed.begin(), placed.end()}) +
                    "}; the answer source violates faithfulness",
                placed);
        grown.push_back(placed);
    }
    const PrefixSets prefixes(std::move(grown));

    Dag learned = minimal_imap(provider, Permutation(order));

    DiscoveryReport report;
    report.algorithm = "gas";
    report.output = essential_graph(learned);
    report.ci_queries = provider.query_count() - q0;
    report.elapsed_ms = ms_since(t0);
    report.config["p"] = std::to_string(p);
    report.config["order"] = order_to_string(order);
    std::string prefix_echo;
    for (std::size_t k = 0; k < prefixes.sets().size(); ++k) {
        if (k) prefix_echo += ";";
        const auto& s = prefixes.sets()[k];
        prefix_echo += "{" + order_to_string({s.begin(), s.end()}) + "}";
    }
    report.config["prefix_sets"] = prefix_echo;
    return report;
}

// ---------------------------------------------------------------- interventional orientation

Pdag interventional_orient(const Pdag& base,
                           const std::vector<InterventionEvidence>& evidence) {
    if (!base.directed_part_acyclic())
        throw InconsistentPdagError("interventional_orient: base directed edges are cyclic");

    std::set<Edge> demands;
    for (const auto& ev : evidence) {
        for (int t : ev.targets)
            if (t < 1 || t > base.node_count())
                throw DataError("interventional_orient: target node out of range");
        std::map<int, bool> changed;
        for (const auto& inv : ev.invariance) {
            if (inv.node < 1 || inv.node > base.node_count())
                throw DataError("interventional_orient: invariance node out of range");
            changed[inv.node] = inv.changed;
        }
        for (const auto& [a, b] : base.undirected_edges()) {
            for (const auto& [u, v] : {Edge{a, b}, Edge{b, a}}) {
                if (!ev.targets.count(u) || ev.targets.count(v)) continue;
                auto it = changed.find(v);
                if (it == changed.end()) continue;
                if (it->second)
                    demands.insert({u, v});  // v downstream of the target
                else
                    demands.insert({v, u});  // v invariant, so not downstream
            }
        }
    }

    std::vector<Edge> conflicts;
    for (const auto& [a, b] : demands)
        if (a < b && demands.count({b, a})) conflicts.emplace_back(a, b);
    if (!conflicts.empty()) {
        std::string msg = "interventional_orient: conflicting orientation demands on";
        for (const auto& [a, b] : conflicts)
            msg += " (" + std::to_string(a) + "," + std::to_string(b) + ")";
        throw OrientationConflictError(msg, conflicts);
    }

    Pdag g = base;
    for (const auto& [a, b] : demands)
        if (g.has_undirected(a, b)) g.orient(a, b);
    return meek_closure(g, /*strict=*/true);
}

}  // namespace causalkit

#include "causalkit/sem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "causalkit/errors.hpp"
#include "causalkit/rng.hpp"

namespace causalkit {

// ---------------------------------------------------------------- Intervention

Intervention::Intervention(std::vector<Mechanism> mechanisms)
    : mechanisms_(std::move(mechanisms)) {
    NodeSet seen;
    for (const auto& m : mechanisms_) {
        if (m.node < 1) throw DataError("Intervention: target node must be positive");
        if (!seen.insert(m.node).second)
            throw DataError("Intervention: node " + std::to_string(m.node) +
                            " targeted more than once");
        if (m.kind == InterventionKind::ScaleNoise && m.value <= 0.0)
            throw DataError("Intervention: noise scale factor must be positive");
    }
}

NodeSet Intervention::targets() const {
    NodeSet out;
    for (const auto& m : mechanisms_) out.insert(m.node);
    return out;
}

// ---------------------------------------------------------------- LinearGaussianSem

LinearGaussianSem::LinearGaussianSem(Dag dag, std::map<Edge, double> weights,
                                     std::vector<double> noise_vars,
                                     std::vector<double> noise_means)
    : dag_(std::move(dag)),
      weights_(std::move(weights)),
      noise_vars_(std::move(noise_vars)),
      noise_means_(std::move(noise_means)) {
    const int p = dag_.node_count();
    if (noise_means_.empty()) noise_means_.assign(p, 0.0);
    if (static_cast<int>(noise_vars_.size()) != p)
        throw DataError("SEM: noise_vars must have one entry per node");
    if (static_cast<int>(noise_means_.size()) != p)
        throw DataError("SEM: noise_means must have one entry per node");
    if (weights_.size() != dag_.edge_count())
        throw DataError("SEM: weight support must equal the edge set");
    for (const auto& [edge, w] : weights_) {
        if (!dag_.has_edge(edge.first, edge.second))
            throw DataError("SEM: weight on non-edge (" + std::to_string(edge.first) + "," +
                            std::to_string(edge.second) + ")");
        (void)w;
    }
    for (int i = 1; i <= p; ++i) {
        const double v = noise_vars_[i - 1];
        if (v < 0.0) throw DataError("SEM: negative noise variance at node " + std::to_string(i));
        if (v == 0.0 && !dag_.parents_of(i).empty())
            throw DataError("SEM: zero variance requires an empty parent set (node " +
                            std::to_string(i) + ")");
    }
}

double LinearGaussianSem::weight(int i, int j) const {
    auto it = weights_.find({i, j});
    if (it == weights_.end())
        throw DataError("SEM: no weight for edge (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
    return it->second;
}

// ---------------------------------------------------------------- generators

Dag random_dag(int p, double density, std::uint64_t seed) {
    if (p < 1) throw DataError("random_dag: p must be positive");
    if (density < 0.0 || density > 1.0) throw DataError("random_dag: density not in [0,1]");
    Rng rng(seed);
    std::vector<int> order(p);
    for (int i = 0; i < p; ++i) order[i] = i + 1;
    for (int i = p - 1; i > 0; --i) {  // Fisher-Yates
        const auto k = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(i) + 1));
        std::swap(order[i], order[k]);
    }
    std::vector<Edge> edges;
    for (int a = 0; a < p; ++a)
        for (int b = a + 1; b < p; ++b)
            if (rng.uniform() < density) edges.emplace_back(order[a], order[b]);
    return Dag(p, edges);
}

LinearGaussianSem random_sem(const Dag& dag, double lo, double hi, std::uint64_t seed) {
    if (lo <= 0.0) throw DataError("random_sem: weight box lower bound must be positive");
    if (hi <= lo) throw DataError("random_sem: weight box must satisfy lo < hi");
    Rng rng(seed);
    std::map<Edge, double> weights;
    for (const auto& e : dag.edges()) {
        const double magnitude = rng.uniform(lo, hi);
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        weights[e] = sign * magnitude;
    }
    return LinearGaussianSem(dag, std::move(weights),
                             std::vector<double>(dag.node_count(), 1.0));
}

// ---------------------------------------------------------------- moments

namespace {

// I - W^T where W(i-1, j-1) = a_ij. Then X = (I - W^T)^{-1} e.
Eigen::MatrixXd structure_matrix(const LinearGaussianSem& sem) {
    const int p = sem.node_count();
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p, p);
    for (const auto& [edge, w] : sem.weights()) m(edge.second - 1, edge.first - 1) -= w;
    return m;
}

}  // namespace

Eigen::MatrixXd covariance(const LinearGaussianSem& sem) {
    const int p = sem.node_count();
    const Eigen::MatrixXd m = structure_matrix(sem);
    const Eigen::MatrixXd inv = m.partialPivLu().inverse();
    Eigen::VectorXd d(p);
    for (int i = 1; i <= p; ++i) d(i - 1) = sem.noise_var(i);
    return inv * d.asDiagonal() * inv.transpose();
}

Eigen::VectorXd mean_vector(const LinearGaussianSem& sem) {
    const int p = sem.node_count();
    Eigen::VectorXd m(p);
    for (int i = 1; i <= p; ++i) m(i - 1) = sem.noise_mean(i);
    return structure_matrix(sem).partialPivLu().solve(m);
}

Eigen::MatrixXd sample(const LinearGaussianSem& sem, int n, std::uint64_t seed) {
    if (n < 1) throw DataError("sample: n must be positive");
    const int p = sem.node_count();
    const std::vector<int> order = sem.dag().topological_order();
    Rng rng(seed);
    Eigen::MatrixXd out(n, p);
    std::vector<double> sd(p + 1, 0.0);
    for (int i = 1; i <= p; ++i) sd[i] = std::sqrt(sem.noise_var(i));
    for (int row = 0; row < n; ++row) {
        for (int v : order) {
            double x = sem.noise_mean(v);
            if (sd[v] > 0.0) x += sd[v] * rng.normal();
            for (int parent : sem.dag().parents_of(v))
                x += sem.weight(parent, v) * out(row, parent - 1);
            out(row, v - 1) = x;
        }
    }
    return out;
}

LinearGaussianSem apply_intervention(const LinearGaussianSem& sem,
                                     const Intervention& intervention) {
    const int p = sem.node_count();
    for (int t : intervention.targets())
        if (t < 1 || t > p)
            throw DataError("apply_intervention: target " + std::to_string(t) +
                            " out of range");

    std::map<Edge, double> weights = sem.weights();
    std::vector<double> vars = sem.noise_vars();
    std::vector<double> means = sem.noise_means();
    NodeSet cut;  // nodes whose incoming edges are removed

    for (const auto& m : intervention.mechanisms()) {
        switch (m.kind) {
            case InterventionKind::Do:
                cut.insert(m.node);
                vars[m.node - 1] = 0.0;
                means[m.node - 1] = m.value;
                break;
            case InterventionKind::Shift:
                means[m.node - 1] += m.value;
                break;
            case InterventionKind::ScaleNoise:
                vars[m.node - 1] *= m.value;
                break;
        }
    }

    std::vector<Edge> edges;
    for (const auto& e : sem.dag().edges()) {
        if (cut.count(e.second)) {
            weights.erase(e);
            continue;
        }
        edges.push_back(e);
    }
    return LinearGaussianSem(Dag(p, edges), std::move(weights), std::move(vars),
                             std::move(means));
}

}  // namespace causalkit

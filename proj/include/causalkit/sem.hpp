#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <vector>

#include "causalkit/graph.hpp"

namespace causalkit {

enum class InterventionKind { Do, Shift, ScaleNoise };

struct Mechanism {
    int node = 0;
    InterventionKind kind = InterventionKind::Do;
    double value = 0.0;
};

// A set of intervention targets with one modified mechanism per target. An
// empty mechanism list represents the observational regime.
class Intervention {
public:
    Intervention() = default;
    explicit Intervention(std::vector<Mechanism> mechanisms);
    static Intervention observational() { return Intervention(); }

    bool is_observational() const { return mechanisms_.empty(); }
    const std::vector<Mechanism>& mechanisms() const { return mechanisms_; }
    NodeSet targets() const;

private:
    std::vector<Mechanism> mechanisms_;
};

// Linear-Gaussian structural equation model: X_j = sum_i a_ij X_i + e_j
// with e_j ~ N(mean_j, var_j) independent. The weight map's support must
// equal the DAG's edge set; var_j = 0 is only allowed for parentless nodes
// (the do-intervention encoding).
class LinearGaussianSem {
public:
    LinearGaussianSem() = default;
    LinearGaussianSem(Dag dag, std::map<Edge, double> weights,
                      std::vector<double> noise_vars,
                      std::vector<double> noise_means = {});

    const Dag& dag() const { return dag_; }
    int node_count() const { return dag_.node_count(); }
    double weight(int i, int j) const;
    const std::map<Edge, double>& weights() const { return weights_; }
    double noise_var(int i) const { return noise_vars_.at(i - 1); }
    double noise_mean(int i) const { return noise_means_.at(i - 1); }
    const std::vector<double>& noise_vars() const { return noise_vars_; }
    const std::vector<double>& noise_means() const { return noise_means_; }

private:
    Dag dag_;
    std::map<Edge, double> weights_;
    std::vector<double> noise_vars_;
    std::vector<double> noise_means_;
};

// Random DAG: a uniform random permutation fixes a topological order, then
// each compatible pair becomes an edge independently with the given
// probability. MEC-size statistics depend on this choice of model.
Dag random_dag(int p, double density, std::uint64_t seed);

// Random SEM over a DAG: each weight drawn uniformly from +-[lo, hi] with a
// random sign, unit noise variances, zero noise means. Requires 0 < lo < hi;
// the gap below lo keeps instances away from near-cancellation.
LinearGaussianSem random_sem(const Dag& dag, double lo, double hi, std::uint64_t seed);

// Exact covariance of the induced joint Gaussian.
Eigen::MatrixXd covariance(const LinearGaussianSem& sem);

// Exact mean vector of the induced joint Gaussian.
Eigen::VectorXd mean_vector(const LinearGaussianSem& sem);

// n i.i.d. rows sampled in topological order. Zero-variance nodes are
// assigned deterministically (no degenerate normal draws).
Eigen::MatrixXd sample(const LinearGaussianSem& sem, int n, std::uint64_t seed);

// The SEM of the interventional distribution: do(v) cuts incoming edges and
// pins the node at v; shift(d) adds d to the noise mean; scale(f)
// multiplies the noise variance by f > 0. Non-targets are untouched.
LinearGaussianSem apply_intervention(const LinearGaussianSem& sem,
                                     const Intervention& intervention);

}  // namespace causalkit

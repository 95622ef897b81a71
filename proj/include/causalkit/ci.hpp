#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "causalkit/graph.hpp"

namespace causalkit {

// One conditional-independence question: is X_i independent of X_j given
// X_S? Requires i != j and i, j outside S.
struct CiQuery {
    int i = 0;
    int j = 0;
    NodeSet s;
};

// Answer source for conditional-independence queries. query() returns true
// when X_i and X_j are judged independent given X_S. Answers are cached per
// provider instance (key symmetric in i, j) and the counter advances only
// on cache misses, so repeated queries are free. Safe to query from several
// threads.
class CiProvider {
public:
    virtual ~CiProvider() = default;

    bool query(int i, int j, const NodeSet& s);
    bool query(const CiQuery& q) { return query(q.i, q.j, q.s); }
    std::uint64_t query_count() const;
    int node_count() const { return p_; }

protected:
    explicit CiProvider(int p);
    virtual bool answer(int i, int j, const std::vector<int>& s) const = 0;

private:
    struct MaskKey {
        std::uint32_t lo, hi;
        std::uint64_t mask;
        bool operator==(const MaskKey&) const = default;
    };
    struct MaskKeyHash {
        std::size_t operator()(const MaskKey& k) const {
            std::uint64_t h = k.mask * 0x9E3779B97F4A7C15ULL;
            h ^= (std::uint64_t(k.lo) << 32 | k.hi) + (h << 6) + (h >> 2);
            return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ULL);
        }
    };

    int p_;
    mutable std::mutex mu_;
    std::uint64_t count_ = 0;
    std::unordered_map<MaskKey, bool, MaskKeyHash> cache_;        // when p <= 64
    std::map<std::vector<int>, bool> wide_cache_;                 // fallback
};

// Exact oracle: independent iff d-separated in the graph.
class GraphOracle final : public CiProvider {
public:
    explicit GraphOracle(Dag dag);
    const Dag& dag() const { return dag_; }

protected:
    bool answer(int i, int j, const std::vector<int>& s) const override;

private:
    Dag dag_;
};

// Exact oracle over a covariance matrix: independent iff the magnitude of
// the partial correlation is within tolerance. The tolerance plays the role
// of the lambda in lambda-strong faithfulness.
class CovarianceOracle final : public CiProvider {
public:
    explicit CovarianceOracle(Eigen::MatrixXd covariance, double tolerance = 1e-8);

protected:
    bool answer(int i, int j, const std::vector<int>& s) const override;

private:
    Eigen::MatrixXd cov_;
    double tol_;
};

// Finite-sample Gaussian tester (Fisher z) over an n x p sample matrix.
class FisherZProvider final : public CiProvider {
public:
    explicit FisherZProvider(const Eigen::MatrixXd& samples, double alpha = 0.01);
    double alpha() const { return alpha_; }

protected:
    bool answer(int i, int j, const std::vector<int>& s) const override;

private:
    Eigen::MatrixXd cov_;  // sample covariance
    std::int64_t n_;
    double alpha_;
};

// Partial correlation of X_i and X_j given X_S from a covariance matrix,
// via inversion of the principal submatrix on {i, j} u S. Nodes are
// 1-based. Throws DataError when the submatrix is numerically singular.
double partial_correlation(const Eigen::MatrixXd& cov, int i, int j, const NodeSet& s);

// Fisher z test on raw samples: independent iff
// |sqrt(n - |S| - 3) * atanh(rho_hat)| <= z_{1 - alpha/2}.
bool fisher_z_test(const Eigen::MatrixXd& samples, int i, int j, const NodeSet& s,
                   double alpha);

// Outcome of a marginal two-sample comparison for one node under one
// intervention. statistic holds the smaller of the two test p-values
// (1.0 for the degenerate exact-equality path, 0.0 for exact inequality).
struct InvarianceResult {
    int intervention_id = 0;
    int node = 0;
    bool changed = false;
    double statistic = 1.0;
};

// Two-sample test of whether the marginal distribution of X_j changed:
// a mean z-test and a variance F-test, Bonferroni-combined at level alpha.
// Zero-variance samples fall back to exact comparison of mean and variance.
InvarianceResult marginal_invariance_test(const std::vector<double>& observational,
                                          const std::vector<double>& interventional,
                                          double alpha, int intervention_id = 0,
                                          int node = 0);

// Sample covariance (denominator n - 1) of an n x p sample matrix.
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& samples);

}  // namespace causalkit

#include "causalkit/ci.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "causalkit/errors.hpp"
#include "causalkit/stats.hpp"

namespace causalkit {

// ---------------------------------------------------------------- CiProvider

CiProvider::CiProvider(int p) : p_(p) {
    if (p < 1) throw DataError("CiProvider: node count must be positive");
}

bool CiProvider::query(int i, int j, const NodeSet& s) {
    if (i < 1 || i > p_ || j < 1 || j > p_)
        throw DataError("CiProvider: query node out of range");
    if (i == j) throw DataError("CiProvider: query nodes must differ");
    if (s.count(i) || s.count(j))
        throw DataError("CiProvider: conditioning set overlaps query nodes");
    for (int v : s)
        if (v < 1 || v > p_) throw DataError("CiProvider: conditioning node out of range");

    const int lo = std::min(i, j), hi = std::max(i, j);
    std::vector<int> sv(s.begin(), s.end());

    std::unique_lock<std::mutex> lock(mu_);
    if (p_ <= 64) {
        MaskKey key{static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(hi), 0};
        for (int v : sv) key.mask |= std::uint64_t{1} << (v - 1);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const bool verdict = answer(lo, hi, sv);
        ++count_;
        cache_.emplace(key, verdict);
        return verdict;
    }
    std::vector<int> key;
    key.reserve(sv.size() + 2);
    key.push_back(lo);
    key.push_back(hi);
    key.insert(key.end(), sv.begin(), sv.end());
    auto it = wide_cache_.find(key);
    if (it != wide_cache_.end()) return it->second;
    const bool verdict = answer(lo, hi, sv);
    ++count_;
    wide_cache_.emplace(std::move(key), verdict);
    return verdict;
}

std::uint64_t CiProvider::query_count() const {
    std::unique_lock<std::mutex> lock(mu_);
    return count_;
}

// ---------------------------------------------------------------- GraphOracle

GraphOracle::GraphOracle(Dag dag) : CiProvider(dag.node_count()), dag_(std::move(dag)) {}

bool GraphOracle::answer(int i, int j, const std::vector<int>& s) const {
    return is_d_separated(dag_, i, j, NodeSet(s.begin(), s.end()));
}

// ---------------------------------------------------------------- CovarianceOracle

CovarianceOracle::CovarianceOracle(Eigen::MatrixXd covariance, double tolerance)
    : CiProvider(static_cast<int>(covariance.rows())),
      cov_(std::move(covariance)),
      tol_(tolerance) {
    if (cov_.rows() != cov_.cols()) throw DataError("CovarianceOracle: matrix not square");
    if (tol_ < 0) throw DataError("CovarianceOracle: negative tolerance");
}

bool CovarianceOracle::answer(int i, int j, const std::vector<int>& s) const {
    const double rho = partial_correlation(cov_, i, j, NodeSet(s.begin(), s.end()));
    return std::fabs(rho) <= tol_;
}

// ---------------------------------------------------------------- FisherZProvider

FisherZProvider::FisherZProvider(const Eigen::MatrixXd& samples, double alpha)
    : CiProvider(static_cast<int>(samples.cols())),
      cov_(sample_covariance(samples)),
      n_(samples.rows()),
      alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("FisherZProvider: alpha not in (0,1)");
    for (int c = 0; c < cov_.cols(); ++c)
        if (cov_(c, c) <= 0.0)
            throw DataError("FisherZProvider: column X" + std::to_string(c + 1) +
                            " is constant");
}

bool FisherZProvider::answer(int i, int j, const std::vector<int>& s) const {
    const auto m = static_cast<std::int64_t>(s.size());
    if (n_ <= m + 3)
        throw DataError("fisher z: need n > |S| + 3 (n=" + std::to_string(n_) +
                        ", |S|=" + std::to_string(m) + ")");
    double rho = partial_correlation(cov_, i, j, NodeSet(s.begin(), s.end()));
    const double eps = 1e-12;
    rho = std::clamp(rho, -1.0 + eps, 1.0 - eps);
    const double z = std::sqrt(static_cast<double>(n_ - m - 3)) * std::atanh(rho);
    return std::fabs(z) <= stats::normal_quantile(1.0 - alpha_ / 2.0);
}

// ---------------------------------------------------------------- free functions

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& samples) {
    const auto n = samples.rows();
    if (n < 2) throw DataError("sample_covariance: need at least two rows");
    const Eigen::RowVectorXd mu = samples.colwise().mean();
    const Eigen::MatrixXd centered = samples.rowwise() - mu;
    return centered.transpose() * centered / static_cast<double>(n - 1);
}

double partial_correlation(const Eigen::MatrixXd& cov, int i, int j, const NodeSet& s) {
    const int p = static_cast<int>(cov.rows());
    auto check = [&](int v) {
        if (v < 1 || v > p)
            throw DataError("partial_correlation: node " + std::to_string(v) +
                            " out of range");
    };
    check(i);
    check(j);
    if (i == j) throw DataError("partial_correlation: nodes must differ");
    if (s.count(i) || s.count(j))
        throw DataError("partial_correlation: conditioning set overlaps the pair");
    for (int v : s) check(v);

    std::vector<int> idx{i - 1, j - 1};
    for (int v : s) idx.push_back(v - 1);
    const int m = static_cast<int>(idx.size());
    Eigen::MatrixXd sub(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) sub(a, b) = cov(idx[a], idx[b]);

    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (!lu.isInvertible())
        throw DataError("partial_correlation: conditioning submatrix is singular");
    const Eigen::MatrixXd prec = lu.inverse();
    const double denom = prec(0, 0) * prec(1, 1);
    if (!(denom > 0.0))
        throw DataError("partial_correlation: non-positive precision diagonal");
    const double rho = -prec(0, 1) / std::sqrt(denom);
    return std::clamp(rho, -1.0, 1.0);
}

bool fisher_z_test(const Eigen::MatrixXd& samples, int i, int j, const NodeSet& s,
                   double alpha) {
    FisherZProvider provider(samples, alpha);
    return provider.query(i, j, s);
}

InvarianceResult marginal_invariance_test(const std::vector<double>& observational,
                                          const std::vector<double>& interventional,
                                          double alpha, int intervention_id, int node) {
    if (observational.empty() || interventional.empty())
        throw DataError("marginal_invariance_test: empty sample set");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DataError("marginal_invariance_test: alpha not in (0,1)");

    InvarianceResult res;
    res.intervention_id = intervention_id;
    res.node = node;

    const auto n1 = static_cast<double>(observational.size());
    const auto n2 = static_cast<double>(interventional.size());
    const double m1 = stats::mean(observational);
    const double m2 = stats::mean(interventional);
    const double v1 = observational.size() > 1 ? stats::variance(observational) : 0.0;
    const double v2 = interventional.size() > 1 ? stats::variance(interventional) : 0.0;

    if (v1 == 0.0 || v2 == 0.0) {
        res.changed = !(m1 == m2 && v1 == v2);
        res.statistic = res.changed ? 0.0 : 1.0;
        return res;
    }

    // mean z-test
    const double z = (m1 - m2) / std::sqrt(v1 / n1 + v2 / n2);
    const double p_mean = std::erfc(std::fabs(z) / std::sqrt(2.0));
    // variance F-test, two-sided
    const double f = v1 / v2;
    const double cdf = stats::f_cdf(f, n1 - 1.0, n2 - 1.0);
    const double p_var = std::min(1.0, 2.0 * std::min(cdf, 1.0 - cdf));

    res.statistic = std::min(p_mean, p_var);
    res.changed = res.statistic < alpha / 2.0;  // Bonferroni over the two tests
    return res;
}

}  // namespace causalkit

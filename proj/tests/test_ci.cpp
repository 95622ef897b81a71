#include <doctest.h>

#include <cmath>

#include "causalkit/ci.hpp"
#include "causalkit/errors.hpp"
#include "causalkit/rng.hpp"
#include "causalkit/sem.hpp"
#include "causalkit/stats.hpp"
#include "test_oracles.hpp"

using namespace causalkit;
namespace oracle = test_oracles;

namespace {

// Example-1 parametrization: X1 -> X2 -> X3 plus X1 -> X3, unit noise.
LinearGaussianSem three_node_sem(double a12, double a13, double a23) {
    return LinearGaussianSem(Dag(3, {{1, 2}, {1, 3}, {2, 3}}),
                             {{{1, 2}, a12}, {{1, 3}, a13}, {{2, 3}, a23}},
                             {1.0, 1.0, 1.0});
}

}  // namespace

TEST_CASE("stats primitives against hand-derivable values") {
    CHECK(stats::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(stats::normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(stats::normal_cdf(stats::normal_quantile(0.01)) == doctest::Approx(0.01));
    // I_x(1,1) = x; I_x(1,b) = 1-(1-x)^b; I_{1/4}(1/2,1/2) = (2/pi) asin(1/2) = 1/3
    CHECK(stats::regularized_incomplete_beta(1, 1, 0.3) == doctest::Approx(0.3));
    CHECK(stats::regularized_incomplete_beta(1, 4, 0.2) ==
          doctest::Approx(1.0 - std::pow(0.8, 4)));
    CHECK(stats::regularized_incomplete_beta(0.5, 0.5, 0.25) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    // F(d, d) has median 1
    CHECK(stats::f_cdf(1.0, 7, 7) == doctest::Approx(0.5));
    CHECK(stats::f_cdf(1.0, 1, 1) == doctest::Approx(0.5));
}

TEST_CASE("graph oracle answers are exactly d-separation") {
    for (int p = 3; p <= 5; ++p) {
        for (int inst = 0; inst < 10; ++inst) {
            const Dag g = random_dag(p, 0.5, derive_seed(200 + p, inst));
            GraphOracle provider{g};
            for (int i = 1; i <= p; ++i)
                for (int j = i + 1; j <= p; ++j)
                    for (const auto& s : oracle::all_conditioning_sets(p, {i, j}))
                        REQUIRE(provider.query(i, j, s) == is_d_separated(g, i, j, s));
        }
    }
}

TEST_CASE("covariance oracle on exact SEM covariance matches the graph oracle") {
    for (int p = 3; p <= 6; ++p) {
        for (int inst = 0; inst < 6; ++inst) {
            const Dag g = random_dag(p, 0.5, derive_seed(300 + p, inst));
            const LinearGaussianSem sem = random_sem(g, 0.25, 1.0, derive_seed(310 + p, inst));
            CovarianceOracle cov_provider{covariance(sem), 1e-9};
            for (int i = 1; i <= p; ++i)
                for (int j = i + 1; j <= p; ++j)
                    for (const auto& s : oracle::all_conditioning_sets(p, {i, j})) {
                        CAPTURE(p);
                        CAPTURE(inst);
                        REQUIRE(cov_provider.query(i, j, s) == is_d_separated(g, i, j, s));
                    }
        }
    }
}

TEST_CASE("partial correlation worked examples") {
    // path cancellation: cov(X1,X3) = a13 + a12*a23 = 0
    const Eigen::MatrixXd cov = covariance(three_node_sem(1.0, 1.0, -1.0));
    CHECK(partial_correlation(cov, 1, 3, {}) == doctest::Approx(0.0).epsilon(1e-12));

    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(4, 4);
    CHECK(partial_correlation(eye, 1, 3, {2}) == doctest::Approx(0.0));

    Eigen::MatrixXd pair(2, 2);
    pair << 1.0, 0.5, 0.5, 1.0;
    CHECK(partial_correlation(pair, 1, 2, {}) == doctest::Approx(0.5));

    Eigen::MatrixXd singular(3, 3);
    singular << 1, 1, 0, 1, 1, 0, 0, 0, 1;
    CHECK_THROWS_AS(partial_correlation(singular, 1, 3, {2}), DataError);
    CHECK_THROWS_AS(partial_correlation(pair, 1, 1, {}), DataError);
}

TEST_CASE("fisher z statistic formula") {
    // atanh(0.2) = ln(1.5)/2
    CHECK(std::atanh(0.2) == doctest::Approx(std::log(1.5) / 2.0));
    // n=103, |S|=0, rho=0.2: statistic exceeds the 5% cutoff
    const double statistic = std::sqrt(103.0 - 3.0) * std::atanh(0.2);
    CHECK(statistic == doctest::Approx(2.027325540540822));
    CHECK(statistic > stats::normal_quantile(0.975));
}

TEST_CASE("fisher z test on constructed samples") {
    // x and z sample-orthogonal with zero means, y = r*x + c*z scaled so the
    // sample correlation of (x, y) is exactly r
    auto build = [](double r, double c) {
        Eigen::MatrixXd m(20, 2);
        for (int k = 0; k < 20; ++k) {
            const double x = k % 2 == 0 ? 1.0 : -1.0;
            const double z = (k % 4 < 2) ? 1.0 : -1.0;
            m(k, 0) = x;
            m(k, 1) = r * x + c * z;
        }
        return m;
    };
    // r=0.2: statistic sqrt(17)*atanh(0.2) ~ 0.84, accepted at 5%
    CHECK(fisher_z_test(build(0.2, std::sqrt(0.96)), 1, 2, {}, 0.05));
    // r=0.8: statistic sqrt(17)*atanh(0.8) ~ 4.53, rejected
    CHECK_FALSE(fisher_z_test(build(0.8, 0.6), 1, 2, {}, 0.05));
    // rho exactly 0 is always accepted
    CHECK(fisher_z_test(build(0.0, 1.0), 1, 2, {}, 0.05));

    Eigen::MatrixXd tiny(3, 2);
    tiny << 1, 2, 3, 4, 5, 7;
    CHECK_THROWS_AS(fisher_z_test(tiny, 1, 2, {}, 0.05), DataError);  // n <= |S|+3

    Eigen::MatrixXd constant(10, 2);
    constant.col(0).setLinSpaced(10, 0, 1);
    constant.col(1).setConstant(3.0);
    CHECK_THROWS_AS(fisher_z_test(constant, 1, 2, {}, 0.05), DataError);
}

TEST_CASE("fisher z accepts the chain independence at n=10000") {
    const Dag chain(3, {{1, 2}, {2, 3}});
    const LinearGaussianSem sem(chain, {{{1, 2}, 1.0}, {{2, 3}, 1.0}}, {1, 1, 1});
    int accepted = 0;
    for (int run = 0; run < 20; ++run) {
        const Eigen::MatrixXd data = sample(sem, 10000, derive_seed(42, run));
        if (fisher_z_test(data, 1, 3, {2}, 0.05)) ++accepted;
    }
    CHECK(accepted >= 17);  // nominal acceptance rate 1 - alpha
}

TEST_CASE("fisher z empirical type-I error stays near alpha") {
    const double alpha = 0.05;
    int rejections = 0;
    Rng rng(991);
    for (int run = 0; run < 1000; ++run) {
        Eigen::MatrixXd data(1000, 2);
        for (int r = 0; r < 1000; ++r) {
            data(r, 0) = rng.normal();
            data(r, 1) = rng.normal();
        }
        if (!fisher_z_test(data, 1, 2, {}, alpha)) ++rejections;
    }
    CHECK(rejections <= static_cast<int>((alpha + 0.02) * 1000));
}

TEST_CASE("provider counts cache misses only") {
    GraphOracle provider{Dag(3, {{1, 3}, {2, 3}})};
    CHECK(provider.query_count() == 0);
    const bool first = provider.query(1, 2, {});
    CHECK(provider.query_count() == 1);
    CHECK(provider.query(1, 2, {}) == first);
    CHECK(provider.query(2, 1, {}) == first);  // symmetric key
    CHECK(provider.query_count() == 1);
    provider.query(1, 2, {3});
    CHECK(provider.query_count() == 2);

    CHECK_THROWS_AS(provider.query(1, 1, {}), DataError);
    CHECK_THROWS_AS(provider.query(1, 2, {2}), DataError);
    CHECK_THROWS_AS(provider.query(1, 4, {}), DataError);
}

TEST_CASE("covariance oracle flags singular conditioning sets") {
    Eigen::MatrixXd cov(3, 3);
    cov << 1, 1, 0, 1, 1, 0, 0, 0, 1;  // X1 = X2 almost surely
    CovarianceOracle provider{cov};
    CHECK_THROWS_AS(provider.query(1, 3, {2}), DataError);
}

TEST_CASE("marginal invariance test") {
    const std::vector<double> same{1.0, 2.0, 3.0, 4.0};
    auto r = marginal_invariance_test(same, same, 0.05);
    CHECK_FALSE(r.changed);

    // degenerate: two identical constants vs. a moved constant
    CHECK_FALSE(marginal_invariance_test({2.0, 2.0}, {2.0, 2.0}, 0.05).changed);
    CHECK(marginal_invariance_test({2.0, 2.0}, {3.0, 3.0}, 0.05).changed);

    // weather stays put under do(ice cream): X1 -> X2, X1 -> X3
    const Dag fork(3, {{1, 2}, {1, 3}});
    const LinearGaussianSem sem(fork, {{{1, 2}, 0.8}, {{1, 3}, 0.7}}, {1, 1, 1});
    const LinearGaussianSem cut =
        apply_intervention(sem, Intervention({{2, InterventionKind::Do, 1.5}}));
    const Eigen::MatrixXd obs = sample(sem, 5000, 7);
    const Eigen::MatrixXd post = sample(cut, 5000, 8);
    std::vector<double> x1_obs(5000), x1_post(5000), x2_obs(5000), x2_post(5000);
    for (int k = 0; k < 5000; ++k) {
        x1_obs[k] = obs(k, 0);
        x1_post[k] = post(k, 0);
        x2_obs[k] = obs(k, 1);
        x2_post[k] = post(k, 1);
    }
    CHECK_FALSE(marginal_invariance_test(x1_obs, x1_post, 0.01, 0, 1).changed);

    // shift delta=3 on X1 moves X2 by weight*delta
    const LinearGaussianSem shifted =
        apply_intervention(sem, Intervention({{1, InterventionKind::Shift, 3.0}}));
    const Eigen::MatrixXd post2 = sample(shifted, 5000, 9);
    std::vector<double> x2_post2(5000);
    for (int k = 0; k < 5000; ++k) x2_post2[k] = post2(k, 1);
    auto res = marginal_invariance_test(x2_obs, x2_post2, 0.01, 1, 2);
    CHECK(res.changed);

    CHECK_THROWS_AS(marginal_invariance_test({}, same, 0.05), DataError);
}

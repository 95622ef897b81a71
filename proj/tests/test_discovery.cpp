#include <doctest.h>

#include <algorithm>

#include "causalkit/discovery.hpp"
#include "causalkit/errors.hpp"
#include "causalkit/rng.hpp"
#include "causalkit/sem.hpp"
#include "test_oracles.hpp"

using namespace causalkit;

namespace {

Dag collider3() { return Dag(3, {{1, 3}, {2, 3}}); }

std::vector<Permutation> all_permutations(int p) {
    std::vector<int> order(p);
    for (int i = 0; i < p; ++i) order[i] = i + 1;
    std::vector<Permutation> out;
    do {
        out.emplace_back(order);
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

}  // namespace

TEST_CASE("pc with the oracle on the worked graphs") {
    {
        GraphOracle oracle{collider3()};
        const auto report = pc(oracle, 3);
        CHECK(report.output == Pdag(3, {{1, 3}, {2, 3}}, {}));
        CHECK(report.algorithm == "pc");
    }
    {
        GraphOracle oracle{Dag(3, {{1, 2}, {2, 3}})};
        CHECK(pc(oracle, 3).output == Pdag(3, {}, {{1, 2}, {2, 3}}));
    }
    {
        GraphOracle oracle{Dag(5, {})};
        const auto report = pc(oracle, 5);
        CHECK(report.output == Pdag(5));
        CHECK(report.ci_queries == 10);  // one marginal test per pair
    }
}

TEST_CASE("minimal i-map worked example") {
    const Dag truth = collider3();
    const Dag complete(3, {{1, 2}, {1, 3}, {2, 3}});
    std::map<std::vector<int>, Dag> expected;
    for (const auto& perm : all_permutations(3)) {
        GraphOracle oracle{truth};
        const Dag imap = minimal_imap(oracle, perm);
        CHECK(oracle.query_count() == 3);  // p(p-1)/2 queries, all distinct
        const auto& o = perm.order();
        if (o == std::vector<int>{1, 2, 3} || o == std::vector<int>{2, 1, 3}) {
            CHECK(imap == truth);
        } else {
            CHECK(skeleton(imap) == skeleton(complete));
        }
    }
}

TEST_CASE("minimal i-map of an independent distribution is empty") {
    GraphOracle oracle{Dag(4, {})};
    CHECK(minimal_imap(oracle, Permutation({3, 1, 4, 2})).edge_count() == 0);
    CHECK(oracle.query_count() == 6);
}

TEST_CASE("sp finds the sparsest class") {
    {
        GraphOracle oracle{collider3()};
        const auto report = sp(oracle, 3);
        CHECK(report.output == essential_graph(collider3()));
        CHECK(report.output.directed_count() == 2);
    }
    {
        GraphOracle oracle{Dag(4, {})};
        CHECK(sp(oracle, 4).output == Pdag(4));
    }
    for (int inst = 0; inst < 10; ++inst) {
        const Dag g = random_dag(5, 0.5, derive_seed(800, inst));
        GraphOracle oracle{g};
        CHECK(sp(oracle, 5).output == essential_graph(g));
    }
    GraphOracle big{Dag(8, {})};
    CHECK_THROWS_AS(sp(big, 8), GuardExceededError);
}

TEST_CASE("gsp reduces a dense initial i-map and stays put on a sparse one") {
    {
        GraphOracle oracle{collider3()};
        GspOptions opt;
        opt.initial_order = Permutation({3, 1, 2});  // complete initial i-map
        const auto report = gsp(oracle, 3, opt);
        CHECK(report.output == essential_graph(collider3()));
        CHECK(report.converged);
    }
    {
        GraphOracle oracle{collider3()};
        GspOptions opt;
        opt.initial_order = Permutation({1, 2, 3});  // already consistent
        const auto report = gsp(oracle, 3, opt);
        CHECK(report.output == essential_graph(collider3()));
        CHECK(report.config.at("descents") == "0");  // already sparsest, no flip accepted
    }
}

TEST_CASE("gsp agrees with sp on random oracle instances") {
    for (int p = 4; p <= 6; ++p) {
        for (int inst = 0; inst < 8; ++inst) {
            const Dag g = random_dag(p, 0.5, derive_seed(900 + p, inst));
            GraphOracle o1{g}, o2{g};
            GspOptions opt;
            opt.dfs_depth = 12;
            opt.seed = derive_seed(901, inst);
            const auto from_gsp = gsp(o1, p, opt);
            const auto from_sp = sp(o2, p);
            CHECK(from_gsp.output == from_sp.output);
            CHECK(from_gsp.output == essential_graph(g));
        }
    }
}

TEST_CASE("gas on the worked graphs") {
    {
        GraphOracle oracle{collider3()};
        const auto report = gas(oracle, 3);
        CHECK(report.output == Pdag(3, {{1, 3}, {2, 3}}, {}));
        CHECK(report.config.at("order") == "1,2,3");
    }
    {
        GraphOracle oracle{Dag(3, {{1, 2}, {2, 3}})};
        CHECK(gas(oracle, 3).output == Pdag(3, {}, {{1, 2}, {2, 3}}));
    }
    {
        // collider whose parents share a common source
        GraphOracle oracle{Dag(4, {{4, 2}, {4, 3}, {2, 1}, {3, 1}})};
        const auto report = gas(oracle, 4);
        CHECK(report.output == essential_graph(Dag(4, {{4, 2}, {4, 3}, {2, 1}, {3, 1}})));
    }
}

TEST_CASE("gas is oracle-exact on every DAG up to p=4") {
    for (int p = 2; p <= 4; ++p) {
        for (const auto& g : test_oracles::all_dags(p)) {
            GraphOracle oracle{g};
            CAPTURE(p);
            REQUIRE(gas(oracle, p).output == essential_graph(g));
        }
    }
}

TEST_CASE("gas is oracle-exact on random instances") {
    for (int p = 3; p <= 7; ++p) {
        for (int inst = 0; inst < 10; ++inst) {
            const double density = inst % 3 == 0 ? 0.2 : inst % 3 == 1 ? 0.5 : 0.8;
            const Dag g = random_dag(p, density, derive_seed(1000 + p, inst));
            GraphOracle oracle{g};
            const auto report = gas(oracle, p);
            CAPTURE(p);
            CAPTURE(inst);
            REQUIRE(report.output == essential_graph(g));
            CHECK(report.ci_queries > 0);
        }
    }
}

TEST_CASE("all four algorithms agree under the oracle") {
    for (int inst = 0; inst < 10; ++inst) {
        const Dag g = random_dag(5, 0.4, derive_seed(1100, inst));
        const Pdag truth = essential_graph(g);
        GraphOracle o1{g}, o2{g}, o3{g}, o4{g};
        GspOptions opt;
        opt.dfs_depth = 12;
        CHECK(pc(o1, 5).output == truth);
        CHECK(sp(o2, 5).output == truth);
        CHECK(gsp(o3, 5, opt).output == truth);
        CHECK(gas(o4, 5).output == truth);
    }
}

TEST_CASE("interventional orientation fully directs the fork") {
    // skeleton 2 - 1 - 3; interventions on 2 and on 3 leave X1 invariant
    const Pdag base(3, {}, {{1, 2}, {1, 3}});
    std::vector<InterventionEvidence> evidence(2);
    evidence[0].intervention_id = 0;
    evidence[0].targets = {2};
    evidence[0].invariance = {{0, 1, false, 1.0}, {0, 3, false, 1.0}};
    evidence[1].intervention_id = 1;
    evidence[1].targets = {3};
    evidence[1].invariance = {{1, 1, false, 1.0}, {1, 2, false, 1.0}};
    CHECK(interventional_orient(base, evidence) == Pdag(3, {{1, 2}, {1, 3}}, {}));
}

TEST_CASE("interventional orientation on the chain uses rule 1") {
    // intervene on 2: X3 changed, X1 unchanged => 1 -> 2 -> 3
    const Pdag base(3, {}, {{1, 2}, {2, 3}});
    InterventionEvidence ev;
    ev.targets = {2};
    ev.invariance = {{0, 1, false, 1.0}, {0, 3, true, 0.0}};
    CHECK(interventional_orient(base, {ev}) == Pdag(3, {{1, 2}, {2, 3}}, {}));
}

TEST_CASE("interventional orientation edge cases") {
    const Pdag base(3, {}, {{1, 2}, {1, 3}});
    CHECK(interventional_orient(base, {}) == base);

    // contradictory demands across interventions
    InterventionEvidence a, b;
    a.intervention_id = 0;
    a.targets = {1};
    a.invariance = {{0, 2, true, 0.0}};   // wants 1 -> 2
    b.intervention_id = 1;
    b.targets = {2};
    b.invariance = {{1, 1, true, 0.0}};   // wants 2 -> 1
    CHECK_THROWS_AS(interventional_orient(base, {a, b}), OrientationConflictError);

    // never removes adjacencies, never reverses existing directions
    const Pdag mixed(4, {{4, 1}}, {{1, 2}, {2, 3}});
    InterventionEvidence ev;
    ev.targets = {2};
    ev.invariance = {{0, 1, false, 1.0}, {0, 3, true, 0.0}};
    const Pdag out = interventional_orient(mixed, {ev});
    CHECK(out.has_directed(4, 1));
    CHECK(out.to_skeleton() == mixed.to_skeleton());
}

TEST_CASE("query accounting across a full run") {
    // pc's marginal sweep plus gas make distinct cache entries only
    GraphOracle oracle{Dag(4, {})};
    const auto first = pc(oracle, 4);
    CHECK(first.ci_queries == 6);
    const auto again = pc(oracle, 4);  // all answers cached now
    CHECK(again.ci_queries == 0);
    CHECK(again.output == first.output);
}

TEST_CASE("gas reports a stuck prefix on an unfaithful answer source") {
    // A covariance whose CI pattern matches no DAG: X1,X2,X3 pairwise
    // dependent but X1 indep X2 given X3 and X1 indep X3 given X2 and
    // X2 indep X3 given X1 cannot arise from three mutually adjacent nodes.
    Eigen::MatrixXd cov(3, 3);
    cov << 1.0, 0.5, 0.5,
           0.5, 1.0, 0.5,
           0.5, 0.5, 1.0;
    // partial correlations given the third node: (0.5 - 0.25)/(1 - 0.25) = 1/3,
    // so use a tolerance that declares them independent while the marginals stay
    // dependent: every node then certifies ancestors for every other node.
    CovarianceOracle provider{cov, 0.4};
    CHECK_THROWS_AS(gas(provider, 3), StuckPrefixError);
}

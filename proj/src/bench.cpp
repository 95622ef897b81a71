#include "causalkit/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "causalkit/ci.hpp"
#include "causalkit/discovery.hpp"
#include "causalkit/errors.hpp"
#include "causalkit/rng.hpp"
#include "causalkit/sem.hpp"

namespace causalkit {

namespace {

// 0 = absent, 1 = undirected, 2 = i->j, 3 = j->i (for i < j)
int pair_state(const Pdag& g, int i, int j) {
    if (g.has_undirected(i, j)) return 1;
    if (g.has_directed(i, j)) return 2;
    if (g.has_directed(j, i)) return 3;
    return 0;
}

}  // namespace

int shd(const Pdag& a, const Pdag& b) {
    if (a.node_count() != b.node_count()) throw DataError("shd: node counts differ");
    int d = 0;
    for (int i = 1; i <= a.node_count(); ++i)
        for (int j = i + 1; j <= a.node_count(); ++j)
            if (pair_state(a, i, j) != pair_state(b, i, j)) ++d;
    return d;
}

int skeleton_shd(const Pdag& a, const Pdag& b) {
    if (a.node_count() != b.node_count()) throw DataError("skeleton_shd: node counts differ");
    int d = 0;
    for (int i = 1; i <= a.node_count(); ++i)
        for (int j = i + 1; j <= a.node_count(); ++j)
            if (a.adjacent(i, j) != b.adjacent(i, j)) ++d;
    return d;
}

// ---------------------------------------------------------------- volume

double min_abs_partial_correlation_3node(double a12, double a13, double a23) {
    // Exact covariance of X1 = e1, X2 = a12 X1 + e2, X3 = a13 X1 + a23 X2 + e3
    // with unit noise. Cross-checked against the generic SEM covariance and
    // submatrix-inversion partial correlations in the test suite.
    const double s11 = 1.0;
    const double s12 = a12;
    const double s22 = a12 * a12 + 1.0;
    const double s13 = a13 + a12 * a23;
    const double s23 = a12 * a13 + a23 * (a12 * a12 + 1.0);
    const double s33 = (a13 + a12 * a23) * (a13 + a12 * a23) + a23 * a23 + 1.0;

    const double r12 = s12 / std::sqrt(s11 * s22);
    const double r13 = s13 / std::sqrt(s11 * s33);
    const double r23 = s23 / std::sqrt(s22 * s33);

    auto order1 = [](double rij, double rik, double rjk) {
        return (rij - rik * rjk) / std::sqrt((1.0 - rik * rik) * (1.0 - rjk * rjk));
    };
    const double r12_3 = order1(r12, r13, r23);
    const double r13_2 = order1(r13, r12, r23);
    const double r23_1 = order1(r23, r12, r13);

    double m = std::fabs(r12);
    for (double r : {r13, r23, r12_3, r13_2, r23_1}) m = std::min(m, std::fabs(r));
    return m;
}

std::vector<VolumeEstimate> unfaithful_volume_grid(const std::vector<double>& lambdas,
                                                   std::int64_t n_draws, double box_lo,
                                                   double box_hi, std::uint64_t seed,
                                                   int threads) {
    if (n_draws < 1) throw DataError("unfaithful_volume: draws must be positive");
    if (!(box_lo < box_hi)) throw DataError("unfaithful_volume: empty weight box");
    for (double l : lambdas)
        if (l < 0.0 || l > 1.0) throw DataError("unfaithful_volume: lambda not in [0,1]");

    // Fixed-size chunks with derived seeds keep the result independent of
    // the thread count.
    constexpr std::int64_t kChunk = 8192;
    const std::int64_t n_chunks = (n_draws + kChunk - 1) / kChunk;
    std::vector<std::vector<std::int64_t>> per_chunk(
        n_chunks, std::vector<std::int64_t>(lambdas.size(), 0));

    auto run_chunk = [&](std::int64_t chunk) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(chunk)));
        const std::int64_t lo = chunk * kChunk;
        const std::int64_t hi = std::min(n_draws, lo + kChunk);
        auto& counts = per_chunk[chunk];
        for (std::int64_t d = lo; d < hi; ++d) {
            const double a12 = rng.uniform(box_lo, box_hi);
            const double a13 = rng.uniform(box_lo, box_hi);
            const double a23 = rng.uniform(box_lo, box_hi);
            const double m = min_abs_partial_correlation_3node(a12, a13, a23);
            for (std::size_t k = 0; k < lambdas.size(); ++k)
                if (m <= lambdas[k]) ++counts[k];
        }
    };

    const int workers = std::max(1, threads);
    if (workers == 1 || n_chunks == 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::int64_t> next{0};
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::int64_t c; (c = next.fetch_add(1)) < n_chunks;) run_chunk(c);
            });
        for (auto& t : pool) t.join();
    }

    std::vector<VolumeEstimate> out;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        VolumeEstimate est;
        est.lambda = lambdas[k];
        est.draws = n_draws;
        est.box_lo = box_lo;
        est.box_hi = box_hi;
        est.seed = seed;
        for (std::int64_t c = 0; c < n_chunks; ++c) est.violations += per_chunk[c][k];
        est.fraction = static_cast<double>(est.violations) / static_cast<double>(n_draws);
        out.push_back(est);
    }
    return out;
}

VolumeEstimate unfaithful_volume(double lambda, std::int64_t n_draws, double box_lo,
                                 double box_hi, std::uint64_t seed, int threads) {
    return unfaithful_volume_grid({lambda}, n_draws, box_lo, box_hi, seed, threads).front();
}

// ---------------------------------------------------------------- ci-count benchmark

std::vector<BenchRow> ci_count_benchmark(const BenchConfig& config) {
    if (config.instances_per_p < 1) throw DataError("ci_count_benchmark: need instances >= 1");
    struct Unit {
        int p;
        int index;
        std::uint64_t seed;
    };
    std::vector<Unit> units;
    std::uint64_t unit_index = 0;
    for (int p : config.p_values)
        for (int k = 0; k < config.instances_per_p; ++k)
            units.push_back({p, k, derive_seed(config.seed, unit_index++)});

    std::vector<std::vector<BenchRow>> per_unit(units.size());

    auto run_unit = [&](std::size_t u) {
        const Unit& unit = units[u];
        const Dag truth = random_dag(unit.p, config.density, unit.seed);
        const Pdag truth_cpdag = essential_graph(truth);
        const int s = max_undirected_clique(truth_cpdag);
        const std::string instance =
            "p" + std::to_string(unit.p) + "-i" + std::to_string(unit.index);
        for (const std::string& algo : config.algorithms) {
            BenchRow row;
            row.instance = instance;
            row.p = unit.p;
            row.s = s;
            row.algorithm = algo;
            try {
                GraphOracle oracle{truth};
                DiscoveryReport rep;
                if (algo == "pc") {
                    rep = pc(oracle, unit.p);
                } else if (algo == "sp") {
                    rep = sp(oracle, unit.p, config.sp_guard);
                } else if (algo == "gsp") {
                    GspOptions opt;
                    opt.dfs_depth = config.gsp_depth;
                    opt.seed = derive_seed(unit.seed, 1);
                    rep = gsp(oracle, unit.p, opt);
                } else if (algo == "gas") {
                    rep = gas(oracle, unit.p);
                } else {
                    throw DataError("ci_count_benchmark: unknown algorithm " + algo);
                }
                row.ci_queries = rep.ci_queries;
                row.shd = shd(rep.output, truth_cpdag);
                row.elapsed_ms = rep.elapsed_ms;
                row.status = "ok";
            } catch (const std::exception&) {
                row.ci_queries = 0;
                row.shd = 0;
                row.elapsed_ms = 0.0;
                row.status = "failed";
            }
            per_unit[u].push_back(std::move(row));
        }
    };

    const int workers = std::max(1, config.threads);
    if (workers == 1) {
        for (std::size_t u = 0; u < units.size(); ++u) run_unit(u);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t u; (u = next.fetch_add(1)) < units.size();) run_unit(u);
            });
        for (auto& t : pool) t.join();
    }

    std::vector<BenchRow> rows;
    for (auto& unit_rows : per_unit)
        for (auto& row : unit_rows) rows.push_back(std::move(row));
    return rows;
}

std::string to_tsv(const std::vector<BenchRow>& rows, bool with_timings) {
    std::string out = "instance\tp\ts\talgorithm\tci_queries\tshd\telapsed_ms\tstatus\n";
    char buf[64];
    for (const auto& r : rows) {
        out += r.instance;
        out += "\t" + std::to_string(r.p);
        out += "\t" + std::to_string(r.s);
        out += "\t" + r.algorithm;
        out += "\t" + std::to_string(r.ci_queries);
        out += "\t" + std::to_string(r.shd);
        std::snprintf(buf, sizeof(buf), "%.3f", with_timings ? r.elapsed_ms : 0.0);
        out += "\t";
        out += buf;
        out += "\t" + r.status + "\n";
    }
    return out;
}

}  // namespace causalkit

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causalkit/graph.hpp"

namespace causalkit {

// Structural Hamming distance between two Pdags of the same node count:
// each node pair is in one of four states (absent, undirected, directed one
// way, directed the other way) and every differing pair costs 1.
int shd(const Pdag& a, const Pdag& b);

// SHD of the skeletons: only the presence of an adjacency counts.
int skeleton_shd(const Pdag& a, const Pdag& b);

// One Monte-Carlo estimate of the lambda-strong-unfaithfulness volume for
// the fully connected 3-node model.
struct VolumeEstimate {
    double lambda = 0.0;
    std::int64_t draws = 0;
    std::int64_t violations = 0;
    double fraction = 0.0;
    double box_lo = -1.0, box_hi = 1.0;
    std::uint64_t seed = 0;
};

// Smallest magnitude among the 6 partial correlations (three marginal,
// three order-1) of the fully connected 3-node model X1 -> X2 -> X3,
// X1 -> X3 with the given edge weights and unit noise.
double min_abs_partial_correlation_3node(double a12, double a13, double a23);

// Draws (a12, a13, a23) uniformly from box^3 and counts draws whose
// smallest partial-correlation magnitude is <= lambda. Each lambda in the
// grid is evaluated against the same draws, so fractions are non-decreasing
// in lambda by construction. Work is split into fixed-size chunks with
// derived seeds, so results do not depend on the thread count.
std::vector<VolumeEstimate> unfaithful_volume_grid(const std::vector<double>& lambdas,
                                                   std::int64_t n_draws, double box_lo,
                                                   double box_hi, std::uint64_t seed,
                                                   int threads = 1);

VolumeEstimate unfaithful_volume(double lambda, std::int64_t n_draws, double box_lo,
                                 double box_hi, std::uint64_t seed, int threads = 1);

struct BenchRow {
    std::string instance;
    int p = 0;
    int s = 0;  // max undirected clique of the true essential graph
    std::string algorithm;
    std::uint64_t ci_queries = 0;
    int shd = 0;
    double elapsed_ms = 0.0;
    std::string status;  // "ok" or "failed"
};

struct BenchConfig {
    std::vector<int> p_values{5};
    int instances_per_p = 10;
    double density = 0.3;
    std::uint64_t seed = 0;
    std::vector<std::string> algorithms{"pc", "gsp", "gas"};
    int sp_guard = 7;
    int gsp_depth = 4;
    int threads = 1;
};

// Oracle-mode CI-count comparison: one row per (instance, algorithm), SHD
// against the true essential graph, deterministic ordering. Failed runs
// become rows with status "failed" rather than exceptions.
std::vector<BenchRow> ci_count_benchmark(const BenchConfig& config);

// Fixed column order: instance, p, s, algorithm, ci_queries, shd,
// elapsed_ms, status. Elapsed is written as 0 unless with_timings is set,
// keeping the table byte-stable across reruns.
std::string to_tsv(const std::vector<BenchRow>& rows, bool with_timings = false);

}  // namespace causalkit

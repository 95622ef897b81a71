#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "causalkit/discovery.hpp"
#include "causalkit/graph.hpp"
#include "causalkit/sem.hpp"

namespace causalkit::io {

using nlohmann::json;

// Graph JSON: {"p": int, "directed": [[i,j],...], "undirected": [[i,j],...]}
// with 1-based nodes and lexicographically sorted edge lists. A DAG is the
// special case with an empty "undirected" list.
json pdag_to_json(const Pdag& g);
json dag_to_json(const Dag& g);
Pdag pdag_from_json(const json& j);
Dag dag_from_json(const json& j);

// SEM JSON: {"p": int, "edges": [[i,j,a_ij],...], "noise_vars": [...],
// "noise_means": [...]}.
json sem_to_json(const LinearGaussianSem& sem);
LinearGaussianSem sem_from_json(const json& j);

// Intervention JSON: {"targets":[{"node":k,"kind":"do|shift|scale","value":v},...]}.
json intervention_to_json(const Intervention& iv);
Intervention intervention_from_json(const json& j);

// Covariance JSON: {"p": int, "matrix": [[...],...]}.
Eigen::MatrixXd covariance_from_json(const json& j);
json covariance_to_json(const Eigen::MatrixXd& cov);

// Discovery report JSON: {"version","algorithm","pdag","ci_queries",
// "elapsed_ms","converged","config"}. Elapsed is written as 0 unless
// with_timings is set, keeping reports byte-stable across reruns.
json report_to_json(const DiscoveryReport& report, bool with_timings = false);

// Samples CSV with header row X1..Xp; one shortest-round-trip double per cell.
std::string samples_to_csv(const Eigen::MatrixXd& samples);
Eigen::MatrixXd samples_from_csv(const std::string& text);

json load_json(const std::filesystem::path& path);
std::string load_text(const std::filesystem::path& path);

// Writes through a temp file in the same directory plus a rename, so
// readers never observe a partial file.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace causalkit::io

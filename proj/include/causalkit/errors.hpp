#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace causalkit {

// Bad input data: unreadable files, schema violations, numerically degenerate
// matrices, insufficient samples. CLI maps these to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A guarded operation was asked to exceed its guard (e.g. SP beyond its
// maximum node count). CLI maps these to exit code 1 together with the
// flag that raises the guard.
class GuardExceededError : public std::runtime_error {
public:
    GuardExceededError(const std::string& msg, int limit)
        : std::runtime_error(msg), limit(limit) {}
    int limit;
};

// Meek closure detected that the input orientations cannot belong to any
// DAG (directed cycle among the directed edges).
class InconsistentPdagError : public DataError {
public:
    explicit InconsistentPdagError(const std::string& msg) : DataError(msg) {}
};

// GAS could not admit any node into the growing prefix: under a faithful
// distribution this cannot happen, so it signals a faithfulness violation
// in the answer source. Carries the prefix the search was stuck at.
class StuckPrefixError : public DataError {
public:
    StuckPrefixError(const std::string& msg, std::set<int> prefix)
        : DataError(msg), prefix(std::move(prefix)) {}
    std::set<int> prefix;
};

// Interventional orientation received demands for both directions of at
// least one edge. Carries the conflicting pairs.
class OrientationConflictError : public DataError {
public:
    OrientationConflictError(const std::string& msg,
                             std::vector<std::pair<int, int>> edges)
        : DataError(msg), edges(std::move(edges)) {}
    std::vector<std::pair<int, int>> edges;
};

}  // namespace causalkit

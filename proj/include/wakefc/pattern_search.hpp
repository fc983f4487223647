#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wakefc {

enum class PollOrder {
    complete,     // evaluate every poll point, move to the best
    opportunistic // move to the first improving poll point
};

struct PatternSearchOptions {
    double initial_mesh = 0.1;
    double mesh_tolerance = 1e-5;
    double expansion = 2.0;
    double contraction = 0.5;
    std::size_t max_evaluations = 10000;
    double penalty = 1e6;
    PollOrder poll = PollOrder::complete;
};

/// Objective value plus a nonnegative constraint-violation measure; zero
/// violation means feasible.
struct Evaluation {
    double value = 0.0;
    double violation = 0.0;
};

using ConstrainedObjective = std::function<Evaluation(std::span<const double>)>;
using Objective = std::function<double(std::span<const double>)>;

struct PatternSearchResult {
    std::vector<double> x;
    double value = 0.0;
    double violation = 0.0;
    bool feasible = false;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    double final_mesh = 0.0;
    bool budget_exhausted = false;
};

/// Generalised pattern search maximiser over a box.
///
/// Polls ±mesh along each coordinate (order +e0, −e0, +e1, ...), projecting
/// poll points onto the box. Points are ranked by value − penalty·violation;
/// an improving poll moves the incumbent and expands the mesh, otherwise the
/// mesh contracts. Stops when the mesh falls below `mesh_tolerance` or the
/// evaluation budget is spent. The returned point is the best feasible point
/// seen, or the final incumbent with its violation when nothing feasible
/// was found.
PatternSearchResult pattern_search(const ConstrainedObjective& objective, std::span<const double> x0,
                                   std::span<const double> lower, std::span<const double> upper,
                                   const PatternSearchOptions& options = {});

PatternSearchResult pattern_search(const Objective& objective, std::span<const double> x0,
                                   std::span<const double> lower, std::span<const double> upper,
                                   const PatternSearchOptions& options = {});

} // namespace wakefc

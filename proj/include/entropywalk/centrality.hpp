#pragma once

#include <cstdint>
#include <vector>

#include "entropywalk/graph.hpp"
#include "entropywalk/walker.hpp"

namespace entropywalk {

/// Per-node visit counter fed by tours; a visit bumps the node's counter by
/// one. Normalizing turns the counts into a probability vector.
class CentralityTable {
public:
    explicit CentralityTable(size_t node_count) : counts_(node_count, 0) {}

    void accumulate(const Tour& t);

    const std::vector<uint64_t>& counts() const { return counts_; }
    uint64_t total() const { return total_; }

    /// counts/total; all zeros while no visits were recorded.
    std::vector<double> scores() const;

private:
    std::vector<uint64_t> counts_;
    uint64_t total_ = 0;
};

struct EigenvectorResult {
    std::vector<double> scores; // L2-normalized, nonnegative
    uint32_t iterations = 0;
    bool restricted_to_largest_component = false;
};

/// Dominant eigenvector of the adjacency matrix by power iteration
/// (shift A+I keeps bipartite graphs from oscillating); converged when the
/// L2 distance between successive normalized iterates drops below tol.
/// Disconnected graphs are scored on their largest component (ties by lowest
/// node id) with zeros elsewhere, flagged in the result. Throws
/// ConvergenceError when max_iter is exhausted.
EigenvectorResult eigenvector_centrality(const Graph& g, double tol = 1e-10,
                                         uint32_t max_iter = 100000);

struct DeltaReport {
    std::vector<double> delta;  // filtered minus reference, both on the 1-simplex
    std::vector<NodeId> peaks;  // delta above mean + peak_sigma * stddev
    double mean = 0.0;
    double stddev = 0.0;
    double cut = 0.0;
};

/// Per-node difference between two centrality score vectors. Both sides are
/// renormalized to sum 1 first so visit-frequency (L1) and eigenvector (L2)
/// scales compare. Peak nodes sit above mean + peak_sigma*stddev of the
/// deltas. Throws std::invalid_argument on mismatched node sets.
DeltaReport centrality_delta(const std::vector<double>& filtered,
                             const std::vector<double>& reference, double peak_sigma = 2.0);

} // namespace entropywalk

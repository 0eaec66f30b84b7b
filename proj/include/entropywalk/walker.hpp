#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "entropywalk/graph.hpp"
#include "entropywalk/rng.hpp"

namespace entropywalk {

/// Tuning knobs of a detection run. `length` counts visited nodes, so a walk
/// of `length` visits makes `length - 1` hops.
struct WalkParams {
    uint64_t tours = 10000;          // nt: number of complete tours to simulate
    uint32_t length = 30;            // lt: visits per tour
    uint32_t min_members = 5;        // minm
    uint32_t max_members = 10;       // maxm
    double entropy_threshold = 0.75; // et, in (0, 1]
    std::optional<NodeId> start;     // fixed start node (personalized mode)
    uint64_t master_seed = 1;

    /// Throws ConfigError when 1 <= minm <= maxm <= lt, lt >= 2 or
    /// 0 < et <= 1 is violated.
    void validate() const;
};

/// One random walk: the visit sequence plus its node-frequency map
/// (sorted by node id).
struct Tour {
    std::vector<NodeId> visits;
    std::vector<std::pair<NodeId, uint32_t>> freq;
    NodeId start = 0;
    bool complete = false;

    uint32_t distinct() const { return static_cast<uint32_t>(freq.size()); }
    uint32_t count_of(NodeId v) const;
    void rebuild_freq();
};

struct RunStats {
    uint64_t tours = 0;    // complete tours delivered (== nt)
    uint64_t attempts = 0; // walk attempts, including dead-end regenerations
    uint64_t accepted = 0;
    uint64_t rejected = 0;
    double wall_seconds = 0.0;
};

using TourPredicate = std::function<bool(const Tour&)>;
using TourSink = std::function<void(const Tour&)>;

/// Single walk of up to `length` visits starting at `start`; each step moves
/// to a uniformly random neighbor. Stops early at a dead end
/// (complete=false). Throws ConfigError when start has degree 0.
Tour random_tour(const Graph& g, NodeId start, uint32_t length, SplitMix64& rng);

/// Simulates exactly p.tours complete tours (dead-end walks are regenerated
/// with a fresh start and do not count), evaluates `accept` on each and
/// hands accepted tours to `sink`.
///
/// Tour i draws all randomness from a stream derived from
/// (p.master_seed, i), and sink receives tours serially in index order, so
/// results are identical for every worker count. Start nodes are sampled
/// uniformly over degree>=1 nodes unless p.start pins them.
RunStats run_tours(const Graph& g, const WalkParams& p, const TourPredicate& accept,
                   const TourSink& sink, unsigned threads = 1);

/// run_tours with every walk pinned to `start`: the personalized-circles mode.
RunStats personalized_tours(const Graph& g, WalkParams p, NodeId start,
                            const TourPredicate& accept, const TourSink& sink,
                            unsigned threads = 1);

} // namespace entropywalk

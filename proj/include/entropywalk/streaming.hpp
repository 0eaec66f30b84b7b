#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "entropywalk/community.hpp"
#include "entropywalk/graph.hpp"
#include "entropywalk/walker.hpp"

namespace entropywalk {

/// Count-min sketch: depth x width counter grid, one hash row per depth.
/// estimate(k) never undershoots the true count; with width w and depth d
/// the overshoot stays below (e/w)*N with probability 1 - e^-d.
class CountMinSketch {
public:
    CountMinSketch(uint32_t width, uint32_t depth, uint64_t seed = 0xc0117e75ULL);

    void update(uint64_t key, uint64_t inc = 1);
    uint64_t estimate(uint64_t key) const;

    void update(const CommunityKey& key, uint64_t inc = 1) { update(key_digest(key), inc); }
    uint64_t estimate(const CommunityKey& key) const { return estimate(key_digest(key)); }

    /// Multiplicative decay: halves every counter (rounding down).
    void halve();

    uint32_t width() const { return width_; }
    uint32_t depth() const { return depth_; }

private:
    uint32_t width_, depth_;
    std::vector<uint64_t> row_seeds_;
    std::vector<uint64_t> counters_; // depth rows of width cells
};

/// Bounded min-ordered table of the strongest community keys seen so far.
/// A key enters once its sketch estimate beats the current minimum entry;
/// the evicted key's estimate never exceeds the surviving minimum.
class TopN {
public:
    explicit TopN(size_t capacity) : capacity_(capacity) {}

    /// Insert or refresh `key` at `estimate`. Returns true if stored.
    bool offer(const CommunityKey& key, uint64_t estimate);

    void halve();

    size_t size() const { return entries_.size(); }
    size_t capacity() const { return capacity_; }
    bool contains(const CommunityKey& key) const { return entries_.count(key) > 0; }
    uint64_t min_estimate() const;

    /// Entries ranked by estimate descending, ties by key ascending.
    std::vector<std::pair<CommunityKey, uint64_t>> ranked() const;

private:
    size_t capacity_;
    std::unordered_map<CommunityKey, uint64_t, CommunityKeyHash> entries_;
};

struct GraphMutation {
    enum class Kind { AddEdge, RemoveEdge, AddNode, RemoveNode };
    Kind kind;
    std::string a;
    std::string b; // edge mutations only
};

/// Line protocol: `+e a b`, `-e a b`, `+n a`, `-n a`.
/// Throws InputError on malformed lines.
GraphMutation parse_mutation(std::string_view line);
std::string format_mutation(const GraphMutation& m);

/// Applies one mutation, preserving symmetry / no-duplicate / no-self-loop
/// invariants. Unknown labels on add-edge are interned as new nodes.
/// Returns false for no-op adds (edge or node already present). Throws
/// MutationError on removals of unknown labels or absent edges and on
/// self-loop adds.
bool apply_mutation(Graph& g, const GraphMutation& m);

struct StreamConfig {
    uint64_t budget_tours = 0;       // 0 = nothing to do
    uint32_t snapshot_interval = 1000;
    uint32_t mutations_per_tour = 1; // drained from the source at each tour boundary
    uint64_t decay_interval = 0;     // halve sketch + top-n every N tours; 0 = off
    uint32_t key_width = 0;          // 0 = walk params' min_members
    uint64_t min_matches = 0;        // snapshot listing filter
};

struct SnapshotEntry {
    CommunityKey key;
    uint64_t estimate;
};

struct Snapshot {
    uint64_t tours_done = 0;
    std::vector<SnapshotEntry> top;
};

struct StreamStats {
    uint64_t tours = 0;
    uint64_t accepted = 0;
    uint64_t key_underflow = 0;
    uint64_t mutations_applied = 0;
    uint64_t mutation_noops = 0;
    uint64_t mutation_errors = 0;
    uint64_t snapshots = 0;
};

using MutationSource = std::function<std::optional<GraphMutation>()>;
using SnapshotSink = std::function<void(const Snapshot&)>;

/// Continuous detection over a mutable graph. Mutations drain from `source`
/// only at tour boundaries, so every tour sees one consistent graph version.
/// Each accepted tour's key updates the sketch and competes for the top-n
/// table; a snapshot goes to `sink` every snapshot_interval tours. Stops
/// when the tour budget is spent, or when the source is exhausted and the
/// graph has nothing left to walk. Mutation failures are counted, not fatal.
StreamStats stream_loop(Graph& g, const WalkParams& p, CountMinSketch& cms, TopN& topn,
                        const MutationSource& source, const StreamConfig& cfg,
                        const SnapshotSink& sink);

} // namespace entropywalk

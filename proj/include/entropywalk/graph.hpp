#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace entropywalk {

using NodeId = uint32_t;

struct LoadStats {
    uint64_t self_loops_skipped = 0;
    uint64_t duplicate_edges = 0;
};

struct GraphMetrics {
    double avg_clustering = 0.0;
    std::map<uint32_t, uint32_t> degree_histogram;
};

/// Adjacency-list graph with string labels interned to dense integer ids.
///
/// Undirected by default: add_edge/remove_edge keep adjacency symmetric,
/// reject self-loops and collapse duplicates. Adjacency lists are kept
/// sorted ascending. The structure is immutable while a detection run is in
/// flight; the streaming loop mutates it only at tour boundaries.
///
/// Nodes removed by a mutation keep their id (ids are never reused) but lose
/// their label mapping and all incident edges; re-adding the same label
/// creates a fresh id.
class Graph {
public:
    explicit Graph(bool directed = false) : directed_(directed) {}

    /// Id for `label`, interning it as a new node if unseen.
    NodeId intern(const std::string& label);

    std::optional<NodeId> find(std::string_view label) const;

    /// Adds the edge u-v (u->v when directed). Returns false if the edge is
    /// already present. Throws MutationError on self-loops, out_of_range on
    /// bad or removed ids.
    bool add_edge(NodeId u, NodeId v);

    /// Removes the edge; returns false if it was not present.
    bool remove_edge(NodeId u, NodeId v);

    /// Removes a node and all incident edges atomically. The id stays
    /// allocated but inactive; the label is unmapped.
    void remove_node(NodeId v);

    const std::vector<NodeId>& neighbors(NodeId v) const;
    bool has_edge(NodeId u, NodeId v) const;
    uint32_t degree(NodeId v) const { return static_cast<uint32_t>(neighbors(v).size()); }

    /// Allocated ids, including removed slots. Valid ids are 0..node_count()-1.
    size_t node_count() const { return adj_.size(); }
    size_t active_node_count() const { return active_nodes_; }
    size_t edge_count() const { return edges_; }
    bool directed() const { return directed_; }
    bool is_active(NodeId v) const { return v < removed_.size() && !removed_[v]; }

    /// Label for id `v` (retained even after removal, for reporting).
    const std::string& label(NodeId v) const;

    /// Ids with degree >= 1, ascending. Rebuilt lazily after mutations.
    const std::vector<NodeId>& walkable_nodes() const;

    /// Bumped by every successful mutation.
    uint64_t version() const { return version_; }

private:
    void check_node(NodeId v) const;

    std::vector<std::vector<NodeId>> adj_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<bool> removed_;
    size_t edges_ = 0;
    size_t active_nodes_ = 0;
    bool directed_ = false;
    uint64_t version_ = 0;
    mutable std::vector<NodeId> walkable_cache_;
    mutable uint64_t walkable_version_ = ~0ULL;
};

/// Parses whitespace-separated `label1 label2 [ignored]` lines; `#` starts a
/// comment and blank lines are skipped. Repeated edges collapse, self-loops
/// are skipped and counted in `stats`. Throws InputError with the line number
/// on malformed lines.
Graph load_edge_list(std::istream& in, LoadStats* stats = nullptr);
Graph load_edge_list_file(const std::string& path, LoadStats* stats = nullptr);

/// Writes the same edge-list format, one edge per line sorted by
/// (min-id, max-id), labels as interned.
void save_edge_list(const Graph& g, std::ostream& out);
void save_edge_list_file(const Graph& g, const std::string& path);

/// Preferential-attachment graph: m-clique core, then each new node attaches
/// m edges to distinct existing nodes with probability proportional to
/// degree. Edge count is exactly m*(n-m) + m*(m-1)/2. Requires n > m >= 1.
Graph generate_barabasi_albert(uint32_t n, uint32_t m, uint64_t seed);

/// k cliques of size c, one bridge edge between consecutive cliques around a
/// ring. Node ids are clique-contiguous: clique j holds ids j*c .. j*c+c-1.
/// Requires k >= 2, c >= 3. Structure is deterministic; no seed involved.
Graph generate_ring_of_cliques(uint32_t k, uint32_t c);

/// Mean over all nodes of 2*triangles(v) / (deg(v)*(deg(v)-1)); nodes of
/// degree < 2 contribute 0. Removed nodes are excluded.
double avg_clustering(const Graph& g);

GraphMetrics graph_metrics(const Graph& g);

} // namespace entropywalk

#include "entropywalk/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "entropywalk/errors.hpp"
#include "entropywalk/rng.hpp"

namespace entropywalk {

NodeId Graph::intern(const std::string& label) {
    auto it = index_.find(label);
    if (it != index_.end()) return it->second;
    NodeId id = static_cast<NodeId>(adj_.size());
    adj_.emplace_back();
    labels_.push_back(label);
    removed_.push_back(false);
    index_.emplace(label, id);
    ++active_nodes_;
    ++version_;
    return id;
}

std::optional<NodeId> Graph::find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void Graph::check_node(NodeId v) const {
    if (v >= adj_.size()) throw std::out_of_range("node id " + std::to_string(v) + " out of range");
    if (removed_[v]) throw std::out_of_range("node id " + std::to_string(v) + " was removed");
}

bool Graph::add_edge(NodeId u, NodeId v) {
    check_node(u);
    check_node(v);
    if (u == v) throw MutationError("self-loop on node " + labels_[u]);
    auto insert = [](std::vector<NodeId>& list, NodeId x) {
        auto pos = std::lower_bound(list.begin(), list.end(), x);
        if (pos != list.end() && *pos == x) return false;
        list.insert(pos, x);
        return true;
    };
    if (!insert(adj_[u], v)) return false;
    if (!directed_) insert(adj_[v], u);
    ++edges_;
    ++version_;
    return true;
}

bool Graph::remove_edge(NodeId u, NodeId v) {
    check_node(u);
    check_node(v);
    auto erase = [](std::vector<NodeId>& list, NodeId x) {
        auto pos = std::lower_bound(list.begin(), list.end(), x);
        if (pos == list.end() || *pos != x) return false;
        list.erase(pos);
        return true;
    };
    if (!erase(adj_[u], v)) return false;
    if (!directed_) erase(adj_[v], u);
    --edges_;
    ++version_;
    return true;
}

void Graph::remove_node(NodeId v) {
    check_node(v);
    for (NodeId nb : adj_[v]) {
        auto& list = adj_[nb];
        auto pos = std::lower_bound(list.begin(), list.end(), v);
        if (pos != list.end() && *pos == v) list.erase(pos);
    }
    edges_ -= adj_[v].size();
    adj_[v].clear();
    index_.erase(labels_[v]);
    removed_[v] = true;
    --active_nodes_;
    ++version_;
}

const std::vector<NodeId>& Graph::neighbors(NodeId v) const {
    check_node(v);
    return adj_[v];
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

const std::string& Graph::label(NodeId v) const {
    if (v >= labels_.size()) throw std::out_of_range("node id " + std::to_string(v) + " out of range");
    return labels_[v];
}

const std::vector<NodeId>& Graph::walkable_nodes() const {
    if (walkable_version_ != version_) {
        walkable_cache_.clear();
        for (NodeId v = 0; v < adj_.size(); ++v)
            if (!removed_[v] && !adj_[v].empty()) walkable_cache_.push_back(v);
        walkable_version_ = version_;
    }
    return walkable_cache_;
}

Graph load_edge_list(std::istream& in, LoadStats* stats) {
    Graph g;
    LoadStats local;
    std::string line;
    uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream tokens(line);
        std::string a, b, extra, overflow;
        if (!(tokens >> a)) continue; // blank
        if (!(tokens >> b) || (tokens >> extra && tokens >> overflow))
            throw InputError("line " + std::to_string(line_no) + ": expected 2-3 tokens, got '" + line + "'");
        NodeId u = g.intern(a);
        NodeId v = g.intern(b);
        if (u == v) {
            ++local.self_loops_skipped;
            continue;
        }
        if (!g.add_edge(u, v)) ++local.duplicate_edges;
    }
    if (stats) *stats = local;
    return g;
}

Graph load_edge_list_file(const std::string& path, LoadStats* stats) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open graph file: " + path);
    return load_edge_list(in, stats);
}

void save_edge_list(const Graph& g, std::ostream& out) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(g.edge_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (!g.is_active(u)) continue;
        for (NodeId v : g.neighbors(u))
            if (g.directed() || u < v) edges.emplace_back(u, v);
    }
    std::sort(edges.begin(), edges.end());
    for (auto [u, v] : edges) out << g.label(u) << ' ' << g.label(v) << '\n';
}

void save_edge_list_file(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open output file: " + path);
    save_edge_list(g, out);
}

Graph generate_barabasi_albert(uint32_t n, uint32_t m, uint64_t seed) {
    if (m < 1 || n <= m)
        throw ConfigError("barabasi-albert requires n > m >= 1 (got n=" + std::to_string(n) +
                          ", m=" + std::to_string(m) + ")");
    Graph g;
    for (uint32_t i = 0; i < n; ++i) g.intern("n" + std::to_string(i));
    // Core m-clique so every start node has degree >= 1.
    for (uint32_t i = 0; i < m; ++i)
        for (uint32_t j = i + 1; j < m; ++j) g.add_edge(i, j);

    SplitMix64 rng(mix64(seed ^ 0xba7aba51a1be27ULL));
    // One slot per degree unit; sampling from it is sampling by degree.
    std::vector<NodeId> slots;
    slots.reserve(2ull * (static_cast<uint64_t>(m) * (n - m) + m * (m - 1) / 2));
    for (uint32_t i = 0; i < m; ++i)
        for (uint32_t j = 0; j < m - 1; ++j) slots.push_back(i);

    std::vector<NodeId> picked;
    picked.reserve(m);
    for (uint32_t v = m; v < n; ++v) {
        picked.clear();
        while (picked.size() < m) {
            NodeId target;
            if (slots.empty()) {
                target = static_cast<NodeId>(rng.bounded(v)); // degenerate m=1 start: uniform
            } else {
                target = slots[rng.bounded(slots.size())];
            }
            if (target == v) continue;
            if (std::find(picked.begin(), picked.end(), target) != picked.end()) continue;
            picked.push_back(target);
        }
        for (NodeId t : picked) {
            g.add_edge(v, t);
            slots.push_back(v);
            slots.push_back(t);
        }
    }
    return g;
}

Graph generate_ring_of_cliques(uint32_t k, uint32_t c) {
    if (k < 2 || c < 3)
        throw ConfigError("ring-of-cliques requires k >= 2, c >= 3 (got k=" + std::to_string(k) +
                          ", c=" + std::to_string(c) + ")");
    Graph g;
    for (uint32_t j = 0; j < k; ++j)
        for (uint32_t i = 0; i < c; ++i) g.intern("c" + std::to_string(j) + "_" + std::to_string(i));
    for (uint32_t j = 0; j < k; ++j) {
        NodeId base = j * c;
        for (uint32_t a = 0; a < c; ++a)
            for (uint32_t b = a + 1; b < c; ++b) g.add_edge(base + a, base + b);
    }
    // Bridge: last node of clique j to first node of clique j+1.
    for (uint32_t j = 0; j < k; ++j) {
        NodeId from = j * c + (c - 1);
        NodeId to = ((j + 1) % k) * c;
        g.add_edge(from, to);
    }
    return g;
}

double avg_clustering(const Graph& g) {
    if (g.active_node_count() == 0) return 0.0;
    double sum = 0.0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!g.is_active(v)) continue;
        const auto& nbs = g.neighbors(v);
        size_t deg = nbs.size();
        if (deg < 2) continue;
        uint64_t links = 0;
        for (size_t i = 0; i < deg; ++i) {
            const auto& other = g.neighbors(nbs[i]);
            // sorted lists: count common neighbors of v and nbs[i] above nbs[i]
            for (size_t j = i + 1; j < deg; ++j)
                if (std::binary_search(other.begin(), other.end(), nbs[j])) ++links;
        }
        sum += 2.0 * static_cast<double>(links) / (static_cast<double>(deg) * (deg - 1));
    }
    return sum / static_cast<double>(g.active_node_count());
}

GraphMetrics graph_metrics(const Graph& g) {
    GraphMetrics m;
    m.avg_clustering = avg_clustering(g);
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (g.is_active(v)) ++m.degree_histogram[g.degree(v)];
    return m;
}

} // namespace entropywalk

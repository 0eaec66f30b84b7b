#include "entropywalk/streaming.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "entropywalk/entropy.hpp"
#include "entropywalk/errors.hpp"

namespace entropywalk {

CountMinSketch::CountMinSketch(uint32_t width, uint32_t depth, uint64_t seed)
    : width_(width), depth_(depth), counters_(static_cast<size_t>(width) * depth, 0) {
    if (width < 1 || depth < 1) throw ConfigError("count-min sketch needs width, depth >= 1");
    row_seeds_.reserve(depth);
    for (uint32_t r = 0; r < depth; ++r) row_seeds_.push_back(mix64(seed + r));
}

void CountMinSketch::update(uint64_t key, uint64_t inc) {
    for (uint32_t r = 0; r < depth_; ++r) {
        size_t col = mix64(row_seeds_[r] ^ key) % width_;
        counters_[static_cast<size_t>(r) * width_ + col] += inc;
    }
}

uint64_t CountMinSketch::estimate(uint64_t key) const {
    uint64_t est = std::numeric_limits<uint64_t>::max();
    for (uint32_t r = 0; r < depth_; ++r) {
        size_t col = mix64(row_seeds_[r] ^ key) % width_;
        est = std::min(est, counters_[static_cast<size_t>(r) * width_ + col]);
    }
    return est;
}

void CountMinSketch::halve() {
    for (auto& c : counters_) c >>= 1;
}

uint64_t TopN::min_estimate() const {
    uint64_t best = std::numeric_limits<uint64_t>::max();
    for (const auto& [_, est] : entries_) best = std::min(best, est);
    return best;
}

bool TopN::offer(const CommunityKey& key, uint64_t estimate) {
    if (capacity_ == 0) return false;
    if (auto it = entries_.find(key); it != entries_.end()) {
        it->second = estimate;
        return true;
    }
    if (entries_.size() < capacity_) {
        entries_.emplace(key, estimate);
        return true;
    }
    // Evict the weakest entry; ties evict the lexicographically largest key
    // so the surviving set is deterministic.
    auto victim = entries_.end();
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
        if (victim == entries_.end() || it->second < victim->second ||
            (it->second == victim->second && victim->first < it->first))
            victim = it;
    }
    if (victim->second >= estimate) return false;
    entries_.erase(victim);
    entries_.emplace(key, estimate);
    return true;
}

void TopN::halve() {
    for (auto& [_, est] : entries_) est >>= 1;
}

std::vector<std::pair<CommunityKey, uint64_t>> TopN::ranked() const {
    std::vector<std::pair<CommunityKey, uint64_t>> out(entries_.begin(), entries_.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

GraphMutation parse_mutation(std::string_view line) {
    std::istringstream in{std::string(line)};
    std::string op, a, b, extra;
    in >> op >> a;
    bool edge = op == "+e" || op == "-e";
    if (edge) in >> b;
    if (op.empty() || a.empty() || (edge && b.empty()) || (in >> extra))
        throw InputError("malformed mutation line: '" + std::string(line) + "'");
    GraphMutation m;
    m.a = a;
    m.b = b;
    if (op == "+e") m.kind = GraphMutation::Kind::AddEdge;
    else if (op == "-e") m.kind = GraphMutation::Kind::RemoveEdge;
    else if (op == "+n") m.kind = GraphMutation::Kind::AddNode;
    else if (op == "-n") m.kind = GraphMutation::Kind::RemoveNode;
    else throw InputError("unknown mutation op '" + op + "' in line: '" + std::string(line) + "'");
    return m;
}

std::string format_mutation(const GraphMutation& m) {
    switch (m.kind) {
        case GraphMutation::Kind::AddEdge: return "+e " + m.a + " " + m.b;
        case GraphMutation::Kind::RemoveEdge: return "-e " + m.a + " " + m.b;
        case GraphMutation::Kind::AddNode: return "+n " + m.a;
        case GraphMutation::Kind::RemoveNode: return "-n " + m.a;
    }
    return {};
}

bool apply_mutation(Graph& g, const GraphMutation& m) {
    switch (m.kind) {
        case GraphMutation::Kind::AddEdge: {
            if (m.a == m.b) throw MutationError("self-loop edge on '" + m.a + "'");
            NodeId u = g.intern(m.a);
            NodeId v = g.intern(m.b);
            return g.add_edge(u, v);
        }
        case GraphMutation::Kind::RemoveEdge: {
            auto u = g.find(m.a), v = g.find(m.b);
            if (!u || !v)
                throw MutationError("remove-edge references unknown label '" +
                                    (!u ? m.a : m.b) + "'");
            if (!g.remove_edge(*u, *v))
                throw MutationError("edge " + m.a + "-" + m.b + " does not exist");
            return true;
        }
        case GraphMutation::Kind::AddNode: {
            if (g.find(m.a)) return false;
            g.intern(m.a);
            return true;
        }
        case GraphMutation::Kind::RemoveNode: {
            auto v = g.find(m.a);
            if (!v) throw MutationError("remove-node references unknown label '" + m.a + "'");
            g.remove_node(*v);
            return true;
        }
    }
    return false;
}

StreamStats stream_loop(Graph& g, const WalkParams& p, CountMinSketch& cms, TopN& topn,
                        const MutationSource& source, const StreamConfig& cfg,
                        const SnapshotSink& sink) {
    p.validate();
    StreamStats stats;
    const uint32_t key_width = cfg.key_width ? cfg.key_width : p.min_members;
    bool source_open = static_cast<bool>(source);

    auto drain_one = [&]() -> bool {
        if (!source_open) return false;
        auto m = source();
        if (!m) {
            source_open = false;
            return false;
        }
        try {
            if (apply_mutation(g, *m)) ++stats.mutations_applied;
            else ++stats.mutation_noops;
        } catch (const MutationError&) {
            ++stats.mutation_errors;
        }
        return true;
    };

    auto emit_snapshot = [&]() {
        if (!sink) return;
        Snapshot snap;
        snap.tours_done = stats.tours;
        for (auto& [key, est] : topn.ranked())
            if (est >= cfg.min_matches) snap.top.push_back({std::move(key), est});
        ++stats.snapshots;
        sink(snap);
    };

    uint64_t next_decay = cfg.decay_interval;
    while (stats.tours < cfg.budget_tours) {
        // Tour boundary: apply pending mutations, then decay.
        for (uint32_t i = 0; i < cfg.mutations_per_tour && drain_one(); ++i) {}
        if (cfg.decay_interval && stats.tours >= next_decay) {
            cms.halve();
            topn.halve();
            next_decay += cfg.decay_interval;
        }

        if (g.walkable_nodes().empty() ||
            (p.start && (!g.is_active(*p.start) || g.degree(*p.start) == 0))) {
            // Nothing to walk; only more mutations can change that.
            if (drain_one()) continue;
            break;
        }

        SplitMix64 rng = tour_stream(p.master_seed, stats.tours);
        const auto& walkable = g.walkable_nodes();
        Tour t;
        bool complete = false;
        for (int tries = 0; tries < 1000 && !complete; ++tries) {
            NodeId start = p.start ? *p.start : walkable[rng.bounded(walkable.size())];
            t = random_tour(g, start, p.length, rng);
            complete = t.complete;
        }
        if (!complete) break; // graph starves walks and no mutation can fire mid-tour
        ++stats.tours;

        if (accept_tour(t, p.entropy_threshold)) {
            ++stats.accepted;
            if (auto key = tour_key(t, key_width)) {
                cms.update(*key, 1);
                topn.offer(*key, cms.estimate(*key));
            } else {
                ++stats.key_underflow;
            }
        }

        if (cfg.snapshot_interval && stats.tours % cfg.snapshot_interval == 0) emit_snapshot();
    }
    return stats;
}

} // namespace entropywalk

#include "entropywalk/walker.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <thread>

#include "entropywalk/errors.hpp"

namespace entropywalk {

void WalkParams::validate() const {
    if (length < 2) throw ConfigError("tour length must be >= 2 visits");
    if (min_members < 1 || min_members > max_members || max_members > length)
        throw ConfigError("need 1 <= min-members <= max-members <= length");
    if (!(entropy_threshold > 0.0) || entropy_threshold > 1.0)
        throw ConfigError("entropy threshold must be in (0, 1]");
}

uint32_t Tour::count_of(NodeId v) const {
    auto it = std::lower_bound(freq.begin(), freq.end(), v,
                               [](const auto& entry, NodeId id) { return entry.first < id; });
    return (it != freq.end() && it->first == v) ? it->second : 0;
}

void Tour::rebuild_freq() {
    std::vector<NodeId> sorted(visits);
    std::sort(sorted.begin(), sorted.end());
    freq.clear();
    for (size_t i = 0; i < sorted.size();) {
        size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        freq.emplace_back(sorted[i], static_cast<uint32_t>(j - i));
        i = j;
    }
}

Tour random_tour(const Graph& g, NodeId start, uint32_t length, SplitMix64& rng) {
    if (g.degree(start) == 0)
        throw ConfigError("start node '" + g.label(start) + "' has no edges");
    Tour t;
    t.start = start;
    t.visits.reserve(length);
    NodeId v = start;
    t.visits.push_back(v);
    while (t.visits.size() < length) {
        const auto& nbs = g.neighbors(v);
        if (nbs.empty()) break; // dead end (directed graphs)
        v = nbs[rng.bounded(nbs.size())];
        t.visits.push_back(v);
    }
    t.complete = t.visits.size() == length;
    t.rebuild_freq();
    return t;
}

namespace {

constexpr uint64_t kMaxAttemptsPerTour = 100000;

/// Generates the i-th complete tour of a run; dead-end walks retry with a
/// fresh start from the same stream.
Tour complete_tour(const Graph& g, const WalkParams& p, const std::vector<NodeId>& walkable,
                   uint64_t index, uint64_t& attempts) {
    SplitMix64 rng = tour_stream(p.master_seed, index);
    for (uint64_t tries = 0; tries < kMaxAttemptsPerTour; ++tries) {
        NodeId start = p.start ? *p.start
                               : walkable[rng.bounded(walkable.size())];
        ++attempts;
        Tour t = random_tour(g, start, p.length, rng);
        if (t.complete) return t;
    }
    throw ConfigError("walks keep hitting dead ends; graph is not traversable at length " +
                      std::to_string(p.length));
}

} // namespace

RunStats run_tours(const Graph& g, const WalkParams& p, const TourPredicate& accept,
                   const TourSink& sink, unsigned threads) {
    p.validate();
    const auto& walkable = g.walkable_nodes();
    if (walkable.empty()) throw ConfigError("graph has no node with degree >= 1");
    if (p.start) {
        if (!g.is_active(*p.start)) throw ConfigError("start node was removed");
        if (g.degree(*p.start) == 0)
            throw ConfigError("start node '" + g.label(*p.start) + "' has no edges");
    }

    RunStats stats;
    auto t0 = std::chrono::steady_clock::now();
    if (p.tours > 0) {
        unsigned workers = std::max(1u, threads);
        if (workers > 1 && p.tours < workers) workers = static_cast<unsigned>(p.tours);

        std::atomic<uint64_t> next_index{0};
        std::atomic<uint64_t> attempts{0}, accepted{0}, rejected{0};

        // Reorder buffer: tours are generated in parallel but delivered to the
        // sink serially in index order, which makes any sink
        // schedule-independent.
        std::mutex delivery_mutex;
        std::map<uint64_t, std::optional<Tour>> pending;
        uint64_t deliver_next = 0;
        std::exception_ptr failure;
        std::mutex failure_mutex;

        auto work = [&]() {
            try {
                for (;;) {
                    uint64_t i = next_index.fetch_add(1, std::memory_order_relaxed);
                    if (i >= p.tours) break;
                    uint64_t local_attempts = 0;
                    Tour t = complete_tour(g, p, walkable, i, local_attempts);
                    attempts.fetch_add(local_attempts, std::memory_order_relaxed);
                    bool ok = accept(t);
                    (ok ? accepted : rejected).fetch_add(1, std::memory_order_relaxed);

                    std::lock_guard lock(delivery_mutex);
                    pending.emplace(i, ok ? std::optional<Tour>(std::move(t)) : std::nullopt);
                    while (!pending.empty() && pending.begin()->first == deliver_next) {
                        auto node = pending.extract(pending.begin());
                        if (node.mapped() && sink) sink(*node.mapped());
                        ++deliver_next;
                    }
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next_index.store(p.tours, std::memory_order_relaxed); // stop everyone
            }
        };

        if (workers == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
            for (auto& th : pool) th.join();
        }
        if (failure) std::rethrow_exception(failure);

        stats.tours = p.tours;
        stats.attempts = attempts.load();
        stats.accepted = accepted.load();
        stats.rejected = rejected.load();
    }
    stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return stats;
}

RunStats personalized_tours(const Graph& g, WalkParams p, NodeId start,
                            const TourPredicate& accept, const TourSink& sink,
                            unsigned threads) {
    p.start = start;
    return run_tours(g, p, accept, sink, threads);
}

} // namespace entropywalk

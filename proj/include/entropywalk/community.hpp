#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "entropywalk/rng.hpp"
#include "entropywalk/walker.hpp"

namespace entropywalk {

/// Bucket key: the n most frequent nodes of a tour, ascending by id.
/// Tours of the same community keep revisiting the same core nodes, so they
/// collide here and merge (the single-minhash shortcut; banded minhash LSH
/// is the general fallback).
struct CommunityKey {
    std::vector<NodeId> members;

    friend bool operator==(const CommunityKey&, const CommunityKey&) = default;
    friend auto operator<=>(const CommunityKey&, const CommunityKey&) = default;
};

struct CommunityKeyHash {
    size_t operator()(const CommunityKey& k) const {
        uint64_t h = 0x9ae16a3b2f90404fULL;
        for (NodeId v : k.members) h = mix64(h ^ v);
        return static_cast<size_t>(h);
    }
};

/// Order-insensitive 64-bit digest of a key, for sketch hashing.
inline uint64_t key_digest(const CommunityKey& k) {
    uint64_t h = 0x2545f4914f6cdd1dULL;
    for (NodeId v : k.members) h = mix64(h ^ v);
    return h;
}

/// Merged record of all tours that hit the same bucket. freq accumulates
/// the node frequencies of every merged tour; matches counts them.
struct Community {
    CommunityKey key;
    std::vector<std::pair<NodeId, uint64_t>> freq; // sorted by node id
    uint64_t matches = 0;
    std::vector<NodeId> anchor; // founding tour's distinct set (LSH mode only)
};

/// The n most frequent nodes of the tour, ties broken by ascending node id.
/// nullopt when the tour has fewer than n distinct nodes (key underflow).
std::optional<CommunityKey> tour_key(const Tour& t, uint32_t n);

std::vector<uint64_t> minhash_signature(std::span<const NodeId> node_set, uint32_t hash_count,
                                        uint64_t seed);

/// One bucket id per band, hashing the band's row slice of the signature.
std::vector<uint64_t> lsh_band_buckets(std::span<const uint64_t> signature, uint32_t bands,
                                       uint32_t rows);

double jaccard(std::span<const NodeId> a, std::span<const NodeId> b); // sorted inputs

struct LshParams {
    uint32_t bands = 8;
    uint32_t rows = 4;
    double j_min = 0.6;
    uint64_t seed = 0x15ee71e5ULL;
};

/// Bucketed community table. Default mode keys tours by their top-n nodes;
/// LSH mode banded-minhashes the tour's distinct node set and merges into
/// the first banded collision that clears the Jaccard floor.
///
/// Frequency-key merging is commutative and associative, so the stored
/// result is independent of insertion order; LSH mode is deterministic for a
/// fixed insertion order (run_tours delivers tours in index order).
class CommunityStore {
public:
    explicit CommunityStore(uint32_t key_width);
    CommunityStore(uint32_t key_width, const LshParams& lsh);

    /// insert-or-merge of an accepted tour. Returns false (and counts it)
    /// when the tour has fewer than key_width distinct nodes.
    bool insert(const Tour& t);

    size_t bucket_count() const { return communities_.size(); }
    uint64_t accepted_total() const { return accepted_total_; }
    uint64_t key_underflow() const { return key_underflow_; }
    uint32_t key_width() const { return key_width_; }
    const std::vector<Community>& communities() const { return communities_; }

private:
    uint32_t key_width_;
    bool use_lsh_ = false;
    LshParams lsh_;
    std::vector<Community> communities_;
    std::unordered_map<CommunityKey, size_t, CommunityKeyHash> by_key_;
    std::vector<std::unordered_map<uint64_t, std::vector<size_t>>> band_index_;
    uint64_t accepted_total_ = 0;
    uint64_t key_underflow_ = 0;
};

/// Community members: nodes averaging at least one visit per merged tour
/// (freq >= matches), ranked by cumulative freq, ties by id, capped at maxm.
/// Returns empty (community suppressed) when fewer than minm nodes qualify.
std::vector<NodeId> extract_members(const Community& c, uint32_t minm, uint32_t maxm);

/// Communities with matches >= min_matches, ranked by matches descending
/// then key ascending; at most k entries.
std::vector<const Community*> top_communities(const CommunityStore& store, size_t k,
                                              uint64_t min_matches = 1);

} // namespace entropywalk

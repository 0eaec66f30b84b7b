#include "entropywalk/community.hpp"

#include <algorithm>

namespace entropywalk {

std::optional<CommunityKey> tour_key(const Tour& t, uint32_t n) {
    if (t.distinct() < n) return std::nullopt;
    std::vector<std::pair<NodeId, uint32_t>> ranked(t.freq);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    CommunityKey key;
    key.members.reserve(n);
    for (uint32_t i = 0; i < n; ++i) key.members.push_back(ranked[i].first);
    std::sort(key.members.begin(), key.members.end());
    return key;
}

std::vector<uint64_t> minhash_signature(std::span<const NodeId> node_set, uint32_t hash_count,
                                        uint64_t seed) {
    if (node_set.empty()) return {};
    std::vector<uint64_t> sig(hash_count, ~0ULL);
    for (NodeId v : node_set) {
        uint64_t base = mix64(seed ^ mix64(v + 0x7f4a7c15ULL));
        for (uint32_t i = 0; i < hash_count; ++i) {
            uint64_t h = mix64(base + i * 0xc2b2ae3d27d4eb4fULL);
            if (h < sig[i]) sig[i] = h;
        }
    }
    return sig;
}

std::vector<uint64_t> lsh_band_buckets(std::span<const uint64_t> signature, uint32_t bands,
                                       uint32_t rows) {
    std::vector<uint64_t> buckets(bands);
    for (uint32_t b = 0; b < bands; ++b) {
        uint64_t h = 0x51ee7ea15ULL + b;
        for (uint32_t r = 0; r < rows; ++r) h = mix64(h ^ signature[b * rows + r]);
        buckets[b] = h;
    }
    return buckets;
}

double jaccard(std::span<const NodeId> a, std::span<const NodeId> b) {
    if (a.empty() && b.empty()) return 1.0;
    size_t i = 0, j = 0, both = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++both;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return static_cast<double>(both) / static_cast<double>(a.size() + b.size() - both);
}

CommunityStore::CommunityStore(uint32_t key_width) : key_width_(key_width) {}

CommunityStore::CommunityStore(uint32_t key_width, const LshParams& lsh)
    : key_width_(key_width), use_lsh_(true), lsh_(lsh), band_index_(lsh.bands) {}

namespace {

void merge_freq(std::vector<std::pair<NodeId, uint64_t>>& into,
                const std::vector<std::pair<NodeId, uint32_t>>& add) {
    std::vector<std::pair<NodeId, uint64_t>> merged;
    merged.reserve(into.size() + add.size());
    size_t i = 0, j = 0;
    while (i < into.size() || j < add.size()) {
        if (j == add.size() || (i < into.size() && into[i].first < add[j].first)) {
            merged.push_back(into[i++]);
        } else if (i == into.size() || add[j].first < into[i].first) {
            merged.emplace_back(add[j].first, add[j].second);
            ++j;
        } else {
            merged.emplace_back(into[i].first, into[i].second + add[j].second);
            ++i;
            ++j;
        }
    }
    into = std::move(merged);
}

} // namespace

bool CommunityStore::insert(const Tour& t) {
    auto key = tour_key(t, key_width_);
    if (!key) {
        ++key_underflow_;
        return false;
    }

    size_t slot;
    if (!use_lsh_) {
        auto [it, fresh] = by_key_.try_emplace(*key, communities_.size());
        slot = it->second;
        if (fresh) {
            Community c;
            c.key = std::move(*key);
            communities_.push_back(std::move(c));
        }
    } else {
        std::vector<NodeId> node_set;
        node_set.reserve(t.freq.size());
        for (const auto& [v, _] : t.freq) node_set.push_back(v);

        auto sig = minhash_signature(node_set, lsh_.bands * lsh_.rows, lsh_.seed);
        auto buckets = lsh_band_buckets(sig, lsh_.bands, lsh_.rows);

        // First banded collision that clears the Jaccard floor wins; bands
        // and candidates are scanned in stable order.
        std::optional<size_t> found;
        for (uint32_t b = 0; b < lsh_.bands && !found; ++b) {
            auto it = band_index_[b].find(buckets[b]);
            if (it == band_index_[b].end()) continue;
            for (size_t idx : it->second) {
                if (jaccard(node_set, communities_[idx].anchor) >= lsh_.j_min) {
                    found = idx;
                    break;
                }
            }
        }
        if (found) {
            slot = *found;
        } else {
            slot = communities_.size();
            Community c;
            c.key = std::move(*key);
            c.anchor = std::move(node_set);
            communities_.push_back(std::move(c));
            for (uint32_t b = 0; b < lsh_.bands; ++b)
                band_index_[b][buckets[b]].push_back(slot);
        }
    }

    Community& c = communities_[slot];
    merge_freq(c.freq, t.freq);
    ++c.matches;
    ++accepted_total_;
    return true;
}

std::vector<NodeId> extract_members(const Community& c, uint32_t minm, uint32_t maxm) {
    std::vector<std::pair<NodeId, uint64_t>> core;
    for (const auto& entry : c.freq)
        if (entry.second >= c.matches) core.push_back(entry);
    if (core.size() < minm) return {};
    std::sort(core.begin(), core.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (core.size() > maxm) core.resize(maxm);
    std::vector<NodeId> members;
    members.reserve(core.size());
    for (const auto& [v, _] : core) members.push_back(v);
    return members;
}

std::vector<const Community*> top_communities(const CommunityStore& store, size_t k,
                                              uint64_t min_matches) {
    std::vector<const Community*> out;
    for (const auto& c : store.communities())
        if (c.matches >= min_matches) out.push_back(&c);
    std::sort(out.begin(), out.end(), [](const Community* a, const Community* b) {
        if (a->matches != b->matches) return a->matches > b->matches;
        return a->key < b->key;
    });
    if (out.size() > k) out.resize(k);
    return out;
}

} // namespace entropywalk

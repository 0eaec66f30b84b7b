#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entropywalk/centrality.hpp"
#include "entropywalk/community.hpp"
#include "entropywalk/graph.hpp"
#include "entropywalk/streaming.hpp"
#include "entropywalk/walker.hpp"

namespace entropywalk {

enum class ReportFormat { Tsv, Json };

/// "tsv" or "json". Throws ConfigError otherwise.
ReportFormat parse_format(std::string_view name);

struct MemberEntry {
    NodeId node;
    uint64_t freq; // cumulative visit count across merged tours
};

struct CommunityRow {
    uint64_t rank = 0; // 1-based after sorting
    uint64_t matches = 0;
    std::vector<MemberEntry> members; // ranked by freq desc, ties by id
};

/// Ranked community rows: matches descending, ties by key ascending, capped
/// at k (k=0 = no cap). Suppressed communities (fewer than minm qualifying
/// members) are dropped. require_member keeps only rows whose member list
/// contains that node (personalized circles).
std::vector<CommunityRow> build_community_rows(const CommunityStore& store, uint32_t minm,
                                               uint32_t maxm, size_t k, uint64_t min_matches = 1,
                                               std::optional<NodeId> require_member = {});

/// One record per community: matches, member labels ranked by freq with
/// per-member cumulative counts.
void write_communities(std::ostream& out, const Graph& g, const std::vector<CommunityRow>& rows,
                       ReportFormat fmt);

struct CentralityRow {
    NodeId node = 0;
    double walk_score = 0.0;
    double reference_score = 0.0;
    double delta = 0.0;
    bool peak = false;
};

/// One row per active node, ascending by id.
std::vector<CentralityRow> build_centrality_rows(const Graph& g, const CentralityTable& walk,
                                                 const EigenvectorResult& reference,
                                                 const DeltaReport& report);

/// Columns: label, walk_score, reference_score, delta, peak.
void write_centrality(std::ostream& out, const Graph& g, const std::vector<CentralityRow>& rows,
                      ReportFormat fmt);

struct SweepPoint {
    double x = 0.0;
    double mean = 0.0;
    double sd = 0.0;
    uint64_t replicates = 0;
};

/// CSV with the fixed header `x,mean,sd,replicates`.
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);

/// One-line JSON object: tour counter plus ranked keys (member labels) with
/// their sketch estimates.
std::string snapshot_json_line(const Graph& g, const Snapshot& snap);

void write_run_stats(std::ostream& out, const RunStats& stats, const CommunityStore& store);
void write_stream_stats(std::ostream& out, const StreamStats& stats);

} // namespace entropywalk

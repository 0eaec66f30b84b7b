#include "entropywalk/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "json.hpp"

#include "entropywalk/errors.hpp"

namespace entropywalk {

namespace {

// Shortest round-trip-safe decimal form, deterministic for a given build.
std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

ReportFormat parse_format(std::string_view name) {
    if (name == "tsv") return ReportFormat::Tsv;
    if (name == "json") return ReportFormat::Json;
    throw ConfigError("unknown output format '" + std::string(name) + "' (expected tsv or json)");
}

std::vector<CommunityRow> build_community_rows(const CommunityStore& store, uint32_t minm,
                                               uint32_t maxm, size_t k, uint64_t min_matches,
                                               std::optional<NodeId> require_member) {
    std::vector<CommunityRow> rows;
    for (const Community* c : top_communities(store, store.bucket_count(), min_matches)) {
        auto members = extract_members(*c, minm, maxm);
        if (members.empty()) continue;
        if (require_member &&
            std::find(members.begin(), members.end(), *require_member) == members.end())
            continue;
        CommunityRow row;
        row.matches = c->matches;
        row.members.reserve(members.size());
        for (NodeId v : members) {
            auto it = std::lower_bound(c->freq.begin(), c->freq.end(), v,
                                       [](const auto& e, NodeId x) { return e.first < x; });
            row.members.push_back({v, it->second});
        }
        rows.push_back(std::move(row));
        if (k && rows.size() == k) break;
    }
    for (size_t i = 0; i < rows.size(); ++i) rows[i].rank = i + 1;
    return rows;
}

void write_communities(std::ostream& out, const Graph& g, const std::vector<CommunityRow>& rows,
                       ReportFormat fmt) {
    if (fmt == ReportFormat::Tsv) {
        out << "rank\tmatches\tsize\tmembers\n";
        for (const auto& row : rows) {
            out << row.rank << '\t' << row.matches << '\t' << row.members.size() << '\t';
            for (size_t i = 0; i < row.members.size(); ++i) {
                if (i) out << ',';
                out << g.label(row.members[i].node) << ':' << row.members[i].freq;
            }
            out << '\n';
        }
        return;
    }
    nlohmann::json doc;
    doc["communities"] = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json members = nlohmann::json::array();
        for (const auto& m : row.members)
            members.push_back({{"label", g.label(m.node)}, {"freq", m.freq}});
        doc["communities"].push_back(
            {{"rank", row.rank}, {"matches", row.matches}, {"members", std::move(members)}});
    }
    out << doc.dump(2) << '\n';
}

std::vector<CentralityRow> build_centrality_rows(const Graph& g, const CentralityTable& walk,
                                                 const EigenvectorResult& reference,
                                                 const DeltaReport& report) {
    auto walk_scores = walk.scores();
    std::vector<CentralityRow> rows;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!g.is_active(v)) continue;
        CentralityRow row;
        row.node = v;
        row.walk_score = walk_scores[v];
        row.reference_score = reference.scores[v];
        row.delta = report.delta[v];
        row.peak = std::binary_search(report.peaks.begin(), report.peaks.end(), v);
        rows.push_back(row);
    }
    return rows;
}

void write_centrality(std::ostream& out, const Graph& g, const std::vector<CentralityRow>& rows,
                      ReportFormat fmt) {
    if (fmt == ReportFormat::Tsv) {
        out << "label\twalk_score\treference_score\tdelta\tpeak\n";
        for (const auto& row : rows)
            out << g.label(row.node) << '\t' << fmt_double(row.walk_score) << '\t'
                << fmt_double(row.reference_score) << '\t' << fmt_double(row.delta) << '\t'
                << (row.peak ? 1 : 0) << '\n';
        return;
    }
    nlohmann::json doc;
    doc["nodes"] = nlohmann::json::array();
    for (const auto& row : rows)
        doc["nodes"].push_back({{"label", g.label(row.node)},
                                {"walk_score", row.walk_score},
                                {"reference_score", row.reference_score},
                                {"delta", row.delta},
                                {"peak", row.peak}});
    out << doc.dump(2) << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
    out << "x,mean,sd,replicates\n";
    for (const auto& p : points)
        out << fmt_double(p.x) << ',' << fmt_double(p.mean) << ',' << fmt_double(p.sd) << ','
            << p.replicates << '\n';
}

std::string snapshot_json_line(const Graph& g, const Snapshot& snap) {
    nlohmann::json doc;
    doc["tours"] = snap.tours_done;
    doc["top"] = nlohmann::json::array();
    for (const auto& entry : snap.top) {
        nlohmann::json labels = nlohmann::json::array();
        for (NodeId v : entry.key.members) labels.push_back(g.label(v));
        doc["top"].push_back({{"key", std::move(labels)}, {"estimate", entry.estimate}});
    }
    return doc.dump();
}

void write_run_stats(std::ostream& out, const RunStats& stats, const CommunityStore& store) {
    out << "tours=" << stats.tours << " attempts=" << stats.attempts
        << " accepted=" << stats.accepted << " rejected=" << stats.rejected
        << " buckets=" << store.bucket_count() << " key_underflow=" << store.key_underflow()
        << " wall_seconds=" << fmt_double(stats.wall_seconds) << '\n';
}

void write_stream_stats(std::ostream& out, const StreamStats& stats) {
    out << "tours=" << stats.tours << " accepted=" << stats.accepted
        << " key_underflow=" << stats.key_underflow
        << " mutations_applied=" << stats.mutations_applied
        << " mutation_noops=" << stats.mutation_noops
        << " mutation_errors=" << stats.mutation_errors << " snapshots=" << stats.snapshots
        << '\n';
}

} // namespace entropywalk

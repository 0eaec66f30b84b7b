#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "entropywalk/centrality.hpp"
#include "entropywalk/community.hpp"
#include "entropywalk/entropy.hpp"
#include "entropywalk/errors.hpp"
#include "entropywalk/graph.hpp"
#include "entropywalk/report.hpp"
#include "entropywalk/streaming.hpp"
#include "entropywalk/walker.hpp"

namespace ew = entropywalk;

namespace {

struct GraphSource {
    std::string path;
    std::string model;
    uint32_t n = 1000;
    uint32_t m = 2;
    uint32_t k = 4;
    uint32_t c = 5;
    uint64_t gen_seed = 1;
};

void add_graph_source(CLI::App* cmd, GraphSource& src) {
    cmd->add_option("--graph", src.path, "edge-list file (label pairs, # comments)");
    cmd->add_option("--model", src.model, "generator instead of a file: ba | ring");
    cmd->add_option("--n", src.n, "ba: node count")->capture_default_str();
    cmd->add_option("--m", src.m, "ba: edges per new node")->capture_default_str();
    cmd->add_option("--k", src.k, "ring: clique count")->capture_default_str();
    cmd->add_option("--c", src.c, "ring: clique size")->capture_default_str();
    cmd->add_option("--gen-seed", src.gen_seed, "generator seed")->capture_default_str();
}

ew::Graph resolve_graph(const GraphSource& src) {
    const bool has_file = !src.path.empty();
    const bool has_model = !src.model.empty();
    if (has_file == has_model)
        throw ew::ConfigError("need exactly one graph source: --graph FILE or --model NAME");
    if (has_file) {
        ew::LoadStats stats;
        ew::Graph g = ew::load_edge_list_file(src.path, &stats);
        if (stats.self_loops_skipped || stats.duplicate_edges)
            std::cerr << "note: skipped " << stats.self_loops_skipped
                      << " self-loops, collapsed " << stats.duplicate_edges
                      << " duplicate edges\n";
        return g;
    }
    if (src.model == "ba") return ew::generate_barabasi_albert(src.n, src.m, src.gen_seed);
    if (src.model == "ring") return ew::generate_ring_of_cliques(src.k, src.c);
    throw ew::ConfigError("unknown model '" + src.model + "' (expected ba or ring)");
}

void add_walk_flags(CLI::App* cmd, ew::WalkParams& p) {
    cmd->add_option("--tours", p.tours, "number of complete tours to simulate")
        ->capture_default_str();
    cmd->add_option("--length", p.length, "visits per tour (hops = length - 1)")
        ->capture_default_str();
    cmd->add_option("--min", p.min_members, "minimum community member count")
        ->capture_default_str();
    cmd->add_option("--max", p.max_members, "maximum community member count")
        ->capture_default_str();
    cmd->add_option("--et", p.entropy_threshold, "entropy-ratio acceptance threshold, (0,1]")
        ->capture_default_str();
    cmd->add_option("--seed", p.master_seed, "master seed for walk randomness")
        ->capture_default_str();
}

struct OutputTarget {
    std::string path;     // empty or "-" means stdout
    std::ofstream file;
    std::ostream& open() {
        if (path.empty() || path == "-") return std::cout;
        file.open(path);
        if (!file) throw ew::InputError("cannot open output file '" + path + "'");
        return file;
    }
};

void add_common_flags(CLI::App* cmd, OutputTarget& out, std::string& format, unsigned& threads) {
    cmd->add_option("--output", out.path, "write report here instead of stdout");
    cmd->add_option("--format", format, "report format: tsv | json")->capture_default_str();
    cmd->add_option("--threads", threads, "walker worker threads")
        ->envname("ENTROPYWALK_THREADS")
        ->capture_default_str();
}

struct DetectOpts {
    GraphSource src;
    ew::WalkParams params;
    OutputTarget out;
    std::string format = "tsv";
    unsigned threads = 1;
    size_t top = 0;            // 0 = all
    uint64_t min_matches = 1;
    uint32_t key_width = 0;    // 0 = --min
    bool lsh = false;
    std::string seed_node;     // circles only
};

int run_detect(DetectOpts& o, bool circles) {
    ew::ReportFormat fmt = ew::parse_format(o.format);
    ew::Graph g = resolve_graph(o.src);

    std::optional<ew::NodeId> seed_id;
    if (circles) {
        seed_id = g.find(o.seed_node);
        if (!seed_id)
            throw ew::InputError("seed node '" + o.seed_node + "' is not in the graph");
        o.params.start = seed_id;
    }

    const uint32_t width = o.key_width ? o.key_width : o.params.min_members;
    ew::CommunityStore store =
        o.lsh ? ew::CommunityStore(width, ew::LshParams{}) : ew::CommunityStore(width);

    auto accept = [&](const ew::Tour& t) { return ew::accept_tour(t, o.params.entropy_threshold); };
    auto sink = [&](const ew::Tour& t) { store.insert(t); };
    ew::RunStats stats = ew::run_tours(g, o.params, accept, sink, o.threads);

    auto rows = ew::build_community_rows(store, o.params.min_members, o.params.max_members,
                                         o.top, o.min_matches, seed_id);
    ew::write_communities(o.out.open(), g, rows, fmt);
    ew::write_run_stats(std::cerr, stats, store);
    return 0;
}

struct CentralityOpts {
    GraphSource src;
    ew::WalkParams params;
    OutputTarget out;
    std::string format = "tsv";
    unsigned threads = 1;
    double peak_sigma = 2.0;
    double tol = 1e-10;
    uint32_t max_iter = 100000;
};

int run_centrality(CentralityOpts& o) {
    ew::ReportFormat fmt = ew::parse_format(o.format);
    ew::Graph g = resolve_graph(o.src);

    ew::CentralityTable table(g.node_count());
    auto accept = [&](const ew::Tour& t) { return ew::accept_tour(t, o.params.entropy_threshold); };
    auto sink = [&](const ew::Tour& t) { table.accumulate(t); };
    ew::RunStats stats = ew::run_tours(g, o.params, accept, sink, o.threads);

    ew::EigenvectorResult eig = ew::eigenvector_centrality(g, o.tol, o.max_iter);
    if (eig.restricted_to_largest_component)
        std::cerr << "note: graph is disconnected; eigenvector scores cover the largest "
                     "component only\n";
    ew::DeltaReport delta = ew::centrality_delta(table.scores(), eig.scores, o.peak_sigma);

    auto rows = ew::build_centrality_rows(g, table, eig, delta);
    ew::write_centrality(o.out.open(), g, rows, fmt);
    std::cerr << "tours=" << stats.tours << " accepted=" << stats.accepted
              << " visits=" << table.total() << " peaks=" << delta.peaks.size()
              << " eig_iterations=" << eig.iterations << "\n";
    return 0;
}

struct StreamOpts {
    GraphSource src;
    ew::WalkParams params;
    OutputTarget out;
    std::string format = "json";
    unsigned threads = 1; // accepted for interface symmetry; the loop is serial
    std::string mutations = "-";
    ew::StreamConfig cfg;
    uint32_t cms_width = 2048;
    uint32_t cms_depth = 5;
    size_t top = 10;
};

int run_stream(StreamOpts& o) {
    ew::ReportFormat fmt = ew::parse_format(o.format);
    ew::Graph g = resolve_graph(o.src);

    std::ifstream mfile;
    std::istream* min = &std::cin;
    if (o.mutations != "-") {
        mfile.open(o.mutations);
        if (!mfile) throw ew::InputError("cannot open mutation file '" + o.mutations + "'");
        min = &mfile;
    }
    uint64_t parse_errors = 0;
    ew::MutationSource source = [&]() -> std::optional<ew::GraphMutation> {
        std::string line;
        while (std::getline(*min, line)) {
            auto pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos || line[pos] == '#') continue;
            try {
                return ew::parse_mutation(line);
            } catch (const ew::InputError& e) {
                ++parse_errors;
                std::cerr << "warning: " << e.what() << "\n";
            }
        }
        return std::nullopt;
    };

    ew::CountMinSketch cms(o.cms_width, o.cms_depth);
    ew::TopN topn(o.top);
    std::ostream& out = o.out.open();
    ew::SnapshotSink sink = [&](const ew::Snapshot& snap) {
        if (fmt == ew::ReportFormat::Json) {
            out << ew::snapshot_json_line(g, snap) << "\n";
        } else {
            for (const auto& entry : snap.top) {
                out << snap.tours_done << '\t' << entry.estimate << '\t';
                for (size_t i = 0; i < entry.key.members.size(); ++i) {
                    if (i) out << ',';
                    out << g.label(entry.key.members[i]);
                }
                out << '\n';
            }
        }
        out.flush();
    };

    ew::StreamStats stats = ew::stream_loop(g, o.params, cms, topn, source, o.cfg, sink);
    ew::write_stream_stats(std::cerr, stats);
    if (parse_errors) std::cerr << "mutation parse errors: " << parse_errors << "\n";
    return 0;
}

struct GenOpts {
    std::string model;
    uint32_t n = 1000;
    uint32_t m = 2;
    uint32_t k = 4;
    uint32_t c = 5;
    uint64_t seed = 1;
    OutputTarget out;
    std::string format = "tsv";
};

int run_gen(GenOpts& o) {
    ew::ReportFormat fmt = ew::parse_format(o.format);
    ew::Graph g;
    if (o.model == "ba") g = ew::generate_barabasi_albert(o.n, o.m, o.seed);
    else if (o.model == "ring") g = ew::generate_ring_of_cliques(o.k, o.c);
    else throw ew::ConfigError("unknown model '" + o.model + "' (expected ba or ring)");

    std::ostream& out = o.out.open();
    if (fmt == ew::ReportFormat::Tsv) {
        ew::save_edge_list(g, out);
    } else {
        nlohmann::json doc;
        doc["nodes"] = nlohmann::json::array();
        for (ew::NodeId v = 0; v < g.node_count(); ++v)
            if (g.is_active(v)) doc["nodes"].push_back(g.label(v));
        doc["edges"] = nlohmann::json::array();
        for (ew::NodeId v = 0; v < g.node_count(); ++v) {
            if (!g.is_active(v)) continue;
            for (ew::NodeId w : g.neighbors(v))
                if (v < w) doc["edges"].push_back({g.label(v), g.label(w)});
        }
        out << doc.dump(2) << "\n";
    }
    std::cerr << "nodes=" << g.active_node_count() << " edges=" << g.edge_count() << "\n";
    return 0;
}

struct SweepOpts {
    GraphSource src;
    ew::WalkParams params;
    OutputTarget out;
    std::string format = "tsv";
    unsigned threads = 1;
    std::string axis;
    std::vector<double> values;
    std::string metric = "accepted-fraction";
    uint32_t replicates = 5;
};

int run_sweep(SweepOpts& o) {
    if (o.values.empty()) throw ew::ConfigError("--values must list at least one sweep point");
    if (o.replicates < 1) throw ew::ConfigError("--replicates must be >= 1");
    const bool json = o.format == "json";
    if (!json && o.format != "tsv" && o.format != "csv")
        throw ew::ConfigError("unknown output format '" + o.format + "' (expected tsv or json)");
    if (o.metric != "accepted-fraction" && o.metric != "buckets" && o.metric != "clustering")
        throw ew::ConfigError("unknown metric '" + o.metric +
                              "' (expected accepted-fraction, buckets or clustering)");

    // One measured value for a fixed sweep point and replicate seed.
    auto measure = [&](double x, uint32_t rep) -> double {
        ew::WalkParams p = o.params;
        p.master_seed = o.params.master_seed + rep;
        GraphSource src = o.src;
        src.gen_seed = o.src.gen_seed + rep;

        if (o.axis == "et") {
            if (!(x > 0.0) || x > 1.0)
                throw ew::ConfigError("et sweep values must be in (0, 1]");
            p.entropy_threshold = x;
        } else if (o.axis == "nodes") {
            if (src.model.empty())
                throw ew::ConfigError("node-count sweep needs --model (fixed generator family)");
            uint32_t n = static_cast<uint32_t>(x);
            if (src.model == "ba") src.n = n;
            else src.k = std::max<uint32_t>(2, n / std::max<uint32_t>(1, src.c));
        } else if (o.axis == "m") {
            if (src.model != "ba") throw ew::ConfigError("m sweep needs --model ba");
            src.m = static_cast<uint32_t>(x);
        } else {
            throw ew::ConfigError("unknown sweep axis '" + o.axis +
                                  "' (expected et, nodes or m)");
        }

        ew::Graph g = resolve_graph(src);
        if (o.metric == "clustering") return ew::avg_clustering(g);

        ew::CommunityStore store(p.min_members);
        auto accept = [&](const ew::Tour& t) { return ew::accept_tour(t, p.entropy_threshold); };
        auto sink = [&](const ew::Tour& t) { store.insert(t); };
        ew::RunStats stats = ew::run_tours(g, p, accept, sink, o.threads);
        if (o.metric == "buckets") return static_cast<double>(store.bucket_count());
        return p.tours ? static_cast<double>(stats.accepted) / static_cast<double>(p.tours) : 0.0;
    };

    std::vector<ew::SweepPoint> points;
    for (double x : o.values) {
        double sum = 0.0, sumsq = 0.0;
        for (uint32_t r = 0; r < o.replicates; ++r) {
            double y = measure(x, r);
            sum += y;
            sumsq += y * y;
        }
        double mean = sum / o.replicates;
        double var = std::max(0.0, sumsq / o.replicates - mean * mean);
        points.push_back({x, mean, std::sqrt(var), o.replicates});
    }

    std::ostream& out = o.out.open();
    if (json) {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& p : points)
            doc.push_back(
                {{"x", p.x}, {"mean", p.mean}, {"sd", p.sd}, {"replicates", p.replicates}});
        out << doc.dump(2) << "\n";
    } else {
        ew::write_sweep_csv(out, points);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"size-constrained overlapping community detection via entropy-filtered "
                 "random walks"};
    app.require_subcommand(1);

    DetectOpts detect_opts;
    detect_opts.params.tours = 10000;
    auto* detect = app.add_subcommand("detect", "detect communities in a graph");
    add_graph_source(detect, detect_opts.src);
    add_walk_flags(detect, detect_opts.params);
    add_common_flags(detect, detect_opts.out, detect_opts.format, detect_opts.threads);
    detect->add_option("--top", detect_opts.top, "cap the report at the strongest K communities")
        ->capture_default_str();
    detect->add_option("--min-matches", detect_opts.min_matches,
                       "drop communities matched fewer times")
        ->capture_default_str();
    detect->add_option("--key-width", detect_opts.key_width,
                       "bucket key width (0 = --min)")
        ->capture_default_str();
    detect->add_flag("--lsh", detect_opts.lsh, "banded minhash bucketing instead of top-n keys");
    detect->callback([&] { run_detect(detect_opts, false); });

    DetectOpts circles_opts;
    auto* circles = app.add_subcommand("circles", "personalized circles around one node");
    add_graph_source(circles, circles_opts.src);
    add_walk_flags(circles, circles_opts.params);
    add_common_flags(circles, circles_opts.out, circles_opts.format, circles_opts.threads);
    circles->add_option("--seed-node", circles_opts.seed_node, "start every tour here")
        ->required();
    circles->add_option("--top", circles_opts.top, "cap the report at the strongest K circles")
        ->capture_default_str();
    circles->add_option("--min-matches", circles_opts.min_matches,
                        "drop circles matched fewer times")
        ->capture_default_str();
    circles->add_option("--key-width", circles_opts.key_width, "bucket key width (0 = --min)")
        ->capture_default_str();
    circles->add_flag("--lsh", circles_opts.lsh, "banded minhash bucketing instead of top-n keys");
    circles->callback([&] { run_detect(circles_opts, true); });

    CentralityOpts cent_opts;
    cent_opts.params.entropy_threshold = 1.0;
    auto* cent = app.add_subcommand("centrality", "walk centrality vs eigenvector reference");
    add_graph_source(cent, cent_opts.src);
    add_walk_flags(cent, cent_opts.params);
    add_common_flags(cent, cent_opts.out, cent_opts.format, cent_opts.threads);
    cent->add_option("--peak-sigma", cent_opts.peak_sigma,
                     "peak cut in stddevs above the mean delta")
        ->capture_default_str();
    cent->add_option("--tol", cent_opts.tol, "power-iteration convergence tolerance")
        ->capture_default_str();
    cent->add_option("--max-iter", cent_opts.max_iter, "power-iteration budget")
        ->capture_default_str();
    cent->callback([&] { run_centrality(cent_opts); });

    StreamOpts stream_opts;
    stream_opts.cfg.budget_tours = 10000;
    auto* stream = app.add_subcommand("stream", "continuous detection over a mutating graph");
    add_graph_source(stream, stream_opts.src);
    add_walk_flags(stream, stream_opts.params);
    add_common_flags(stream, stream_opts.out, stream_opts.format, stream_opts.threads);
    stream->add_option("--mutations", stream_opts.mutations,
                       "mutation line file, - for stdin")
        ->capture_default_str();
    stream->add_option("--budget", stream_opts.cfg.budget_tours, "stop after this many tours")
        ->capture_default_str();
    stream->add_option("--snapshot-interval", stream_opts.cfg.snapshot_interval,
                       "emit a snapshot every N tours")
        ->capture_default_str();
    stream->add_option("--mutations-per-tour", stream_opts.cfg.mutations_per_tour,
                       "mutations drained at each tour boundary")
        ->capture_default_str();
    stream->add_option("--decay-interval", stream_opts.cfg.decay_interval,
                       "halve sketch counters every N tours (0 = off)")
        ->capture_default_str();
    stream->add_option("--min-matches", stream_opts.cfg.min_matches,
                       "snapshot listing filter")
        ->capture_default_str();
    stream->add_option("--key-width", stream_opts.cfg.key_width, "bucket key width (0 = --min)")
        ->capture_default_str();
    stream->add_option("--width", stream_opts.cms_width, "count-min sketch width")
        ->capture_default_str();
    stream->add_option("--depth", stream_opts.cms_depth, "count-min sketch depth")
        ->capture_default_str();
    stream->add_option("--top", stream_opts.top, "tracked community capacity")
        ->capture_default_str();
    stream->callback([&] { run_stream(stream_opts); });

    GenOpts gen_opts;
    auto* gen = app.add_subcommand("gen", "write a generated graph as an edge list");
    gen->add_option("--model", gen_opts.model, "ba | ring")->required();
    gen->add_option("--n", gen_opts.n, "ba: node count")->capture_default_str();
    gen->add_option("--m", gen_opts.m, "ba: edges per new node")->capture_default_str();
    gen->add_option("--k", gen_opts.k, "ring: clique count")->capture_default_str();
    gen->add_option("--c", gen_opts.c, "ring: clique size")->capture_default_str();
    gen->add_option("--seed", gen_opts.seed, "generator seed")->capture_default_str();
    gen->add_option("--output", gen_opts.out.path, "write the graph here instead of stdout");
    gen->add_option("--format", gen_opts.format, "tsv (edge list) | json")->capture_default_str();
    gen->callback([&] { run_gen(gen_opts); });

    SweepOpts sweep_opts;
    sweep_opts.params.tours = 2000;
    sweep_opts.params.length = 20;
    sweep_opts.params.min_members = 4;
    sweep_opts.params.max_members = 8;
    auto* sweep = app.add_subcommand("sweep", "replicate-averaged parameter sweep to CSV");
    add_graph_source(sweep, sweep_opts.src);
    add_walk_flags(sweep, sweep_opts.params);
    add_common_flags(sweep, sweep_opts.out, sweep_opts.format, sweep_opts.threads);
    sweep->add_option("--axis", sweep_opts.axis, "swept parameter: et | nodes | m")->required();
    sweep->add_option("--values", sweep_opts.values, "sweep points, comma separated")
        ->required()
        ->delimiter(',');
    sweep->add_option("--metric", sweep_opts.metric,
                      "measured value: accepted-fraction | buckets | clustering")
        ->capture_default_str();
    sweep->add_option("--replicates", sweep_opts.replicates,
                      "seeds per sweep point (seed + replicate index)")
        ->capture_default_str();
    sweep->callback([&] { run_sweep(sweep_opts); });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ew::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ew::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

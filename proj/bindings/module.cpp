#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "entropywalk/centrality.hpp"
#include "entropywalk/community.hpp"
#include "entropywalk/entropy.hpp"
#include "entropywalk/errors.hpp"
#include "entropywalk/graph.hpp"
#include "entropywalk/report.hpp"
#include "entropywalk/walker.hpp"

namespace py = pybind11;
using namespace entropywalk;

namespace {

WalkParams make_params(uint64_t tours, uint32_t length, uint32_t min_members,
                       uint32_t max_members, double et, uint64_t seed) {
    WalkParams p;
    p.tours = tours;
    p.length = length;
    p.min_members = min_members;
    p.max_members = max_members;
    p.entropy_threshold = et;
    p.master_seed = seed;
    return p;
}

py::list rows_to_py(const Graph& g, const std::vector<CommunityRow>& rows) {
    py::list out;
    for (const auto& row : rows) {
        py::list members;
        for (const auto& m : row.members) members.append(py::make_tuple(g.label(m.node), m.freq));
        py::dict d;
        d["rank"] = row.rank;
        d["matches"] = row.matches;
        d["members"] = members;
        out.append(d);
    }
    return out;
}

py::list detect_impl(const Graph& g, const WalkParams& p, std::optional<std::string> seed_node,
                     size_t top, uint64_t min_matches, unsigned threads) {
    WalkParams params = p;
    std::optional<NodeId> require;
    if (seed_node) {
        require = g.find(*seed_node);
        if (!require) throw InputError("seed node '" + *seed_node + "' is not in the graph");
        params.start = require;
    }
    CommunityStore store(params.min_members);
    run_tours(
        g, params, [&](const Tour& t) { return accept_tour(t, params.entropy_threshold); },
        [&](const Tour& t) { store.insert(t); }, threads);
    return rows_to_py(g,
                      build_community_rows(store, params.min_members, params.max_members, top,
                                           min_matches, require));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "size-constrained overlapping community detection via entropy-filtered walks";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<MutationError>(m, "MutationError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<Graph>(m, "Graph")
        .def(py::init<bool>(), py::arg("directed") = false)
        .def("intern", &Graph::intern, py::arg("label"))
        .def("find", &Graph::find, py::arg("label"))
        .def("add_edge",
             [](Graph& g, const std::string& a, const std::string& b) {
                 NodeId ia = g.intern(a);
                 NodeId ib = g.intern(b);
                 return g.add_edge(ia, ib);
             },
             py::arg("a"), py::arg("b"))
        .def("degree", &Graph::degree, py::arg("node"))
        .def("neighbors",
             [](const Graph& g, const std::string& label) {
                 auto v = g.find(label);
                 if (!v) throw InputError("node '" + label + "' is not in the graph");
                 py::list out;
                 for (NodeId w : g.neighbors(*v)) out.append(g.label(w));
                 return out;
             },
             py::arg("label"))
        .def("label", &Graph::label, py::arg("node"))
        .def_property_readonly("node_count", &Graph::active_node_count)
        .def_property_readonly("edge_count", &Graph::edge_count)
        .def("__repr__", [](const Graph& g) {
            std::ostringstream s;
            s << "Graph(nodes=" << g.active_node_count() << ", edges=" << g.edge_count() << ")";
            return s.str();
        });

    m.def("load_graph",
          [](const std::string& path) { return load_edge_list_file(path); },
          py::arg("path"), "parse a whitespace edge list (labels, # comments)");
    m.def("save_graph",
          [](const Graph& g, const std::string& path) { save_edge_list_file(g, path); },
          py::arg("graph"), py::arg("path"));
    m.def("barabasi_albert", &generate_barabasi_albert, py::arg("n"), py::arg("m"),
          py::arg("seed") = 1, "preferential-attachment graph");
    m.def("ring_of_cliques", &generate_ring_of_cliques, py::arg("k"), py::arg("c"),
          "k cliques of size c joined in a ring");
    m.def("avg_clustering", &avg_clustering, py::arg("graph"));

    m.def("entropy_ratio",
          [](const std::vector<uint32_t>& counts) {
              Tour t;
              t.complete = true;
              for (NodeId id = 0; id < counts.size(); ++id)
                  for (uint32_t i = 0; i < counts[id]; ++i) t.visits.push_back(id);
              t.rebuild_freq();
              return tour_entropy(t).ratio;
          },
          py::arg("counts"),
          "entropy ratio of a visit-count multiset (e.g. [2,2] -> 0.5 at length 4)");

    m.def("detect",
          [](const Graph& g, uint64_t tours, uint32_t length, uint32_t min_members,
             uint32_t max_members, double et, uint64_t seed, size_t top, uint64_t min_matches,
             unsigned threads) {
              return detect_impl(g,
                                 make_params(tours, length, min_members, max_members, et, seed),
                                 std::nullopt, top, min_matches, threads);
          },
          py::arg("graph"), py::arg("tours") = 10000, py::arg("length") = 30,
          py::arg("min_members") = 5, py::arg("max_members") = 10, py::arg("et") = 0.75,
          py::arg("seed") = 1, py::arg("top") = 0, py::arg("min_matches") = 1,
          py::arg("threads") = 1,
          "ranked communities as dicts with rank, matches and (label, freq) members");

    m.def("circles",
          [](const Graph& g, const std::string& seed_node, uint64_t tours, uint32_t length,
             uint32_t min_members, uint32_t max_members, double et, uint64_t seed, size_t top,
             uint64_t min_matches, unsigned threads) {
              return detect_impl(g,
                                 make_params(tours, length, min_members, max_members, et, seed),
                                 seed_node, top, min_matches, threads);
          },
          py::arg("graph"), py::arg("seed_node"), py::arg("tours") = 10000,
          py::arg("length") = 30, py::arg("min_members") = 5, py::arg("max_members") = 10,
          py::arg("et") = 0.75, py::arg("seed") = 1, py::arg("top") = 0,
          py::arg("min_matches") = 1, py::arg("threads") = 1,
          "personalized circles: every tour starts at seed_node, rows must contain it");

    m.def("walk_centrality",
          [](const Graph& g, uint64_t tours, uint32_t length, double et, uint64_t seed,
             unsigned threads) {
              WalkParams p = make_params(tours, length, 1, length, et, seed);
              CentralityTable table(g.node_count());
              run_tours(
                  g, p, [&](const Tour& t) { return accept_tour(t, p.entropy_threshold); },
                  [&](const Tour& t) { table.accumulate(t); }, threads);
              auto scores = table.scores();
              py::dict out;
              for (NodeId v = 0; v < g.node_count(); ++v)
                  if (g.is_active(v)) out[py::str(g.label(v))] = scores[v];
              return out;
          },
          py::arg("graph"), py::arg("tours") = 10000, py::arg("length") = 30,
          py::arg("et") = 1.0, py::arg("seed") = 1, py::arg("threads") = 1,
          "normalized visit-frequency centrality (entropy-filtered when et < 1)");

    m.def("eigenvector_centrality",
          [](const Graph& g, double tol, uint32_t max_iter) {
              auto r = eigenvector_centrality(g, tol, max_iter);
              py::dict out;
              for (NodeId v = 0; v < g.node_count(); ++v)
                  if (g.is_active(v)) out[py::str(g.label(v))] = r.scores[v];
              return out;
          },
          py::arg("graph"), py::arg("tol") = 1e-10, py::arg("max_iter") = 100000);

    py::class_<CountMinSketch>(m, "CountMinSketch")
        .def(py::init<uint32_t, uint32_t, uint64_t>(), py::arg("width") = 2048,
             py::arg("depth") = 5, py::arg("seed") = 0xc0117e75ULL)
        .def("update", py::overload_cast<uint64_t, uint64_t>(&CountMinSketch::update),
             py::arg("key"), py::arg("inc") = 1)
        .def("estimate", py::overload_cast<uint64_t>(&CountMinSketch::estimate, py::const_),
             py::arg("key"))
        .def("halve", &CountMinSketch::halve)
        .def_property_readonly("width", &CountMinSketch::width)
        .def_property_readonly("depth", &CountMinSketch::depth);

    m.def("minhash_signature",
          [](std::vector<NodeId> nodes, uint32_t hash_count, uint64_t seed) {
              return minhash_signature(nodes, hash_count, seed);
          },
          py::arg("nodes"), py::arg("hash_count") = 64, py::arg("seed") = 0x15ee71e5ULL);
}

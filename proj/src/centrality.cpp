#include "entropywalk/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "entropywalk/errors.hpp"

namespace entropywalk {

void CentralityTable::accumulate(const Tour& t) {
    for (const auto& [v, count] : t.freq) {
        counts_.at(v) += count;
        total_ += count;
    }
}

std::vector<double> CentralityTable::scores() const {
    std::vector<double> s(counts_.size(), 0.0);
    if (total_ == 0) return s;
    for (size_t v = 0; v < counts_.size(); ++v)
        s[v] = static_cast<double>(counts_[v]) / static_cast<double>(total_);
    return s;
}

namespace {

/// Largest connected component among active nodes; ties go to the component
/// holding the lowest node id.
std::vector<NodeId> largest_component(const Graph& g, bool& multiple) {
    const size_t n = g.node_count();
    std::vector<int> comp(n, -1);
    std::vector<NodeId> best, stack;
    int comp_id = 0;
    multiple = false;
    for (NodeId s = 0; s < n; ++s) {
        if (!g.is_active(s) || comp[s] >= 0) continue;
        std::vector<NodeId> members;
        stack.push_back(s);
        comp[s] = comp_id;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            members.push_back(v);
            for (NodeId nb : g.neighbors(v)) {
                if (comp[nb] < 0) {
                    comp[nb] = comp_id;
                    stack.push_back(nb);
                }
            }
        }
        if (comp_id > 0) multiple = true;
        if (members.size() > best.size()) best = std::move(members);
        ++comp_id;
    }
    std::sort(best.begin(), best.end());
    return best;
}

} // namespace

EigenvectorResult eigenvector_centrality(const Graph& g, double tol, uint32_t max_iter) {
    EigenvectorResult result;
    result.scores.assign(g.node_count(), 0.0);
    bool multiple = false;
    std::vector<NodeId> comp = largest_component(g, multiple);
    result.restricted_to_largest_component = multiple;
    if (comp.empty()) return result;
    if (comp.size() == 1) {
        result.scores[comp[0]] = 1.0;
        return result;
    }

    std::vector<double> x(g.node_count(), 0.0), y(g.node_count(), 0.0);
    double init = 1.0 / std::sqrt(static_cast<double>(comp.size()));
    for (NodeId v : comp) x[v] = init;

    double residual = 0.0;
    for (uint32_t iter = 1; iter <= max_iter; ++iter) {
        // y = (A + I) x on the component; the shift breaks bipartite cycling.
        for (NodeId v : comp) {
            double acc = x[v];
            for (NodeId nb : g.neighbors(v)) acc += x[nb];
            y[v] = acc;
        }
        double norm = 0.0;
        for (NodeId v : comp) norm += y[v] * y[v];
        norm = std::sqrt(norm);
        residual = 0.0;
        for (NodeId v : comp) {
            y[v] /= norm;
            double d = y[v] - x[v];
            residual += d * d;
        }
        residual = std::sqrt(residual);
        std::swap(x, y);
        if (residual < tol) {
            result.iterations = iter;
            for (NodeId v : comp) result.scores[v] = x[v];
            return result;
        }
    }
    throw ConvergenceError("eigenvector centrality did not converge after " +
                               std::to_string(max_iter) + " iterations (residual " +
                               std::to_string(residual) + ")",
                           residual);
}

DeltaReport centrality_delta(const std::vector<double>& filtered,
                             const std::vector<double>& reference, double peak_sigma) {
    if (filtered.size() != reference.size())
        throw std::invalid_argument("centrality_delta: mismatched node sets");
    DeltaReport report;
    const size_t n = filtered.size();
    if (n == 0) return report;

    auto normalized = [](const std::vector<double>& v) {
        double sum = std::accumulate(v.begin(), v.end(), 0.0);
        std::vector<double> out(v.size(), 0.0);
        if (sum > 0)
            for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] / sum;
        return out;
    };
    std::vector<double> f = normalized(filtered);
    std::vector<double> r = normalized(reference);

    report.delta.resize(n);
    for (size_t i = 0; i < n; ++i) report.delta[i] = f[i] - r[i];

    double mean = std::accumulate(report.delta.begin(), report.delta.end(), 0.0) /
                  static_cast<double>(n);
    double var = 0.0;
    for (double d : report.delta) var += (d - mean) * (d - mean);
    var /= static_cast<double>(n);
    report.mean = mean;
    report.stddev = std::sqrt(var);
    report.cut = mean + peak_sigma * report.stddev;
    for (size_t i = 0; i < n; ++i)
        if (report.delta[i] > report.cut && report.stddev > 0)
            report.peaks.push_back(static_cast<NodeId>(i));
    return report;
}

} // namespace entropywalk

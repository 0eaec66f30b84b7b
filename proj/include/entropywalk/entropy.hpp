#pragma once

#include <cmath>
#include <stdexcept>

#include "entropywalk/walker.hpp"

namespace entropywalk {

struct EntropyReport {
    double h = 0.0;     // Shannon entropy of the visit-frequency distribution, nats
    double h_max = 0.0; // ln(lt): entropy of a walk with all visits distinct
    double ratio = 0.0; // h / h_max, in (0, 1]
};

/// Entropy of a complete tour. With counts c_i over lt visits,
///   h = sum p_i ln(1/p_i), p_i = c_i/lt
/// computed as ln(lt) - (sum c_i ln c_i)/lt, which is exact for the
/// all-distinct case and guarantees ratio <= 1 in floating point.
inline EntropyReport tour_entropy(const Tour& t) {
    const auto lt = t.visits.size();
    if (!t.complete || lt < 2)
        throw std::invalid_argument("tour_entropy requires a complete tour of length >= 2");
    double weighted = 0.0;
    for (const auto& [node, count] : t.freq)
        if (count > 1) weighted += static_cast<double>(count) * std::log(static_cast<double>(count));
    EntropyReport r;
    r.h_max = std::log(static_cast<double>(lt));
    r.h = r.h_max - weighted / static_cast<double>(lt);
    r.ratio = r.h / r.h_max;
    return r;
}

/// Acceptance gate: a tour is community evidence when its entropy ratio is
/// at or below the threshold. Boundary inclusive, so et=1 accepts every tour.
inline bool accept_tour(const Tour& t, double entropy_threshold) {
    return tour_entropy(t).ratio <= entropy_threshold;
}

} // namespace entropywalk

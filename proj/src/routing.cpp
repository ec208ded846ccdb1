#include "antnet/routing.hpp"

#include <algorithm>
#include <cmath>

namespace antnet {

void AntNetParams::validate() const {
    if (eta <= 0.0 || eta > 1.0)
        throw RoutingError("eta must be in (0,1]");
    if (window == 0)
        throw RoutingError("window must be positive");
    if (c1 < 0.0 || c2 < 0.0 || c1 + c2 > 1.0 + 1e-12)
        throw RoutingError("require c1,c2 >= 0 and c1+c2 <= 1");
    if (!(0.0 < r_min && r_min <= r_max && r_max <= 1.0))
        throw RoutingError("require 0 < r_min <= r_max <= 1");
}

double PheromoneRow::sum() const {
    double s = 0.0;
    for (const auto& [nb, p] : entries)
        s += p;
    return s;
}

PheromoneRow& PheromoneTable::row(NodeId destination) {
    auto it = rows.find(destination);
    if (it == rows.end())
        throw RoutingError("no pheromone row for destination " + std::to_string(destination));
    return it->second;
}

const PheromoneRow* PheromoneTable::find_row(NodeId destination) const {
    auto it = rows.find(destination);
    return it == rows.end() ? nullptr : &it->second;
}

void PheromoneTable::forget_node(NodeId gone) {
    rows.erase(gone);
    for (auto it = rows.begin(); it != rows.end();) {
        PheromoneRow& row = it->second;
        auto entry = row.entries.find(gone);
        if (entry == row.entries.end()) {
            ++it;
            continue;
        }
        row.entries.erase(entry);
        if (row.entries.empty()) {
            it = rows.erase(it);
            continue;
        }
        double remaining = row.sum();
        if (remaining > 1e-12) {
            for (auto& [nb, p] : row.entries)
                p /= remaining;
        } else {
            double u = 1.0 / static_cast<double>(row.entries.size());
            for (auto& [nb, p] : row.entries)
                p = u;
        }
        ++it;
    }
}

PheromoneTable init_uniform(NodeId owner, const std::set<NodeId>& neighbors,
                            const std::set<NodeId>& destinations) {
    if (neighbors.empty())
        throw RoutingError("init_uniform: node " + std::to_string(owner) +
                           " has no neighbors");
    if (destinations.count(owner) != 0)
        throw RoutingError("init_uniform: owner listed as destination");
    PheromoneTable table;
    table.owner = owner;
    double u = 1.0 / static_cast<double>(neighbors.size());
    for (NodeId dst : destinations) {
        PheromoneRow row;
        row.destination = dst;
        for (NodeId nb : neighbors)
            row.entries[nb] = u;
        table.rows[dst] = std::move(row);
    }
    return table;
}

NodeId select_next_hop(const PheromoneRow& row, const std::set<NodeId>& visited, Rng& rng) {
    if (row.entries.empty())
        throw RoutingError("select_next_hop: empty row");

    // candidates in NodeId order, so cumulative inversion is deterministic
    std::vector<std::pair<NodeId, double>> unvisited;
    double total = 0.0;
    for (const auto& [nb, p] : row.entries) {
        if (visited.count(nb) == 0) {
            unvisited.emplace_back(nb, p);
            total += p;
        }
    }
    if (unvisited.empty()) {
        // paper's fallback: uniform over all neighbors
        std::size_t idx = rng.next_index(row.entries.size());
        auto it = row.entries.begin();
        std::advance(it, idx);
        return it->first;
    }
    if (total <= 1e-12) {
        // all unvisited mass decayed away; treat them as equally likely
        return unvisited[rng.next_index(unvisited.size())].first;
    }
    double draw = rng.next_double() * total;
    double acc = 0.0;
    for (const auto& [nb, p] : unvisited) {
        acc += p;
        if (draw < acc)
            return nb;
    }
    return unvisited.back().first;
}

void update_pheromone(PheromoneRow& row, NodeId reinforced, double r) {
    if (r < 0.0 || r > 1.0)
        throw RoutingError("reinforcement r outside [0,1]");
    auto it = row.entries.find(reinforced);
    if (it == row.entries.end())
        throw RoutingError("reinforced neighbor " + std::to_string(reinforced) +
                           " not in row");
    for (auto& [nb, p] : row.entries) {
        if (nb == reinforced)
            p += r * (1.0 - p);
        else
            p -= r * p;
    }
}

void update_traffic_stats(TrafficStats& stats, double observed_s, const AntNetParams& params) {
    if (observed_s <= 0.0)
        throw RoutingError("non-positive trip-time observation");
    if (stats.observation_count == 0) {
        stats.mean = observed_s;
        stats.variance = 0.0;
    } else {
        double mean_old = stats.mean;
        stats.mean += params.eta * (observed_s - stats.mean);
        double dev = observed_s - mean_old;
        stats.variance += params.eta * (dev * dev - stats.variance);
    }
    stats.window.push_back(observed_s);
    while (stats.window.size() > params.window)
        stats.window.pop_front();
    stats.best_time = *std::min_element(stats.window.begin(), stats.window.end());
    ++stats.observation_count;
}

double compute_reinforcement(double trip_time_s, const TrafficStats& stats,
                             const AntNetParams& params, std::size_t out_degree) {
    if (trip_time_s <= 0.0)
        throw RoutingError("non-positive trip time");
    if (out_degree == 0)
        throw RoutingError("out_degree must be positive");
    if (stats.observation_count == 0)
        return params.r_min;

    auto clamp = [&](double r) { return std::clamp(r, params.r_min, params.r_max); };

    if (params.mode == ReinforcementMode::Simple)
        return clamp(stats.best_time / trip_time_s);

    double i_inf = stats.best_time;
    double i_sup = stats.mean +
                   params.z_score * std::sqrt(stats.variance / static_cast<double>(params.window));
    double r = params.c1 * (stats.best_time / trip_time_s);
    double denom = (i_sup - i_inf) + (trip_time_s - i_inf);
    if (denom > 0.0)
        r += params.c2 * ((i_sup - i_inf) / denom);
    return clamp(r);
}

} // namespace antnet

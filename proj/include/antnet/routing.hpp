#pragma once

#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "antnet/rng.hpp"
#include "antnet/topology.hpp"

namespace antnet {

struct RoutingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ReinforcementMode { Simple, Full };

struct AntNetParams {
    double eta = 0.1;           // exponential-update factor, (0,1]
    std::size_t window = 50;    // best-time observation window, >= 1
    double c1 = 0.7;            // full-mode weights, c1+c2 <= 1
    double c2 = 0.3;
    double z_score = 2.0;       // confidence half-width for the full mode
    double r_min = 0.05;
    double r_max = 0.85;
    ReinforcementMode mode = ReinforcementMode::Simple;

    void validate() const;
};

// One probability distribution over next hops for a single destination.
// Entries sum to 1; keys are current neighbors of the owning node.
struct PheromoneRow {
    NodeId destination = 0;
    std::map<NodeId, double> entries;

    double sum() const;
};

struct PheromoneTable {
    NodeId owner = 0;
    std::map<NodeId, PheromoneRow> rows; // keyed by destination

    PheromoneRow& row(NodeId destination);
    const PheromoneRow* find_row(NodeId destination) const;

    // Drop `destination`'s row everywhere and purge `destination` as a
    // neighbor from remaining rows, redistributing its mass proportionally
    // (uniformly if the remaining mass is zero). Emptied rows are deleted.
    void forget_node(NodeId destination);
};

// Per-destination trip-time statistics: exponential mean/variance plus a
// ring window that carries the best (minimum) observed time.
struct TrafficStats {
    double mean = 0.0;
    double variance = 0.0;
    double best_time = 0.0;
    std::deque<double> window;
    std::size_t observation_count = 0;
};

struct TrafficModel {
    NodeId owner = 0;
    std::map<NodeId, TrafficStats> stats;

    void forget_node(NodeId destination) { stats.erase(destination); }
};

PheromoneTable init_uniform(NodeId owner, const std::set<NodeId>& neighbors,
                            const std::set<NodeId>& destinations);

// Samples an unvisited neighbor proportionally to the row's probabilities;
// if every neighbor has been visited, samples uniformly over all of them.
NodeId select_next_hop(const PheromoneRow& row, const std::set<NodeId>& visited, Rng& rng);

// p(reinforced) += r*(1 - p(reinforced)); p(j) -= r*p(j) for the others.
void update_pheromone(PheromoneRow& row, NodeId reinforced, double r);

void update_traffic_stats(TrafficStats& stats, double observed_s, const AntNetParams& params);

// Maps a trip time to a reinforcement amount in [r_min, r_max].
double compute_reinforcement(double trip_time_s, const TrafficStats& stats,
                             const AntNetParams& params, std::size_t out_degree);

} // namespace antnet

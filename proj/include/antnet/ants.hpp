#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "antnet/routing.hpp"

namespace antnet {

struct AntError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StackEntry {
    NodeId node = 0;
    double elapsed_s = 0.0; // cumulative since ant launch, non-decreasing
};

struct ForwardAnt {
    std::uint64_t ant_id = 0;
    NodeId source = 0;
    NodeId destination = 0;
    std::vector<StackEntry> stack;
    std::set<NodeId> visited;
    std::uint32_t hops = 0;

    NodeId current_node() const { return stack.back().node; }
};

struct BackwardAnt {
    std::uint64_t ant_id = 0;
    std::vector<StackEntry> stack; // loop-free forward stack, source first
    std::size_t cursor = 0;        // index of the node the ant sits at

    NodeId source() const { return stack.front().node; }
    NodeId destination() const { return stack.back().node; }
    NodeId current_node() const { return stack[cursor].node; }
};

ForwardAnt spawn_forward(std::uint64_t ant_id, NodeId source,
                         const std::set<NodeId>& live_destinations, Rng& rng);

void record_visit(ForwardAnt& ant, NodeId node, double elapsed_s);

// Pops every entry strictly after the earlier occurrence of `revisited`;
// the earlier occurrence keeps its original timestamp.
void remove_loop(ForwardAnt& ant, NodeId revisited);

BackwardAnt to_backward(const ForwardAnt& ant);

struct BackwardStep {
    std::optional<NodeId> next_reverse_hop; // nullopt once the source is reached
};

// Applies the trip-time and pheromone updates owed at `node` (the stack
// entry below the ant's current position) and advances the cursor. With
// `subpath` every intermediate stack node above the cursor is treated as an
// extra destination and updated from its partial trip time.
BackwardStep backward_update_at(BackwardAnt& ant, NodeId node, PheromoneTable& table,
                                TrafficModel& model, const AntNetParams& params,
                                bool subpath);

} // namespace antnet

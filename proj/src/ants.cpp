#include "antnet/ants.hpp"

#include <algorithm>

namespace antnet {

ForwardAnt spawn_forward(std::uint64_t ant_id, NodeId source,
                         const std::set<NodeId>& live_destinations, Rng& rng) {
    if (live_destinations.empty())
        throw AntError("spawn_forward: no live destinations");
    if (live_destinations.count(source) != 0)
        throw AntError("spawn_forward: source among destinations");
    std::size_t idx = rng.next_index(live_destinations.size());
    auto it = live_destinations.begin();
    std::advance(it, idx);

    ForwardAnt ant;
    ant.ant_id = ant_id;
    ant.source = source;
    ant.destination = *it;
    ant.stack.push_back({source, 0.0});
    ant.visited.insert(source);
    return ant;
}

void record_visit(ForwardAnt& ant, NodeId node, double elapsed_s) {
    if (!ant.stack.empty() && elapsed_s < ant.stack.back().elapsed_s)
        throw AntError("record_visit: elapsed time regressed");
    ant.stack.push_back({node, elapsed_s});
    ant.visited.insert(node);
}

void remove_loop(ForwardAnt& ant, NodeId revisited) {
    auto it = std::find_if(ant.stack.begin(), ant.stack.end(),
                           [&](const StackEntry& e) { return e.node == revisited; });
    if (it == ant.stack.end())
        throw AntError("remove_loop: node " + std::to_string(revisited) + " not on stack");
    ant.stack.erase(it + 1, ant.stack.end());
    ant.visited.clear();
    for (const auto& e : ant.stack)
        ant.visited.insert(e.node);
}

BackwardAnt to_backward(const ForwardAnt& ant) {
    if (ant.stack.empty() || ant.current_node() != ant.destination)
        throw AntError("to_backward: forward ant has not reached its destination");
    BackwardAnt back;
    back.ant_id = ant.ant_id;
    back.stack = ant.stack;
    back.cursor = back.stack.size() - 1;
    return back;
}

BackwardStep backward_update_at(BackwardAnt& ant, NodeId node, PheromoneTable& table,
                                TrafficModel& model, const AntNetParams& params,
                                bool subpath) {
    if (ant.cursor == 0)
        throw AntError("backward_update_at: ant already at source");
    std::size_t here = ant.cursor - 1;
    if (ant.stack[here].node != node)
        throw AntError("backward_update_at: node does not match cursor position");
    ant.cursor = here;

    // from = the neighbor the backward ant arrived from; it is also the
    // forward next hop toward every destination remaining on the stack
    NodeId from = ant.stack[here + 1].node;
    double here_elapsed = ant.stack[here].elapsed_s;

    auto update_for = [&](NodeId dest, double trip, bool required) {
        PheromoneRow* row = const_cast<PheromoneRow*>(table.find_row(dest));
        if (row == nullptr) {
            if (required)
                throw AntError("backward_update_at: missing pheromone row for destination " +
                               std::to_string(dest));
            return; // destination died mid-flight; nothing to update
        }
        if (trip <= 0.0)
            return;
        TrafficStats& stats = model.stats[dest];
        update_traffic_stats(stats, trip, params);
        double r = compute_reinforcement(trip, stats, params, row->entries.size());
        update_pheromone(*row, from, r);
    };

    NodeId dest = ant.destination();
    update_for(dest, ant.stack.back().elapsed_s - here_elapsed, true);
    if (subpath) {
        for (std::size_t j = here + 1; j + 1 < ant.stack.size(); ++j)
            update_for(ant.stack[j].node, ant.stack[j].elapsed_s - here_elapsed, false);
    }

    BackwardStep step;
    if (here > 0)
        step.next_reverse_hop = ant.stack[here - 1].node;
    return step;
}

} // namespace antnet

#include "antnet/topology.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

namespace antnet {

void Topology::require_node(NodeId id) const {
    if (!has_node(id))
        throw TopologyError("unknown node " + std::to_string(id));
}

void Topology::add_node(NodeId id) {
    if (!nodes_.insert(id).second)
        throw TopologyError("duplicate node " + std::to_string(id));
    adjacency_[id];
}

void Topology::add_link(NodeId a, NodeId b, double bandwidth_bps, double prop_delay_s) {
    if (a == b)
        throw TopologyError("self-link at node " + std::to_string(a));
    require_node(a);
    require_node(b);
    if (bandwidth_bps <= 0.0)
        throw TopologyError("non-positive bandwidth on link " + std::to_string(a) +
                            "-" + std::to_string(b));
    if (prop_delay_s < 0.0)
        throw TopologyError("negative propagation delay on link " + std::to_string(a) +
                            "-" + std::to_string(b));
    if (find_link(a, b) != nullptr)
        throw TopologyError("duplicate link " + std::to_string(a) + "-" + std::to_string(b));
    links_.push_back({a, b, bandwidth_bps, prop_delay_s, true});
    adjacency_[a].insert(b);
    adjacency_[b].insert(a);
}

std::set<NodeId> Topology::neighbors(NodeId node) const {
    require_node(node);
    auto it = adjacency_.find(node);
    return it == adjacency_.end() ? std::set<NodeId>{} : it->second;
}

const LinkSpec* Topology::find_link(NodeId a, NodeId b) const {
    for (const auto& l : links_)
        if (l.up && ((l.a == a && l.b == b) || (l.a == b && l.b == a)))
            return &l;
    return nullptr;
}

Topology Topology::remove_node(NodeId node) const {
    require_node(node);
    Topology out;
    for (NodeId n : nodes_)
        if (n != node)
            out.add_node(n);
    for (const auto& l : links_)
        if (l.a != node && l.b != node)
            out.add_link(l.a, l.b, l.bandwidth_bps, l.prop_delay_s);
    return out;
}

bool Topology::is_connected(NodeId src, NodeId dst) const {
    require_node(src);
    require_node(dst);
    if (src == dst)
        return true;
    std::set<NodeId> seen{src};
    std::queue<NodeId> frontier;
    frontier.push(src);
    while (!frontier.empty()) {
        NodeId cur = frontier.front();
        frontier.pop();
        for (NodeId nb : adjacency_.at(cur)) {
            if (nb == dst)
                return true;
            if (seen.insert(nb).second)
                frontier.push(nb);
        }
    }
    return false;
}

void Topology::validate() const {
    for (const auto& l : links_) {
        if (!has_node(l.a) || !has_node(l.b))
            throw TopologyError("dangling link endpoint " + std::to_string(l.a) +
                                "-" + std::to_string(l.b));
        if (l.bandwidth_bps <= 0.0)
            throw TopologyError("non-positive bandwidth");
    }
    for (const auto& [n, nbs] : adjacency_)
        for (NodeId nb : nbs)
            if (adjacency_.at(nb).count(n) == 0)
                throw TopologyError("asymmetric adjacency");
}

void FailureSchedule::validate(const Topology& topo) const {
    double last = -std::numeric_limits<double>::infinity();
    std::set<NodeId> seen;
    for (const auto& ev : events) {
        if (ev.time_s < last)
            throw TopologyError("failure times must be non-decreasing");
        last = ev.time_s;
        if (!topo.has_node(ev.node))
            throw TopologyError("failure schedule names absent node " +
                                std::to_string(ev.node));
        if (!seen.insert(ev.node).second)
            throw TopologyError("node " + std::to_string(ev.node) + " removed twice");
    }
}

Topology load_topology(std::istream& in, const std::string& name) {
    struct PendingLink {
        NodeId a, b;
        double bw, delay;
        int line;
    };
    Topology topo;
    std::vector<PendingLink> pending;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw))
            continue;
        auto fail = [&](const std::string& msg) -> TopologyError {
            return TopologyError(name + ":" + std::to_string(lineno) + ": " + msg);
        };
        if (kw == "node") {
            long id;
            if (!(ls >> id) || id < 0)
                throw fail("expected 'node <id>'");
            topo.add_node(static_cast<NodeId>(id));
        } else if (kw == "link") {
            long a, b;
            double bw, delay;
            if (!(ls >> a >> b >> bw >> delay) || a < 0 || b < 0)
                throw fail("expected 'link <id-a> <id-b> <bandwidth-bps> <prop-delay-s>'");
            pending.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b), bw, delay, lineno});
        } else {
            throw fail("unknown keyword '" + kw + "'");
        }
    }
    // links resolved after all nodes so the file is order-insensitive
    for (const auto& p : pending) {
        try {
            topo.add_link(p.a, p.b, p.bw, p.delay);
        } catch (const TopologyError& e) {
            throw TopologyError(name + ":" + std::to_string(p.line) + ": " + e.what());
        }
    }
    topo.validate();
    return topo;
}

Topology load_topology_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw TopologyError("cannot open topology file: " + path);
    return load_topology(in, path);
}

double default_link_cost(const LinkSpec& link) {
    return link.prop_delay_s + 8000.0 / link.bandwidth_bps;
}

DijkstraResult dijkstra_path(const Topology& topo, NodeId src, NodeId dst,
                             double (*weight)(const LinkSpec&)) {
    if (!topo.has_node(src) || !topo.has_node(dst))
        throw TopologyError("dijkstra: unknown endpoint");
    std::map<NodeId, double> dist;
    std::map<NodeId, NodeId> prev;
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[src] = 0.0;
    heap.push({0.0, src});
    while (!heap.empty()) {
        auto [d, cur] = heap.top();
        heap.pop();
        if (d > dist.at(cur))
            continue;
        if (cur == dst)
            break;
        for (NodeId nb : topo.neighbors(cur)) {
            const LinkSpec* l = topo.find_link(cur, nb);
            double w = weight(*l);
            if (w < 0.0)
                throw TopologyError("negative link weight");
            double nd = d + w;
            auto it = dist.find(nb);
            if (it == dist.end() || nd < it->second) {
                dist[nb] = nd;
                prev[nb] = cur;
                heap.push({nd, nb});
            }
        }
    }
    if (dist.find(dst) == dist.end())
        throw TopologyError("no path from " + std::to_string(src) + " to " +
                            std::to_string(dst));
    DijkstraResult out;
    out.cost = dist.at(dst);
    for (NodeId n = dst;; n = prev.at(n)) {
        out.path.push_back(n);
        if (n == src)
            break;
    }
    std::reverse(out.path.begin(), out.path.end());
    return out;
}

} // namespace antnet

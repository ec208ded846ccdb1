#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace antnet {

using NodeId = std::uint32_t;

struct TopologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LinkSpec {
    NodeId a = 0;
    NodeId b = 0;
    double bandwidth_bps = 0.0;   // strictly positive
    double prop_delay_s = 0.0;    // >= 0
    bool up = true;

    NodeId other(NodeId n) const { return n == a ? b : a; }
};

// Undirected graph of nodes and links. Value-semantic: remove_node returns
// a new Topology, so snapshots can be shared across runs.
class Topology {
public:
    Topology() = default;

    void add_node(NodeId id);
    void add_link(NodeId a, NodeId b, double bandwidth_bps, double prop_delay_s);

    bool has_node(NodeId id) const { return nodes_.count(id) != 0; }
    const std::set<NodeId>& nodes() const { return nodes_; }
    const std::vector<LinkSpec>& links() const { return links_; }

    // all nodes sharing an up link with `node`
    std::set<NodeId> neighbors(NodeId node) const;

    // the up link joining the two nodes, or nullptr
    const LinkSpec* find_link(NodeId a, NodeId b) const;

    Topology remove_node(NodeId node) const;

    bool is_connected(NodeId src, NodeId dst) const;

    void validate() const;

private:
    void require_node(NodeId id) const;

    std::set<NodeId> nodes_;
    std::vector<LinkSpec> links_;
    std::map<NodeId, std::set<NodeId>> adjacency_;
};

struct FailureEvent {
    double time_s = 0.0;
    NodeId node = 0;
};

struct FailureSchedule {
    std::vector<FailureEvent> events; // times non-decreasing, nodes distinct

    void validate(const Topology& topo) const;
};

// Line-oriented topology file:
//   node <id>
//   link <id-a> <id-b> <bandwidth-bps> <prop-delay-s>
// '#' starts a comment; blank lines ignored; order-insensitive.
Topology load_topology(std::istream& in, const std::string& name = "<stream>");
Topology load_topology_file(const std::string& path);

struct DijkstraResult {
    std::vector<NodeId> path; // src..dst inclusive
    double cost = 0.0;
};

// Minimal-cost path under a static per-link cost. Throws TopologyError if
// dst is unreachable.
DijkstraResult dijkstra_path(const Topology& topo, NodeId src, NodeId dst,
                             double (*weight)(const LinkSpec&));

double default_link_cost(const LinkSpec& link);

} // namespace antnet

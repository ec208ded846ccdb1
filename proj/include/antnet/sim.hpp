#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <variant>
#include <vector>

#include "antnet/ants.hpp"
#include "antnet/routing.hpp"
#include "antnet/topology.hpp"
#include "antnet/workload.hpp"

namespace antnet {

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RoutingMode { Adaptive, StaticShortestPath };

struct SimConfig {
    std::uint64_t seed = 1;
    double duration_s = 10.0;
    double ant_launch_interval_s = 0.1; // per node
    double processing_delay_base_s = 0.0001;
    double load_smoothing = 0.1;
    double metrics_bucket_s = 1.0;
    std::uint64_t ant_size_bits = 512;
    bool subpath_updates = false;
    RoutingMode routing = RoutingMode::Adaptive;
    bool record_trace = false;

    void validate() const;
};

enum class PacketClass { High, Low }; // backward ants ride High, everything else Low

// One entry of the transmission log, written when a packet starts service
// on a directed link. high_waiting counts High-class packets still queued
// at that instant.
struct TraceEntry {
    double time_s = 0.0;
    NodeId from = 0;
    NodeId to = 0;
    PacketClass cls = PacketClass::Low;
    std::size_t high_waiting = 0;
};

// The two-term hop cost: transmission+propagation from the link state and a
// processing term that grows with the node's recent load.
struct HopDelay {
    double link_term_s = 0.0;
    double node_term_s = 0.0;
    double total() const { return link_term_s + node_term_s; }
};

HopDelay hop_delay(const LinkSpec& link, std::uint64_t queue_bits_ahead,
                   std::uint64_t packet_bits, double processing_load, double base_s);

struct RunCounters {
    std::uint64_t data_injected = 0;
    std::uint64_t data_delivered = 0;
    std::uint64_t data_dropped = 0;
    std::uint64_t data_in_flight_at_end = 0;
    std::uint64_t ants_launched = 0;
    std::uint64_t ants_completed = 0; // backward ant reached its source
    std::uint64_t ants_died = 0;
    std::uint64_t ants_in_flight_at_end = 0;
    std::uint64_t priority_violations = 0;
};

struct RunResult {
    MetricsSeries series;
    std::vector<CallRecord> call_records;
    RunSummary summary;
    RunCounters counters;
    std::uint64_t trace_hash = 0; // FNV over the processed event sequence
    std::vector<TraceEntry> trace; // populated when record_trace is set
    std::uint64_t workload_fingerprint = 0;
    std::map<NodeId, PheromoneTable> final_tables; // learned state at run end
};

RunResult run(const SimConfig& config, const Topology& topo, const FailureSchedule& schedule,
              const AntNetParams& params, const std::vector<CallSpec>& calls);

} // namespace antnet

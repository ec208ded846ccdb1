#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "antnet/routing.hpp"
#include "antnet/topology.hpp"

namespace antnet {

struct WorkloadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CallSpec {
    std::uint32_t call_id = 0;
    double issue_time_s = 0.0;
    NodeId source = 0;
    NodeId destination = 0;
    std::uint32_t packet_count = 10;
    std::uint64_t packet_size_bits = 8000;
};

enum class CallOutcome { Completed, Failed };

struct CallRecord {
    std::uint32_t call_id = 0;
    NodeId source = 0;
    NodeId destination = 0;
    double issue_time_s = 0.0;
    std::uint32_t packets_total = 0;
    std::uint32_t packets_delivered = 0;
    std::uint32_t packets_dropped = 0;
    double first_delivery_s = 0.0;
    double last_delivery_s = 0.0;
    double delay_sum_s = 0.0;
    std::uint64_t hop_sum = 0;

    CallOutcome outcome() const {
        return packets_delivered == packets_total ? CallOutcome::Completed
                                                  : CallOutcome::Failed;
    }
    double mean_delay_s() const {
        return packets_delivered == 0 ? 0.0
                                      : delay_sum_s / static_cast<double>(packets_delivered);
    }
};

struct MetricsBucket {
    double time_s = 0.0; // bucket start
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t ant_launches = 0;
    std::uint64_t ant_deaths = 0;
    double delay_sum_s = 0.0; // over packets delivered in this bucket

    double mean_delay_s() const {
        return delivered == 0 ? 0.0 : delay_sum_s / static_cast<double>(delivered);
    }
};

struct RunSummary {
    std::uint64_t calls = 0;
    std::uint64_t completed = 0;
    std::optional<double> completion_rate; // absent when there were no calls
    double mean_delay_s = 0.0;             // over completed calls
    double p95_delay_s = 0.0;
    std::uint64_t drops = 0;
};

struct MetricsSeries {
    double bucket_width_s = 1.0;
    std::vector<MetricsBucket> buckets;

    MetricsBucket& bucket_at(double time_s);
    std::uint64_t total_delivered() const;
    std::uint64_t total_dropped() const;
};

std::vector<CallSpec> generate_calls(std::uint32_t count, double rate_per_s,
                                     const Topology& topo, Rng& rng,
                                     std::uint32_t packet_count,
                                     std::uint64_t packet_size_bits);

// Deterministic exploitation rule for data packets: highest-probability
// neighbor, ties broken by smallest NodeId.
NodeId route_data_packet(NodeId at, NodeId dest, const PheromoneTable& table);

RunSummary summarize(const std::vector<CallRecord>& records, const MetricsSeries& series);

std::string metrics_csv(const MetricsSeries& series);
std::string summary_csv(const RunSummary& summary);

// stable fingerprint for checking that paired runs share a workload
std::uint64_t workload_hash(const std::vector<CallSpec>& calls);

} // namespace antnet

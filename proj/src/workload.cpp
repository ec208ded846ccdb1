#include "antnet/workload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

namespace antnet {

MetricsBucket& MetricsSeries::bucket_at(double time_s) {
    auto idx = static_cast<std::size_t>(time_s / bucket_width_s);
    while (buckets.size() <= idx) {
        MetricsBucket b;
        b.time_s = static_cast<double>(buckets.size()) * bucket_width_s;
        buckets.push_back(b);
    }
    return buckets[idx];
}

std::uint64_t MetricsSeries::total_delivered() const {
    std::uint64_t n = 0;
    for (const auto& b : buckets)
        n += b.delivered;
    return n;
}

std::uint64_t MetricsSeries::total_dropped() const {
    std::uint64_t n = 0;
    for (const auto& b : buckets)
        n += b.dropped;
    return n;
}

std::vector<CallSpec> generate_calls(std::uint32_t count, double rate_per_s,
                                     const Topology& topo, Rng& rng,
                                     std::uint32_t packet_count,
                                     std::uint64_t packet_size_bits) {
    if (topo.nodes().size() < 2)
        throw WorkloadError("generate_calls: need at least 2 nodes");
    if (rate_per_s <= 0.0)
        throw WorkloadError("generate_calls: rate must be positive");
    std::vector<NodeId> pool(topo.nodes().begin(), topo.nodes().end());
    std::vector<CallSpec> calls;
    calls.reserve(count);
    double t = 0.0;
    for (std::uint32_t i = 0; i < count; ++i) {
        t += rng.next_exponential(rate_per_s);
        CallSpec c;
        c.call_id = i;
        c.issue_time_s = t;
        c.source = pool[rng.next_index(pool.size())];
        do {
            c.destination = pool[rng.next_index(pool.size())];
        } while (c.destination == c.source);
        c.packet_count = packet_count;
        c.packet_size_bits = packet_size_bits;
        calls.push_back(c);
    }
    return calls;
}

NodeId route_data_packet(NodeId at, NodeId dest, const PheromoneTable& table) {
    const PheromoneRow* row = table.find_row(dest);
    if (row == nullptr || row->entries.empty())
        throw RoutingError("route_data_packet: no row for destination " +
                           std::to_string(dest) + " at node " + std::to_string(at));
    NodeId best = row->entries.begin()->first;
    double best_p = row->entries.begin()->second;
    for (const auto& [nb, p] : row->entries) {
        if (p > best_p) { // map iteration is id-ascending, so ties keep the smaller id
            best = nb;
            best_p = p;
        }
    }
    return best;
}

RunSummary summarize(const std::vector<CallRecord>& records, const MetricsSeries& series) {
    RunSummary s;
    s.calls = records.size();
    s.drops = series.total_dropped();
    std::vector<double> delays;
    for (const auto& r : records) {
        if (r.outcome() == CallOutcome::Completed) {
            ++s.completed;
            delays.push_back(r.mean_delay_s());
        }
    }
    if (s.calls > 0)
        s.completion_rate = static_cast<double>(s.completed) / static_cast<double>(s.calls);
    if (!delays.empty()) {
        double sum = 0.0;
        for (double d : delays)
            sum += d;
        s.mean_delay_s = sum / static_cast<double>(delays.size());
        std::sort(delays.begin(), delays.end());
        auto idx = static_cast<std::size_t>(
            std::ceil(0.95 * static_cast<double>(delays.size()))) - 1;
        s.p95_delay_s = delays[std::min(idx, delays.size() - 1)];
    }
    return s;
}

static std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string metrics_csv(const MetricsSeries& series) {
    std::ostringstream out;
    out << "time,delivered,dropped,ant_launches,ant_deaths,mean_delay\n";
    for (const auto& b : series.buckets) {
        out << fmt_num(b.time_s) << ',' << b.delivered << ',' << b.dropped << ','
            << b.ant_launches << ',' << b.ant_deaths << ',' << fmt_num(b.mean_delay_s())
            << '\n';
    }
    return out.str();
}

std::string summary_csv(const RunSummary& s) {
    std::ostringstream out;
    out << "calls,completed,completion_rate,mean_delay,p95_delay,drops\n";
    out << s.calls << ',' << s.completed << ',';
    if (s.completion_rate)
        out << fmt_num(*s.completion_rate);
    out << ',' << fmt_num(s.mean_delay_s) << ',' << fmt_num(s.p95_delay_s) << ','
        << s.drops << '\n';
    return out.str();
}

std::uint64_t workload_hash(const std::vector<CallSpec>& calls) {
    std::uint64_t h = 1469598103934665603ull; // FNV-1a
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    for (const auto& c : calls) {
        mix(c.call_id);
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(c.issue_time_s));
        std::memcpy(&bits, &c.issue_time_s, sizeof(bits));
        mix(bits);
        mix(c.source);
        mix(c.destination);
        mix(c.packet_count);
        mix(c.packet_size_bits);
    }
    return h;
}

} // namespace antnet

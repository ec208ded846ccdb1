#include "antnet/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace antnet {

void SimConfig::validate() const {
    if (duration_s < 0.0)
        throw SimError("duration must be >= 0");
    if (ant_launch_interval_s <= 0.0)
        throw SimError("ant launch interval must be positive");
    if (processing_delay_base_s < 0.0)
        throw SimError("processing delay base must be >= 0");
    if (load_smoothing < 0.0 || load_smoothing > 1.0)
        throw SimError("load smoothing must be in [0,1]");
    if (metrics_bucket_s <= 0.0)
        throw SimError("metrics bucket width must be positive");
    if (ant_size_bits == 0)
        throw SimError("ant size must be positive");
}

HopDelay hop_delay(const LinkSpec& link, std::uint64_t queue_bits_ahead,
                   std::uint64_t packet_bits, double processing_load, double base_s) {
    if (!link.up)
        throw SimError("hop_delay on a down link");
    if (link.bandwidth_bps <= 0.0)
        throw SimError("hop_delay: non-positive bandwidth");
    HopDelay d;
    d.link_term_s = static_cast<double>(queue_bits_ahead + packet_bits) / link.bandwidth_bps +
                    link.prop_delay_s;
    d.node_term_s = base_s * (1.0 + processing_load);
    return d;
}

namespace {

struct DataTransit {
    std::uint32_t call_index = 0;
    NodeId source = 0;
    NodeId dest = 0;
    double launch_time = 0.0;
    std::uint32_t hops = 0;
    std::size_t path_pos = 0; // static mode: index into the frozen path
};

struct FwdState {
    ForwardAnt ant;
    double launch_time = 0.0;
};

struct TransitPacket {
    PacketClass cls = PacketClass::Low;
    std::uint64_t bits = 0;
    std::variant<FwdState, BackwardAnt, DataTransit> body;
};

struct AntLaunchEv { NodeId node; };
struct CallLaunchEv { std::uint32_t index; };
struct ArrivalEv { NodeId at; NodeId from; TransitPacket packet; };
struct NodeRemovalEv { NodeId node; };
struct LinkFreeEv { NodeId from; NodeId to; };
struct TickEv {};

using EventKind =
    std::variant<AntLaunchEv, CallLaunchEv, ArrivalEv, NodeRemovalEv, LinkFreeEv, TickEv>;

struct SimEvent {
    double time = 0.0;
    std::uint64_t seq = 0;
    EventKind kind;
};

// min-heap over (time, seq); seq is the insertion tie-break so the
// processing order is total and reproducible
struct EventQueue {
    std::vector<SimEvent> heap;
    std::uint64_t next_seq = 0;

    static bool later(const SimEvent& a, const SimEvent& b) {
        return a.time > b.time || (a.time == b.time && a.seq > b.seq);
    }

    void push(double time, EventKind kind) {
        heap.push_back({time, next_seq++, std::move(kind)});
        std::push_heap(heap.begin(), heap.end(), later);
    }

    bool empty() const { return heap.empty(); }
    double top_time() const { return heap.front().time; }

    SimEvent pop() {
        std::pop_heap(heap.begin(), heap.end(), later);
        SimEvent ev = std::move(heap.back());
        heap.pop_back();
        return ev;
    }
};

struct LinkServer {
    std::deque<TransitPacket> high;
    std::deque<TransitPacket> low;
    std::uint64_t queued_bits = 0;
    bool busy = false;
};

struct NodeState {
    PheromoneTable table;
    TrafficModel model;
    double processing_load = 0.0;
    double last_service_time = 0.0;
    bool served_before = false;
};

class Engine {
public:
    Engine(const SimConfig& config, const Topology& topo, const FailureSchedule& schedule,
           const AntNetParams& params, const std::vector<CallSpec>& calls)
        : cfg_(config), params_(params), topo_(topo), topo0_(topo), calls_(calls),
          rng_(config.seed) {
        cfg_.validate();
        params_.validate();
        schedule.validate(topo);
        if (topo.nodes().empty())
            throw SimError("empty topology");
        result_.series.bucket_width_s = cfg_.metrics_bucket_s;
        if (cfg_.duration_s > 0.0)
            for (const auto& ev : schedule.events)
                queue_.push(ev.time_s, NodeRemovalEv{ev.node});
    }

    RunResult run() {
        init_nodes();
        init_call_records();
        if (cfg_.duration_s > 0.0) {
            if (cfg_.routing == RoutingMode::Adaptive)
                for (NodeId n : topo_.nodes())
                    queue_.push(cfg_.ant_launch_interval_s, AntLaunchEv{n});
            for (std::uint32_t i = 0; i < calls_.size(); ++i)
                if (calls_[i].issue_time_s < cfg_.duration_s)
                    queue_.push(calls_[i].issue_time_s, CallLaunchEv{i});
            for (double t = 0.0; t < cfg_.duration_s; t += cfg_.metrics_bucket_s)
                queue_.push(t, TickEv{});
        }

        while (!queue_.empty() && queue_.top_time() <= cfg_.duration_s) {
            SimEvent ev = queue_.pop();
            if (ev.time < now_ - 1e-12)
                throw SimError("event queue yielded a past event");
            now_ = std::max(now_, ev.time);
            hash_event(ev);
            std::visit([&](auto& kind) { handle(ev.time, kind); }, ev.kind);
        }
        finalize();
        return std::move(result_);
    }

private:
    MetricsBucket& bucket() {
        double cap = std::max(0.0, cfg_.duration_s - 1e-9);
        return result_.series.bucket_at(std::min(now_, cap));
    }

    void init_nodes() {
        for (NodeId n : topo_.nodes()) {
            NodeState st;
            st.table.owner = n;
            st.model.owner = n;
            auto nbs = topo_.neighbors(n);
            if (!nbs.empty()) {
                std::set<NodeId> dests = topo_.nodes();
                dests.erase(n);
                st.table = init_uniform(n, nbs, dests);
            }
            nodes_[n] = std::move(st);
        }
    }

    void init_call_records() {
        result_.call_records.reserve(calls_.size());
        for (const auto& c : calls_) {
            CallRecord r;
            r.call_id = c.call_id;
            r.source = c.source;
            r.destination = c.destination;
            r.issue_time_s = c.issue_time_s;
            r.packets_total = c.packet_count;
            result_.call_records.push_back(r);
        }
    }

    // ---- event handlers ----

    void handle(double, TickEv&) { bucket(); }

    void handle(double t, AntLaunchEv& ev) {
        if (!topo_.has_node(ev.node))
            return; // node removed; its launch cycle dies with it
        queue_.push(t + cfg_.ant_launch_interval_s, AntLaunchEv{ev.node});
        auto nbs = topo_.neighbors(ev.node);
        if (nbs.empty() || topo_.nodes().size() < 2)
            return;
        std::set<NodeId> dests = topo_.nodes();
        dests.erase(ev.node);
        FwdState fw;
        fw.ant = spawn_forward(next_ant_id_++, ev.node, dests, rng_);
        fw.launch_time = t;
        ++result_.counters.ants_launched;
        ++bucket().ant_launches;
        forward_step(std::move(fw), ev.node);
    }

    void handle(double t, CallLaunchEv& ev) {
        const CallSpec& call = calls_[ev.index];
        CallRecord& rec = result_.call_records[ev.index];
        if (!topo_.has_node(call.source)) {
            rec.packets_dropped += call.packet_count;
            bucket().dropped += call.packet_count;
            result_.counters.data_dropped += call.packet_count;
            result_.counters.data_injected += call.packet_count;
            return;
        }
        for (std::uint32_t p = 0; p < call.packet_count; ++p) {
            ++result_.counters.data_injected;
            DataTransit d;
            d.call_index = ev.index;
            d.source = call.source;
            d.dest = call.destination;
            d.launch_time = t;
            data_step(d, call.source, call.packet_size_bits);
        }
    }

    void handle(double, NodeRemovalEv& ev) {
        if (!topo_.has_node(ev.node))
            throw SimError("node " + std::to_string(ev.node) + " already removed");
        topo_ = topo_.remove_node(ev.node);
        // purge the removed node's own queues and everything queued toward it
        for (auto& [key, server] : servers_) {
            if (key.first != ev.node && key.second != ev.node)
                continue;
            for (auto* q : {&server.high, &server.low})
                for (auto& pkt : *q)
                    count_purged(pkt);
            server.high.clear();
            server.low.clear();
            server.queued_bits = 0;
        }
        nodes_.erase(ev.node);
        for (auto& [n, st] : nodes_) {
            st.table.forget_node(ev.node);
            st.model.forget_node(ev.node);
        }
    }

    void handle(double t, LinkFreeEv& ev) {
        LinkServer& server = servers_[{ev.from, ev.to}];
        server.busy = false;
        start_service(t, ev.from, ev.to, server);
    }

    void handle(double t, ArrivalEv& ev) {
        if (!topo_.has_node(ev.at)) {
            count_purged(ev.packet); // destination of this hop vanished mid-flight
            return;
        }
        std::visit([&](auto& body) { arrive(t, ev.at, body, ev.packet.bits); },
                   ev.packet.body);
    }

    // ---- arrivals by payload ----

    void arrive(double t, NodeId at, FwdState& fw, std::uint64_t) {
        ForwardAnt& ant = fw.ant;
        ++ant.hops;
        if (ant.hops > 2 * topo_.nodes().size()) {
            ant_death();
            return;
        }
        if (!topo_.has_node(ant.destination)) {
            ant_death();
            return;
        }
        if (ant.visited.count(at) != 0)
            remove_loop(ant, at);
        else
            record_visit(ant, at, t - fw.launch_time);

        if (at == ant.destination) {
            BackwardAnt back = to_backward(ant);
            NodeId next = back.stack[back.cursor - 1].node;
            send_backward(std::move(back), at, next);
        } else {
            forward_step(std::move(fw), at);
        }
    }

    void arrive(double t, NodeId at, BackwardAnt& ant, std::uint64_t) {
        NodeId came_from = ant.stack[ant.cursor].node;
        NodeId dest = ant.destination();
        if (!topo_.has_node(dest) || !topo_.has_node(came_from) ||
            topo_.find_link(at, came_from) == nullptr) {
            ant_death(); // the path it is retracing no longer exists
            return;
        }
        NodeState& st = nodes_.at(at);
        BackwardStep step = backward_update_at(ant, at, st.table, st.model, params_,
                                               cfg_.subpath_updates);
        (void)t;
        if (!step.next_reverse_hop) {
            ++result_.counters.ants_completed;
            return;
        }
        send_backward(std::move(ant), at, *step.next_reverse_hop);
    }

    void arrive(double t, NodeId at, DataTransit& d, std::uint64_t bits) {
        ++d.hops;
        if (at == d.dest) {
            CallRecord& rec = result_.call_records[d.call_index];
            double delay = t - d.launch_time;
            if (rec.packets_delivered == 0 || t < rec.first_delivery_s)
                rec.first_delivery_s = t;
            rec.last_delivery_s = std::max(rec.last_delivery_s, t);
            ++rec.packets_delivered;
            rec.delay_sum_s += delay;
            rec.hop_sum += d.hops;
            ++result_.counters.data_delivered;
            MetricsBucket& b = bucket();
            ++b.delivered;
            b.delay_sum_s += delay;
            return;
        }
        if (d.hops > 4 * topo_.nodes().size()) {
            drop_data(d);
            return;
        }
        data_step(d, at, bits);
    }

    // ---- movement ----

    void forward_step(FwdState&& fw, NodeId at) {
        const PheromoneRow* row = nodes_.at(at).table.find_row(fw.ant.destination);
        if (row == nullptr || row->entries.empty()) {
            ant_death();
            return;
        }
        NodeId next = select_next_hop(*row, fw.ant.visited, rng_);
        TransitPacket pkt;
        pkt.cls = PacketClass::Low;
        pkt.bits = cfg_.ant_size_bits;
        pkt.body = std::move(fw);
        if (!enqueue(at, next, std::move(pkt)))
            ant_death();
    }

    void send_backward(BackwardAnt&& ant, NodeId at, NodeId next) {
        TransitPacket pkt;
        pkt.cls = PacketClass::High;
        pkt.bits = cfg_.ant_size_bits;
        pkt.body = std::move(ant);
        if (!enqueue(at, next, std::move(pkt)))
            ant_death();
    }

    void data_step(DataTransit& d, NodeId at, std::uint64_t bits) {
        NodeId next;
        if (cfg_.routing == RoutingMode::StaticShortestPath) {
            const std::vector<NodeId>* path = frozen_path(d.source, d.dest);
            if (path == nullptr || d.path_pos + 1 >= path->size() ||
                (*path)[d.path_pos] != at) {
                drop_data(d);
                return;
            }
            next = (*path)[++d.path_pos];
        } else {
            const PheromoneRow* row = nodes_.at(at).table.find_row(d.dest);
            if (row == nullptr || row->entries.empty()) {
                drop_data(d);
                return;
            }
            next = route_data_packet(at, d.dest, nodes_.at(at).table);
        }
        TransitPacket pkt;
        pkt.cls = PacketClass::Low;
        pkt.bits = bits;
        pkt.body = d;
        if (!enqueue(at, next, std::move(pkt)))
            drop_data(d);
    }

    // Frozen shortest paths are computed once against the initial topology
    // and never refreshed; that is the whole point of the baseline.
    const std::vector<NodeId>* frozen_path(NodeId src, NodeId dst) {
        auto key = std::make_pair(src, dst);
        auto it = static_paths_.find(key);
        if (it == static_paths_.end()) {
            std::optional<std::vector<NodeId>> path;
            try {
                path = dijkstra_path(topo0_, src, dst, default_link_cost).path;
            } catch (const TopologyError&) {
                path = std::nullopt;
            }
            it = static_paths_.emplace(key, std::move(path)).first;
        }
        return it->second ? &*it->second : nullptr;
    }

    bool enqueue(NodeId from, NodeId to, TransitPacket&& pkt) {
        const LinkSpec* link = topo_.find_link(from, to);
        if (link == nullptr || !link->up)
            return false;
        LinkServer& server = servers_[{from, to}];
        server.queued_bits += pkt.bits;
        if (pkt.cls == PacketClass::High)
            server.high.push_back(std::move(pkt));
        else
            server.low.push_back(std::move(pkt));
        start_service(now_, from, to, server);
        return true;
    }

    void start_service(double t, NodeId from, NodeId to, LinkServer& server) {
        if (server.busy)
            return;
        const LinkSpec* link = topo_.find_link(from, to);
        if (link == nullptr || !link->up) {
            for (auto* q : {&server.high, &server.low})
                for (auto& pkt : *q)
                    count_purged(pkt);
            server.high.clear();
            server.low.clear();
            server.queued_bits = 0;
            return;
        }
        TransitPacket pkt;
        PacketClass cls;
        if (!server.high.empty()) {
            pkt = std::move(server.high.front());
            server.high.pop_front();
            cls = PacketClass::High;
        } else if (!server.low.empty()) {
            pkt = std::move(server.low.front());
            server.low.pop_front();
            cls = PacketClass::Low;
        } else {
            return;
        }
        server.queued_bits -= pkt.bits;
        if (cls == PacketClass::Low && !server.high.empty())
            ++result_.counters.priority_violations;
        if (cfg_.record_trace)
            result_.trace.push_back({t, from, to, cls, server.high.size()});

        NodeState& st = nodes_.at(from);
        if (st.served_before) {
            double dt = std::max(t - st.last_service_time, 1e-3);
            st.processing_load += cfg_.load_smoothing * (1.0 / dt - st.processing_load);
        }
        st.served_before = true;
        st.last_service_time = t;

        HopDelay d = hop_delay(*link, 0, pkt.bits, st.processing_load,
                               cfg_.processing_delay_base_s);
        // the transmitter is held for the transmission time only; processing
        // and propagation delay the packet without blocking the queue
        double transmission = d.link_term_s - link->prop_delay_s;
        server.busy = true;
        queue_.push(t + transmission, LinkFreeEv{from, to});
        queue_.push(t + transmission + d.node_term_s + link->prop_delay_s,
                    ArrivalEv{to, from, std::move(pkt)});
    }

    // ---- accounting ----

    void ant_death() {
        ++result_.counters.ants_died;
        ++bucket().ant_deaths;
    }

    void drop_data(const DataTransit& d) {
        ++result_.counters.data_dropped;
        ++bucket().dropped;
        ++result_.call_records[d.call_index].packets_dropped;
    }

    void count_purged(const TransitPacket& pkt) {
        if (std::holds_alternative<DataTransit>(pkt.body))
            drop_data(std::get<DataTransit>(pkt.body));
        else
            ant_death();
    }

    void count_in_flight(const TransitPacket& pkt) {
        if (std::holds_alternative<DataTransit>(pkt.body))
            ++result_.counters.data_in_flight_at_end;
        else
            ++result_.counters.ants_in_flight_at_end;
    }

    void finalize() {
        for (const auto& ev : queue_.heap)
            if (const auto* arr = std::get_if<ArrivalEv>(&ev.kind))
                count_in_flight(arr->packet);
        for (const auto& [key, server] : servers_) {
            for (const auto& pkt : server.high)
                count_in_flight(pkt);
            for (const auto& pkt : server.low)
                count_in_flight(pkt);
        }
        for (const auto& [n, st] : nodes_)
            result_.final_tables[n] = st.table;
        result_.summary = summarize(result_.call_records, result_.series);
        result_.workload_fingerprint = workload_hash(calls_);
        result_.trace_hash = hash_;
    }

    void hash_event(const SimEvent& ev) {
        auto mix = [this](std::uint64_t v) {
            for (int i = 0; i < 8; ++i) {
                hash_ ^= (v >> (8 * i)) & 0xff;
                hash_ *= 1099511628211ull;
            }
        };
        std::uint64_t tbits;
        std::memcpy(&tbits, &ev.time, sizeof(tbits));
        mix(tbits);
        mix(ev.seq);
        mix(static_cast<std::uint64_t>(ev.kind.index()));
        std::visit(
            [&](const auto& k) {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, AntLaunchEv>)
                    mix(k.node);
                else if constexpr (std::is_same_v<K, CallLaunchEv>)
                    mix(k.index);
                else if constexpr (std::is_same_v<K, ArrivalEv>)
                    mix((static_cast<std::uint64_t>(k.from) << 32) | k.at);
                else if constexpr (std::is_same_v<K, NodeRemovalEv>)
                    mix(k.node);
                else if constexpr (std::is_same_v<K, LinkFreeEv>)
                    mix((static_cast<std::uint64_t>(k.from) << 32) | k.to);
            },
            ev.kind);
    }

    SimConfig cfg_;
    AntNetParams params_;
    Topology topo_;
    const Topology topo0_;
    std::vector<CallSpec> calls_;
    Rng rng_;
    EventQueue queue_;
    std::map<NodeId, NodeState> nodes_;
    std::map<std::pair<NodeId, NodeId>, LinkServer> servers_;
    std::map<std::pair<NodeId, NodeId>, std::optional<std::vector<NodeId>>> static_paths_;
    RunResult result_;
    double now_ = 0.0;
    std::uint64_t next_ant_id_ = 0;
    std::uint64_t hash_ = 1469598103934665603ull;
};

} // namespace

RunResult run(const SimConfig& config, const Topology& topo, const FailureSchedule& schedule,
              const AntNetParams& params, const std::vector<CallSpec>& calls) {
    Engine engine(config, topo, schedule, params, calls);
    return engine.run();
}

} // namespace antnet

#ifndef RCP_PACKET_SIM_HPP
#define RCP_PACKET_SIM_HPP

#include <cstdint>
#include <vector>

#include "rcp/fluid_model.hpp"

namespace rcp {

/// Discrete-event simulation of a single bottleneck: n Poisson sources, a
/// FIFO server, and a router that periodically recomputes the advertised
/// per-flow rate.  All byte/time units are bytes and milliseconds
/// (1 Gbps = 125000 bytes/ms).
struct PacketSimConfig {
    Variant variant = Variant::WithQueue;
    double capacity = 125000.0;  ///< bytes/ms
    int n_sources = 100;
    double rtt = 100.0;  ///< ms, common to all flows (half forward, half reverse)
    double a = 0.4;
    double b = 0.005;     ///< WithQueue only
    double gamma = 0.95;  ///< WithoutQueue only
    double packet_size = 1000.0;        ///< bytes
    double control_interval = 0.0;      ///< ms; 0 selects the default rtt/16
    double duration = 20000.0;          ///< ms
    std::uint64_t seed = 1;
    std::int64_t buffer_limit = -1;     ///< packets; negative = unbounded
};

struct PacketTrace {
    std::vector<double> t;                  ///< ms, one sample per control interval
    std::vector<std::int64_t> queue_pkts;   ///< packets in system at the sample
    std::vector<double> rate;               ///< advertised per-flow rate, bytes/ms
    std::vector<double> served_bytes;       ///< cumulative bytes served at the sample
    std::uint64_t generated = 0;  ///< packets that reached the router
    std::uint64_t served = 0;
    std::uint64_t queued_final = 0;
    std::uint64_t dropped = 0;
    // Echoed so the metrics do not need the config.
    double capacity = 0.0;
    double rtt = 0.0;
    double packet_size = 0.0;
    std::uint64_t seed = 0;
};

/// Runs the simulation.  Deterministic: identical config and seed give a
/// bit-identical trace.  generated == served + queued_final + dropped holds
/// exactly on return.
PacketTrace run(const PacketSimConfig& cfg);

struct OscillationMetrics {
    double rate_amplitude;   ///< half peak-to-trough of the per-RTT-averaged rate
    double queue_amplitude;  ///< same for the queue, in packets
    double mean_utilization; ///< served bytes / capacity over the tail window
};

/// Tail-window oscillation summary of a trace; the trace must span more than
/// 20 round-trip times.
OscillationMetrics oscillation_metrics(const PacketTrace& trace, double tail_fraction = 0.5);

}  // namespace rcp

#endif

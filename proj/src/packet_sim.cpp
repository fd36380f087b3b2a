#include "rcp/packet_sim.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace rcp {

namespace {

// SplitMix64; one independent stream per source so changing n_sources does
// not reshuffle the other sources' arrivals.
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Uniform in (0, 1]: never 0, so -log is finite.
    double uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }
    double exponential(double mean) { return -std::log(uniform()) * mean; }
};

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g{seed ^ (0x5851f42d4c957f2dULL * (stream + 1))};
    g.next();
    return g.next();
}

// Tie order at equal timestamps: service completion, control update, applied-
// rate change, arrival at the router, source sends; then by source id, then
// insertion order.
enum EventClass : std::uint8_t {
    kService = 0,
    kControl = 1,
    kRateChange = 2,
    kArrival = 3,
    kSend = 4
};

struct Event {
    double t;
    std::uint8_t cls;
    std::int32_t src;
    std::uint32_t gen;  // send-generation tag; stale sends are discarded
    std::uint64_t seq;
};

struct EventLater {
    bool operator()(const Event& a, const Event& b) const {
        if (a.t != b.t) return a.t > b.t;
        if (a.cls != b.cls) return a.cls > b.cls;
        if (a.src != b.src) return a.src > b.src;
        return a.seq > b.seq;
    }
};

void validate(const PacketSimConfig& c) {
    if (!(c.capacity > 0.0)) throw std::invalid_argument("PacketSimConfig: capacity must be > 0");
    if (c.n_sources < 1) throw std::invalid_argument("PacketSimConfig: n_sources must be >= 1");
    if (!(c.rtt > 0.0)) throw std::invalid_argument("PacketSimConfig: rtt must be > 0");
    if (!(c.duration > 0.0)) throw std::invalid_argument("PacketSimConfig: duration must be > 0");
    if (!(c.packet_size > 0.0)) throw std::invalid_argument("PacketSimConfig: packet_size must be > 0");
    if (!(c.a > 0.0)) throw std::invalid_argument("PacketSimConfig: a must be > 0");
    if (c.control_interval < 0.0)
        throw std::invalid_argument("PacketSimConfig: control_interval must be >= 0");
    if (c.variant == Variant::WithQueue) {
        if (!(c.b >= 0.0)) throw std::invalid_argument("PacketSimConfig: b must be >= 0");
    } else if (!(c.gamma > 0.0 && c.gamma <= 1.0)) {
        throw std::invalid_argument("PacketSimConfig: gamma must be in (0,1]");
    }
}

}  // namespace

PacketTrace run(const PacketSimConfig& cfg) {
    validate(cfg);
    const double C = cfg.capacity;
    const int n = cfg.n_sources;
    const double pkt = cfg.packet_size;
    const double fwd_delay = cfg.rtt / 2.0;
    const double delta = cfg.control_interval > 0.0 ? cfg.control_interval : cfg.rtt / 16.0;
    const double service_time = pkt / C;

    // Equilibrium utilization target and the initial per-flow advertised rate.
    double target_rho;
    if (cfg.variant == Variant::WithQueue) {
        const double b = cfg.b;
        target_rho = (b + 4.0 - std::sqrt(b * b + 8.0 * b)) / 4.0;
    } else {
        target_rho = cfg.gamma;
    }
    const double r_min = C / (1e6 * n);
    const double r_max = C;
    double advertised = std::clamp(target_rho * C / n, r_min, r_max);
    double applied = advertised;  // what sources currently use (one forward delay old)

    std::vector<SplitMix64> rng;
    rng.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        rng.push_back(SplitMix64{stream_seed(cfg.seed, static_cast<std::uint64_t>(i))});
    // Pending-send generation per source: a rate change invalidates the
    // outstanding send and redraws the gap (memorylessness makes the redraw
    // statistically exact), so a source throttled to a near-zero rate wakes
    // up as soon as a faster rate reaches it.
    std::vector<std::uint32_t> gen(static_cast<std::size_t>(n), 0);

    std::priority_queue<Event, std::vector<Event>, EventLater> events;
    std::uint64_t seq = 0;
    auto push = [&](double t, EventClass cls, std::int32_t src, std::uint32_t g = 0) {
        events.push(Event{t, static_cast<std::uint8_t>(cls), src, g, seq++});
    };

    for (int i = 0; i < n; ++i)
        push(rng[static_cast<std::size_t>(i)].exponential(pkt / applied), kSend, i, 0);
    push(delta, kControl, -1);

    PacketTrace tr;
    tr.capacity = C;
    tr.rtt = cfg.rtt;
    tr.packet_size = pkt;
    tr.seed = cfg.seed;
    tr.t.push_back(0.0);
    tr.queue_pkts.push_back(0);
    tr.rate.push_back(advertised);
    tr.served_bytes.push_back(0.0);

    std::int64_t in_system = 0;  // packets queued or in service
    double bytes_in = 0.0;       // arrivals in the current control interval
    double served_bytes = 0.0;
    double backlog_area = 0.0;  // integral of in_system dt over the interval
    double area_mark = 0.0;
    auto flush_area = [&](double now) {
        backlog_area += static_cast<double>(in_system) * (now - area_mark);
        area_mark = now;
    };
    // The backlog signal is noisy (its short-window deviation is on the order
    // of its mean), so the queue term averages it over the last round trip.
    const std::size_t q_window =
        static_cast<std::size_t>(std::max(1L, std::lround(cfg.rtt / delta)));
    std::vector<double> area_ring(q_window, 0.0);
    std::size_t area_pos = 0;
    double area_sum = 0.0;

    while (!events.empty() && events.top().t <= cfg.duration) {
        const Event ev = events.top();
        events.pop();
        switch (ev.cls) {
            case kService: {
                flush_area(ev.t);
                ++tr.served;
                served_bytes += pkt;
                --in_system;
                if (in_system > 0) push(ev.t + service_time, kService, -1);
                break;
            }
            case kControl: {
                flush_area(ev.t);
                const double y = bytes_in / delta;
                area_sum += backlog_area - area_ring[area_pos];
                area_ring[area_pos] = backlog_area;
                area_pos = (area_pos + 1) % q_window;
                double mismatch;
                if (cfg.variant == Variant::WithQueue) {
                    // The round-trip-averaged backlog (in packets) stands in
                    // for the fluid model's mean-queue term b*C*p(y); near
                    // the operating point the stationary backlog tracks the
                    // mean-queue law, so the linearized loop matches the
                    // fluid one.
                    const double qbar_pkts =
                        area_sum / (delta * static_cast<double>(q_window));
                    mismatch = (C - y - cfg.b * C * qbar_pkts) / C;
                } else {
                    mismatch = (cfg.gamma * C - y) / (cfg.gamma * C);
                }
                // Exact step of the multiplicative rate law with the
                // mismatch frozen over the interval; agrees with the Euler
                // form 1 + a*delta/rtt*mismatch to first order and cannot
                // cross zero during deep overload.
                advertised =
                    std::clamp(advertised * std::exp(cfg.a * delta / cfg.rtt * mismatch),
                               r_min, r_max);
                bytes_in = 0.0;
                backlog_area = 0.0;
                tr.t.push_back(ev.t);
                tr.queue_pkts.push_back(in_system);
                tr.rate.push_back(advertised);
                tr.served_bytes.push_back(served_bytes);
                push(ev.t + delta, kControl, -1);
                push(ev.t + fwd_delay, kRateChange, -1);
                break;
            }
            case kRateChange: {
                applied = tr.rate[static_cast<std::size_t>(
                    std::lround((ev.t - fwd_delay) / delta))];
                for (int i = 0; i < n; ++i) {
                    const std::uint32_t g = ++gen[static_cast<std::size_t>(i)];
                    push(ev.t + rng[static_cast<std::size_t>(i)].exponential(pkt / applied),
                         kSend, i, g);
                }
                break;
            }
            case kArrival: {
                flush_area(ev.t);
                ++tr.generated;
                bytes_in += pkt;
                const std::int64_t waiting = in_system > 0 ? in_system - 1 : 0;
                if (cfg.buffer_limit >= 0 && waiting >= cfg.buffer_limit) {
                    ++tr.dropped;
                } else {
                    ++in_system;
                    if (in_system == 1) push(ev.t + service_time, kService, -1);
                }
                break;
            }
            case kSend: {
                // Sends scheduled before the last rate change carry a
                // superseded gap; drop them.
                if (ev.gen != gen[static_cast<std::size_t>(ev.src)]) break;
                push(ev.t + fwd_delay, kArrival, ev.src);
                push(ev.t + rng[static_cast<std::size_t>(ev.src)].exponential(pkt / applied),
                     kSend, ev.src, ev.gen);
                break;
            }
        }
    }

    tr.queued_final = static_cast<std::uint64_t>(in_system);
    return tr;
}

OscillationMetrics oscillation_metrics(const PacketTrace& trace, double tail_fraction) {
    if (trace.t.size() < 4) throw std::invalid_argument("oscillation_metrics: trace too short");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw std::invalid_argument("oscillation_metrics: tail_fraction must be in (0,1]");
    const double span = trace.t.back() - trace.t.front();
    if (!(span > 20.0 * trace.rtt))
        throw std::invalid_argument("oscillation_metrics: trace must span more than 20 RTTs");

    const double sample_dt = trace.t[1] - trace.t[0];
    const std::size_t block =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(trace.rtt / sample_dt)));

    // Per-RTT block averages smooth out packet noise before the
    // peak-to-trough measurement.
    std::vector<double> rate_s, queue_s;
    for (std::size_t i = 0; i + block <= trace.t.size(); i += block) {
        double r = 0.0, q = 0.0;
        for (std::size_t j = i; j < i + block; ++j) {
            r += trace.rate[j];
            q += static_cast<double>(trace.queue_pkts[j]);
        }
        rate_s.push_back(r / static_cast<double>(block));
        queue_s.push_back(q / static_cast<double>(block));
    }
    const std::size_t m = rate_s.size();
    const std::size_t i0 = m - std::max<std::size_t>(2, static_cast<std::size_t>(m * tail_fraction));

    double rlo = rate_s[i0], rhi = rate_s[i0], qlo = queue_s[i0], qhi = queue_s[i0];
    for (std::size_t i = i0; i < m; ++i) {
        rlo = std::min(rlo, rate_s[i]);
        rhi = std::max(rhi, rate_s[i]);
        qlo = std::min(qlo, queue_s[i]);
        qhi = std::max(qhi, queue_s[i]);
    }

    // Utilization over the raw tail window.
    const std::size_t raw0 =
        trace.t.size() -
        std::max<std::size_t>(2, static_cast<std::size_t>(trace.t.size() * tail_fraction));
    const double window = trace.t.back() - trace.t[raw0];
    const double served = trace.served_bytes.back() - trace.served_bytes[raw0];

    OscillationMetrics out;
    out.rate_amplitude = 0.5 * (rhi - rlo);
    out.queue_amplitude = 0.5 * (qhi - qlo);
    out.mean_utilization = served / (trace.capacity * window);
    return out;
}

}  // namespace rcp

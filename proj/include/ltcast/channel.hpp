#ifndef LTCAST_CHANNEL_HPP
#define LTCAST_CHANNEL_HPP

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>

#include "ltcast/bytes.hpp"
#include "ltcast/prng.hpp"

namespace ltcast {

/// One directed lossy link. loss_rate is i.i.d. Bernoulli per packet,
/// rate_limit in bytes per virtual second, latency in milliseconds.
struct LinkParams {
    double loss_rate = 0.0;
    double rate_limit = 1'000'000.0;
    double latency_ms = 0.0;
    std::uint64_t seed = 1;

    bool valid() const {
        return loss_rate >= 0.0 && loss_rate <= 1.0 && rate_limit > 0.0 && latency_ms >= 0.0;
    }
};

struct LinkStats {
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t bytes_delivered = 0;
    std::uint64_t in_flight = 0; // sent - delivered - dropped
};

struct Delivery {
    double time = 0.0;
    Bytes data;
};

/// Simulated link on an explicit virtual clock. Packets serialize through a
/// single pipe at rate_limit, then arrive latency_ms later. Loss draws come
/// from the link's own seeded stream, so a run is reproducible from
/// LinkParams alone.
class SimLink {
public:
    explicit SimLink(const LinkParams& params);

    /// Enqueues or drops a packet handed to the link at virtual time `now`.
    /// Throws std::length_error for packets over the 1450-byte datagram
    /// budget.
    void send(const Bytes& packet, double now);

    /// Removes and returns all packets due at or before `now`, in delivery
    /// order.
    std::vector<Delivery> poll(double now);

    /// Delivery time of the earliest queued packet, or +inf when idle.
    double next_delivery_time() const;

    /// Virtual time at which the serialization pipe frees up.
    double busy_until() const { return busy_until_; }

    /// Drops everything still queued (link torn down mid-flight).
    void clear_in_flight();

    const LinkStats& stats() const { return stats_; }
    const LinkParams& params() const { return params_; }

private:
    LinkParams params_;
    SeedStream drops_;
    double busy_until_ = 0.0;
    std::deque<Delivery> queue_;
    LinkStats stats_;
};

/// Best-effort local datagram transport with the same send/receive shape as
/// the simulated link, for wall-clock smoke tests.
class LoopbackTransport {
public:
    /// Binds a UDP socket on 127.0.0.1. Port 0 picks a free port.
    /// Throws std::runtime_error when the bind fails.
    explicit LoopbackTransport(std::uint16_t port = 0);
    ~LoopbackTransport();

    LoopbackTransport(const LoopbackTransport&) = delete;
    LoopbackTransport& operator=(const LoopbackTransport&) = delete;

    std::uint16_t port() const { return port_; }

    void send(const Bytes& packet, std::uint16_t dest_port);

    /// Non-blocking receive; nullopt when nothing is pending.
    std::optional<Bytes> recv();

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

} // namespace ltcast

#endif

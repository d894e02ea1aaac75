#ifndef LTCAST_COOP_HPP
#define LTCAST_COOP_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltcast/channel.hpp"
#include "ltcast/codec.hpp"
#include "ltcast/wire.hpp"

namespace ltcast::coop {

enum class Mode { Lt, Arq };

/// One assistant relay path: server -> AU uplink, AU -> RU downlink.
struct PathParams {
    LinkParams uplink;
    LinkParams downlink;
};

struct ChurnEvent {
    enum class Kind { Add, Remove };
    double time = 0.0;
    Kind kind = Kind::Remove;
    std::size_t au_index = 0; // Remove: position in the AU list (config order)
    PathParams params;        // Add: the joining relay's links
};

struct SessionConfig {
    Bytes file;                     // explicit payload; empty -> synthetic
    std::uint64_t synthetic_size = 1 << 20;
    std::uint64_t data_seed = 1;
    std::string file_id = "file";

    wire::CodingParams coding;
    LinkParams direct;              // server -> RU
    std::vector<PathParams> aus;
    std::vector<ChurnEvent> churn;
    Mode mode = Mode::Lt;

    std::size_t block_window = 4;   // concurrently active blocks at the RU
    double monitor_window = 1.0;    // goodput sample period, virtual seconds
    double max_time = 3600.0;       // virtual-time abort bound
    std::uint64_t session_seed = 1;

    Bytes payload() const;
    void validate() const;
};

struct PathStats {
    std::uint64_t scheduled = 0; // symbols the server pushed into the path
    std::uint64_t forwarded = 0; // AU -> RU sends (0 on the direct path)
    std::uint64_t delivered = 0; // packets the RU ingested from the path
};

struct SessionReport {
    double completion_time = 0.0;
    double goodput = 0.0;          // useful decoded bytes per virtual second
    double total_overhead = 0.0;   // packets RU received / minimum needed - 1
    std::vector<PathStats> per_path; // [0] = direct, then AUs in join order
    std::vector<double> timeline;    // useful bytes credited per monitor window
    std::uint64_t file_bytes = 0;
    std::uint64_t terminate_signals = 0;
    bool exact = false;            // reassembled output matched the input
};

class SessionTimeout : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Server-side rateless scheduler. There is no per-path task assignment and
/// no retransmission state: whenever a path's first-hop pipe is free it gets
/// the next fresh symbol, cycling round-robin through the active block
/// window. Seeds never repeat within a block.
class Disseminator {
public:
    struct PathRef {
        SimLink* link = nullptr;
        bool active = true;
    };

    Disseminator(Segmented data, const wire::CodingParams& coding, std::size_t block_window,
                 std::uint64_t session_seed);

    /// One scheduling pass at virtual time `now`; returns symbols pushed per
    /// path in this call.
    std::vector<std::uint32_t> step(double now, std::span<PathRef> paths);

    /// Completion feedback from the RU; retires the block and slides the
    /// window.
    void mark_block_complete(std::uint32_t block_id);

    bool all_blocks_complete() const { return completed_ == manifest().block_count; }
    const Manifest& manifest() const { return data_.manifest; }
    const Segmented& data() const { return data_; }

    /// Next fresh data packet for the current round-robin block.
    wire::DataPacket next_packet();

private:
    Segmented data_;
    wire::CodingParams coding_;
    DegreeDistribution dist_;
    std::size_t block_window_;

    std::vector<std::uint64_t> next_seed_;
    std::vector<bool> block_done_;
    std::uint32_t completed_ = 0;
    std::uint32_t window_lo_ = 0; // lowest incomplete block id
    std::uint32_t rr_cursor_ = 0;
};

/// RU-side ingest: routes data packets to per-block peeling decoders, counts
/// redundancy, credits the goodput monitor, and reassembles the file.
class RuDecoderBank {
public:
    struct IngestResult {
        enum class Kind { Accepted, Malformed, Redundant };
        Kind kind = Kind::Malformed;
        std::uint32_t block_id = 0;
        bool completed_block = false;
        bool completed_file = false;
    };

    RuDecoderBank(const wire::CodingParams& coding, Manifest manifest,
                  double monitor_window = 1.0);

    IngestResult ingest(const Bytes& datagram, double now);

    bool complete() const { return blocks_done_ == manifest_.block_count; }
    std::uint32_t blocks_complete() const { return blocks_done_; }
    double completion_time() const { return completion_time_; }

    std::uint64_t received_packets() const { return received_; }
    std::uint64_t malformed_packets() const { return malformed_; }
    std::uint64_t redundant_packets() const { return redundant_; }

    /// received / (n * blocks) - 1, the session-level redundancy ratio.
    double total_overhead() const;

    const std::vector<double>& timeline() const { return timeline_; }
    std::uint64_t useful_bytes() const { return useful_bytes_; }

    /// Reassembled original message; only valid once complete.
    Bytes file() const;

private:
    void credit(std::uint32_t block_id, std::uint32_t symbols_recovered_before,
                std::uint32_t symbols_recovered_after, double now);

    wire::CodingParams coding_;
    Manifest manifest_;
    DegreeDistribution dist_;
    double monitor_window_;

    std::map<std::uint32_t, Decoder> decoders_;
    std::map<std::uint32_t, std::set<std::uint64_t>> seen_seeds_;
    std::vector<Bytes> block_data_;
    std::vector<bool> block_complete_;
    std::uint32_t blocks_done_ = 0;

    std::uint64_t received_ = 0;
    std::uint64_t malformed_ = 0;
    std::uint64_t redundant_ = 0;
    std::uint64_t useful_bytes_ = 0;
    std::vector<double> timeline_;
    double completion_time_ = 0.0;
};

/// Runs the full cooperative workflow (register, help request, group assign,
/// ready, dissemination, terminate) on the virtual clock. Throws
/// SessionTimeout when completion is unreachable.
SessionReport run_session(const SessionConfig& cfg);

/// Same topology driven by the chunk-assignment ARQ comparator: fixed window
/// of 8 unacknowledged chunks per path, retransmit on 2xRTT timeout, dead
/// paths hand their chunks to the survivors.
SessionReport run_arq_baseline(const SessionConfig& cfg);

} // namespace ltcast::coop

#endif

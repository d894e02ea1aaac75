#include "ltcast/coop.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <sstream>
#include <tuple>

namespace ltcast::coop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SolitonParams soliton_params(const wire::CodingParams& coding) {
    return SolitonParams{coding.n, coding.c, coding.delta};
}

std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    SeedStream s(a ^ (b * 0x9E3779B97F4A7C15ull + 0x7F4A7C15ull));
    return s.next_u64();
}

} // namespace

Bytes SessionConfig::payload() const {
    if (!file.empty())
        return file;
    Bytes data(synthetic_size);
    SeedStream stream(data_seed);
    std::size_t i = 0;
    while (i + 8 <= data.size()) {
        std::uint64_t v = stream.next_u64();
        for (int s = 0; s < 8; ++s)
            data[i++] = static_cast<std::uint8_t>(v >> (8 * s));
    }
    for (std::uint64_t v = stream.next_u64(); i < data.size(); v >>= 8)
        data[i++] = static_cast<std::uint8_t>(v);
    return data;
}

void SessionConfig::validate() const {
    if (file.empty() && synthetic_size == 0)
        throw std::invalid_argument("session: empty payload");
    if (coding.n == 0 || coding.symbol_size == 0)
        throw std::invalid_argument("session: coding parameters must be positive");
    if (coding.symbol_size > wire::kMaxSymbolSize)
        throw std::invalid_argument("session: symbol size exceeds datagram budget");
    if (!SolitonParams{coding.n, coding.c, coding.delta}.valid())
        throw std::invalid_argument("session: invalid soliton parameters");
    if (!direct.valid())
        throw std::invalid_argument("session: invalid direct link");
    for (const PathParams& p : aus)
        if (!p.uplink.valid() || !p.downlink.valid())
            throw std::invalid_argument("session: invalid AU link");
    if (block_window == 0 || monitor_window <= 0.0 || max_time <= 0.0)
        throw std::invalid_argument("session: invalid scheduling parameters");
}

// ---------------------------------------------------------------------------
// Disseminator

Disseminator::Disseminator(Segmented data, const wire::CodingParams& coding,
                           std::size_t block_window, std::uint64_t session_seed)
    : data_(std::move(data)), coding_(coding), dist_(robust_soliton(soliton_params(coding))),
      block_window_(block_window) {
    const std::uint32_t blocks = data_.manifest.block_count;
    next_seed_.resize(blocks);
    block_done_.assign(blocks, false);
    for (std::uint32_t b = 0; b < blocks; ++b)
        next_seed_[b] = mix64(session_seed, b);
}

wire::DataPacket Disseminator::next_packet() {
    // Round-robin across the active window [window_lo_, window_lo_+W).
    const std::uint32_t blocks = data_.manifest.block_count;
    std::uint32_t hi = std::min<std::uint64_t>(
        blocks, static_cast<std::uint64_t>(window_lo_) + block_window_);
    std::uint32_t chosen = blocks;
    for (std::uint32_t probe = 0; probe < hi - window_lo_; ++probe) {
        std::uint32_t b = window_lo_ + (rr_cursor_ + probe) % (hi - window_lo_);
        if (!block_done_[b]) {
            chosen = b;
            rr_cursor_ = (rr_cursor_ + probe + 1) % (hi - window_lo_);
            break;
        }
    }
    if (chosen == blocks)
        throw std::logic_error("Disseminator: no incomplete block in window");

    std::uint64_t seed = next_seed_[chosen]++;
    EncodedSymbol sym = encode_symbol(data_.blocks[chosen], seed, dist_);

    wire::DataPacket pkt;
    pkt.block_id = chosen;
    pkt.block_count = blocks;
    pkt.n = coding_.n;
    pkt.symbol_size = coding_.symbol_size;
    pkt.seed = seed;
    pkt.payload = std::move(sym.payload);
    return pkt;
}

std::vector<std::uint32_t> Disseminator::step(double now, std::span<PathRef> paths) {
    std::vector<std::uint32_t> sent(paths.size(), 0);
    if (all_blocks_complete())
        return sent;
    for (std::size_t p = 0; p < paths.size(); ++p) {
        if (!paths[p].active || paths[p].link == nullptr)
            continue;
        while (paths[p].link->busy_until() <= now && !all_blocks_complete()) {
            paths[p].link->send(wire::encode_data_packet(next_packet()), now);
            ++sent[p];
        }
    }
    return sent;
}

void Disseminator::mark_block_complete(std::uint32_t block_id) {
    if (block_id >= block_done_.size() || block_done_[block_id])
        return;
    block_done_[block_id] = true;
    ++completed_;
    while (window_lo_ < block_done_.size() && block_done_[window_lo_]) {
        ++window_lo_;
        rr_cursor_ = 0;
    }
}

// ---------------------------------------------------------------------------
// RuDecoderBank

RuDecoderBank::RuDecoderBank(const wire::CodingParams& coding, Manifest manifest,
                             double monitor_window)
    : coding_(coding), manifest_(manifest), dist_(robust_soliton(soliton_params(coding))),
      monitor_window_(monitor_window), block_data_(manifest.block_count),
      block_complete_(manifest.block_count, false) {}

void RuDecoderBank::credit(std::uint32_t block_id, std::uint32_t before, std::uint32_t after,
                           double now) {
    if (after <= before)
        return;
    // Only bytes inside the original message count; the final block's padding
    // carries no information.
    const std::uint64_t block_bytes =
        static_cast<std::uint64_t>(coding_.n) * coding_.symbol_size;
    const std::uint64_t block_start = static_cast<std::uint64_t>(block_id) * block_bytes;
    std::uint64_t block_useful = 0;
    if (manifest_.total_len > block_start)
        block_useful = std::min<std::uint64_t>(block_bytes, manifest_.total_len - block_start);

    // Recovered symbols credit evenly; the exact per-symbol overlap settles
    // when the block completes and symbols are written out in order.
    double per_symbol = static_cast<double>(block_useful) / coding_.n;
    double credit_bytes = per_symbol * (after - before);
    useful_bytes_ += static_cast<std::uint64_t>(credit_bytes + 0.5);

    std::size_t window = static_cast<std::size_t>(now / monitor_window_);
    if (timeline_.size() <= window)
        timeline_.resize(window + 1, 0.0);
    timeline_[window] += credit_bytes;
}

RuDecoderBank::IngestResult RuDecoderBank::ingest(const Bytes& datagram, double now) {
    IngestResult result;
    auto packet = wire::decode_data_packet(datagram);
    if (!packet || packet->n != coding_.n || packet->symbol_size != coding_.symbol_size ||
        packet->block_count != manifest_.block_count ||
        packet->block_id >= manifest_.block_count) {
        ++malformed_;
        result.kind = IngestResult::Kind::Malformed;
        return result;
    }

    ++received_;
    result.block_id = packet->block_id;

    if (block_complete_[packet->block_id]) {
        // symbol for a block that already finished
        ++redundant_;
        result.kind = IngestResult::Kind::Redundant;
        return result;
    }

    auto it = decoders_.find(packet->block_id);
    if (it == decoders_.end())
        it = decoders_
                 .emplace(packet->block_id, Decoder(packet->block_id, coding_.n,
                                                    coding_.symbol_size, dist_))
                 .first;
    Decoder& dec = it->second;

    bool duplicate = !seen_seeds_[packet->block_id].insert(packet->seed).second;
    if (duplicate)
        ++redundant_;

    std::uint32_t before = dec.recovered_count();
    EncodedSymbol sym{packet->block_id, packet->seed, std::move(packet->payload)};
    DecodeProgress progress = dec.push(sym);
    credit(packet->block_id, before, progress.recovered_count, now);

    result.kind = duplicate ? IngestResult::Kind::Redundant : IngestResult::Kind::Accepted;

    if (progress.complete) {
        result.completed_block = true;
        block_complete_[packet->block_id] = true;
        ++blocks_done_;

        Bytes flat;
        flat.reserve(static_cast<std::size_t>(coding_.n) * coding_.symbol_size);
        for (Bytes& s : dec.take_symbols())
            flat.insert(flat.end(), s.begin(), s.end());
        block_data_[packet->block_id] = std::move(flat);
        decoders_.erase(it);
        seen_seeds_.erase(packet->block_id);

        if (complete()) {
            completion_time_ = now;
            result.completed_file = true;
        }
    }
    return result;
}

double RuDecoderBank::total_overhead() const {
    double needed = static_cast<double>(coding_.n) * manifest_.block_count;
    return static_cast<double>(received_) / needed - 1.0;
}

Bytes RuDecoderBank::file() const {
    if (!complete())
        throw std::logic_error("RuDecoderBank::file: decode incomplete");
    return reassemble(block_data_, manifest_);
}

// ---------------------------------------------------------------------------
// Cooperative session (LT mode)

namespace {

struct Path {
    std::unique_ptr<SimLink> first;  // server->AU, or server->RU for direct
    std::unique_ptr<SimLink> second; // AU->RU, null on the direct path
    bool active = true;
    PathStats stats;
};

struct ControlPlane {
    std::uint64_t terminate_signals = 0;
    wire::CodingParams coding;
    std::string ssid;
};

constexpr std::uint32_t kRuId = 1;

/// One control-channel hop: the message crosses as real wire bytes and is
/// decoded on the far side.
wire::ControlMessage pass(const wire::ControlMessage& msg) {
    Bytes b = wire::encode_ctrl(msg);
    auto decoded = wire::decode_ctrl(b);
    if (!decoded || decoded->second != b.size())
        throw std::logic_error("control channel framing failure");
    return decoded->first;
}

/// register -> help request -> group assignment -> ready.
ControlPlane run_handshake(const SessionConfig& cfg, std::size_t au_count) {
    ControlPlane ctrl;
    std::ostringstream ssid;
    ssid << "coop-" << std::hex << mix64(cfg.session_seed, 0xC0FFEE);
    ctrl.ssid = ssid.str();

    std::vector<std::uint32_t> au_ids;
    for (std::size_t i = 0; i < au_count; ++i)
        au_ids.push_back(static_cast<std::uint32_t>(2 + i));

    // register: RU then AUs
    pass(wire::Register{kRuId, 31.2, 121.5, 80});
    for (std::uint32_t id : au_ids)
        pass(wire::Register{id, 31.2, 121.5, 90});

    // help request from the RU
    pass(wire::HelpRequest{kRuId, cfg.file_id});

    // group assignment; the RU takes its coding parameters from this message
    auto ru_assign = std::get<wire::GroupAssign>(
        pass(wire::GroupAssign{ctrl.ssid, wire::Role::Ru, cfg.coding, au_ids}));
    ctrl.coding = ru_assign.coding;
    for (std::uint32_t id : au_ids) {
        pass(wire::GroupAssign{ctrl.ssid, wire::Role::Au, cfg.coding, {kRuId}});
        pass(wire::ReadySignal{id});
    }
    return ctrl;
}

/// Register/assign/ready exchange for an AU that joins mid-session.
void join_exchange(const ControlPlane& ctrl, const SessionConfig& cfg, std::uint32_t id) {
    pass(wire::Register{id, 31.2, 121.5, 90});
    pass(wire::GroupAssign{ctrl.ssid, wire::Role::Au, cfg.coding, {kRuId}});
    pass(wire::ReadySignal{id});
}

void terminate_session(const SessionConfig& cfg, ControlPlane& ctrl) {
    Bytes b = wire::encode_ctrl(wire::TerminateSignal{kRuId, cfg.file_id});
    auto decoded = wire::decode_ctrl(b);
    if (!decoded || !std::holds_alternative<wire::TerminateSignal>(decoded->first))
        throw std::logic_error("terminate signal framing failure");
    ++ctrl.terminate_signals;
}

std::string timeout_diagnostic(const char* what, double now, std::size_t live_paths,
                               std::uint64_t received, std::uint32_t blocks_done,
                               std::uint32_t blocks_total) {
    std::ostringstream os;
    os << what << ": t=" << now << "s, live_paths=" << live_paths
       << ", packets_received=" << received << ", blocks=" << blocks_done << "/"
       << blocks_total;
    return os.str();
}

} // namespace

SessionReport run_session(const SessionConfig& cfg) {
    cfg.validate();
    if (cfg.mode != Mode::Lt)
        throw std::invalid_argument("run_session: config is not in LT mode");

    const Bytes original = cfg.payload();
    Segmented segmented = segment_message(original, cfg.coding.n, cfg.coding.symbol_size);
    const std::uint32_t block_total = segmented.manifest.block_count;

    ControlPlane ctrl = run_handshake(cfg, cfg.aus.size());

    Disseminator diss(std::move(segmented), ctrl.coding, cfg.block_window, cfg.session_seed);
    RuDecoderBank ru(ctrl.coding, diss.manifest(), cfg.monitor_window);

    std::vector<Path> paths;
    {
        Path direct;
        direct.first = std::make_unique<SimLink>(cfg.direct);
        paths.push_back(std::move(direct));
        for (const PathParams& p : cfg.aus) {
            Path relay;
            relay.first = std::make_unique<SimLink>(p.uplink);
            relay.second = std::make_unique<SimLink>(p.downlink);
            paths.push_back(std::move(relay));
        }
    }

    std::vector<ChurnEvent> churn = cfg.churn;
    std::stable_sort(churn.begin(), churn.end(),
                     [](const ChurnEvent& a, const ChurnEvent& b) { return a.time < b.time; });
    std::size_t churn_next = 0;

    SessionReport report;
    report.file_bytes = original.size();

    double now = 0.0;
    bool done = false;

    auto apply_churn = [&](double t) {
        while (churn_next < churn.size() && churn[churn_next].time <= t) {
            const ChurnEvent& ev = churn[churn_next++];
            if (ev.kind == ChurnEvent::Kind::Remove) {
                std::size_t idx = 1 + ev.au_index; // paths[0] is the direct path
                if (idx < paths.size() && paths[idx].active) {
                    paths[idx].active = false;
                    paths[idx].first->clear_in_flight();
                    if (paths[idx].second)
                        paths[idx].second->clear_in_flight();
                }
            } else {
                join_exchange(ctrl, cfg, static_cast<std::uint32_t>(100 + paths.size()));
                Path relay;
                relay.first = std::make_unique<SimLink>(ev.params.uplink);
                relay.second = std::make_unique<SimLink>(ev.params.downlink);
                paths.push_back(std::move(relay));
            }
        }
    };

    auto ingest = [&](std::size_t path_idx, const Delivery& d) {
        if (done)
            return;
        ++paths[path_idx].stats.delivered;
        auto result = ru.ingest(d.data, d.time);
        if (result.completed_block)
            diss.mark_block_complete(result.block_id);
        if (result.completed_file) {
            done = true;
            terminate_session(cfg, ctrl);
        }
    };

    while (!done) {
        apply_churn(now);

        // dissemination: every active path whose pipe is free gets fresh symbols
        std::vector<Disseminator::PathRef> refs;
        refs.reserve(paths.size());
        for (Path& p : paths)
            refs.push_back({p.first.get(), p.active});
        std::vector<std::uint32_t> sent = diss.step(now, refs);
        for (std::size_t i = 0; i < paths.size(); ++i)
            paths[i].stats.scheduled += sent[i];

        // next event: churn, pipe-free, or packet delivery
        double t_next = kInf;
        if (churn_next < churn.size())
            t_next = std::min(t_next, churn[churn_next].time);
        for (Path& p : paths) {
            if (p.active && !diss.all_blocks_complete())
                t_next = std::min(t_next, std::max(now, p.first->busy_until()));
            t_next = std::min(t_next, p.first->next_delivery_time());
            if (p.second)
                t_next = std::min(t_next, p.second->next_delivery_time());
        }
        if (t_next <= now) // pipe freed exactly now; re-run dissemination
            t_next = std::nextafter(now, kInf);

        std::size_t live = 0;
        for (Path& p : paths)
            live += p.active ? 1 : 0;
        if (t_next == kInf)
            throw SessionTimeout(timeout_diagnostic("session stalled", now, live,
                                                    ru.received_packets(),
                                                    ru.blocks_complete(), block_total));
        if (t_next > cfg.max_time)
            throw SessionTimeout(timeout_diagnostic("session exceeded max_time", now, live,
                                                    ru.received_packets(),
                                                    ru.blocks_complete(), block_total));
        now = t_next;

        // deliveries due at `now`
        for (std::size_t i = 0; i < paths.size() && !done; ++i) {
            Path& p = paths[i];
            if (p.second) {
                for (Delivery& d : p.first->poll(now)) {
                    if (!p.active)
                        break; // AU left; nothing forwards
                    p.second->send(d.data, d.time);
                    ++p.stats.forwarded;
                }
                for (Delivery& d : p.second->poll(now)) {
                    ingest(i, d);
                    if (done)
                        break;
                }
            } else {
                for (Delivery& d : p.first->poll(now)) {
                    ingest(i, d);
                    if (done)
                        break;
                }
            }
        }
    }

    report.completion_time = ru.completion_time();
    report.goodput = static_cast<double>(original.size()) / report.completion_time;
    report.total_overhead = ru.total_overhead();
    report.timeline = ru.timeline();
    report.terminate_signals = ctrl.terminate_signals;
    report.per_path.reserve(paths.size());
    for (Path& p : paths)
        report.per_path.push_back(p.stats);
    report.exact = ru.file() == original;
    return report;
}

// ---------------------------------------------------------------------------
// ARQ baseline (chunk assignment + fixed window + retransmission timeouts)

namespace {

constexpr std::size_t kArqWindow = 8;
constexpr std::uint32_t kArqMaxRetries = 16;

struct ArqPath {
    std::unique_ptr<SimLink> first;
    std::unique_ptr<SimLink> second;
    bool alive = true;
    std::deque<std::uint32_t> queue;            // chunks to (re)send
    std::map<std::uint32_t, double> outstanding; // chunk -> send time
    double ack_latency = 0.0;
    double rto = 0.0;
    PathStats stats;
};

struct ArqEvent {
    double time = 0.0;
    int kind = 0; // 0 = ack, 1 = timeout
    std::size_t path = 0;
    std::uint32_t chunk = 0;

    bool operator>(const ArqEvent& o) const {
        return std::tie(time, kind, path, chunk) > std::tie(o.time, o.kind, o.path, o.chunk);
    }
};

double effective_rate(const ArqPath& p) {
    double r = p.first->params().rate_limit;
    if (p.second)
        r = std::min(r, p.second->params().rate_limit);
    return r;
}

void configure_timing(ArqPath& p, std::size_t pkt_bytes) {
    double lat = p.first->params().latency_ms / 1000.0;
    double ser = pkt_bytes / p.first->params().rate_limit;
    if (p.second) {
        lat += p.second->params().latency_ms / 1000.0;
        ser += pkt_bytes / p.second->params().rate_limit;
    }
    p.ack_latency = lat;
    double rtt = 2.0 * (lat + ser);
    // window's worth of serialization keeps back-to-back sends from timing out
    p.rto = std::max(2.0 * rtt + kArqWindow * pkt_bytes / p.first->params().rate_limit, 0.002);
}

} // namespace

SessionReport run_arq_baseline(const SessionConfig& cfg) {
    cfg.validate();
    if (cfg.mode != Mode::Arq)
        throw std::invalid_argument("run_arq_baseline: config is not in ARQ mode");

    const Bytes original = cfg.payload();
    const std::uint16_t chunk_size = cfg.coding.symbol_size;
    const std::uint32_t chunk_count =
        static_cast<std::uint32_t>((original.size() + chunk_size - 1) / chunk_size);

    ControlPlane ctrl = run_handshake(cfg, cfg.aus.size());

    std::vector<ArqPath> paths;
    {
        ArqPath direct;
        direct.first = std::make_unique<SimLink>(cfg.direct);
        paths.push_back(std::move(direct));
        for (const PathParams& pp : cfg.aus) {
            ArqPath relay;
            relay.first = std::make_unique<SimLink>(pp.uplink);
            relay.second = std::make_unique<SimLink>(pp.downlink);
            paths.push_back(std::move(relay));
        }
    }
    for (ArqPath& p : paths)
        configure_timing(p, wire::kDataHeaderSize + chunk_size);

    // initial assignment: contiguous ranges proportional to path rate
    {
        double total_rate = 0.0;
        for (ArqPath& p : paths)
            total_rate += effective_rate(p);
        std::uint32_t assigned = 0;
        for (std::size_t i = 0; i < paths.size(); ++i) {
            std::uint32_t share =
                (i + 1 == paths.size())
                    ? chunk_count - assigned
                    : static_cast<std::uint32_t>(
                          std::round(chunk_count * effective_rate(paths[i]) / total_rate));
            share = std::min(share, chunk_count - assigned);
            for (std::uint32_t c = assigned; c < assigned + share; ++c)
                paths[i].queue.push_back(c);
            assigned += share;
        }
    }

    std::vector<bool> have(chunk_count, false);
    std::vector<bool> acked(chunk_count, false);
    std::vector<std::uint32_t> retries(chunk_count, 0);
    std::uint32_t have_count = 0;

    std::priority_queue<ArqEvent, std::vector<ArqEvent>, std::greater<>> events;

    std::vector<ChurnEvent> churn = cfg.churn;
    std::stable_sort(churn.begin(), churn.end(),
                     [](const ChurnEvent& a, const ChurnEvent& b) { return a.time < b.time; });
    std::size_t churn_next = 0;

    SessionReport report;
    report.file_bytes = original.size();

    double now = 0.0;
    double completion_time = 0.0;
    bool done = false;
    std::uint64_t ru_received = 0;
    std::vector<double> timeline;

    auto chunk_payload = [&](std::uint32_t chunk) {
        std::size_t start = static_cast<std::size_t>(chunk) * chunk_size;
        std::size_t len = std::min<std::size_t>(chunk_size, original.size() - start);
        return Bytes(original.begin() + start, original.begin() + start + len);
    };

    auto reassign = [&](std::size_t dead) {
        std::vector<std::uint32_t> orphans(paths[dead].queue.begin(), paths[dead].queue.end());
        for (auto& [chunk, t] : paths[dead].outstanding)
            orphans.push_back(chunk);
        paths[dead].queue.clear();
        paths[dead].outstanding.clear();

        std::vector<std::size_t> live;
        for (std::size_t i = 0; i < paths.size(); ++i)
            if (paths[i].alive)
                live.push_back(i);
        if (live.empty()) {
            if (!orphans.empty() || have_count < chunk_count)
                throw SessionTimeout(timeout_diagnostic("arq: all paths dead", now, 0,
                                                        ru_received, have_count, chunk_count));
            return;
        }
        std::size_t rr = 0;
        for (std::uint32_t chunk : orphans) {
            if (acked[chunk])
                continue;
            paths[live[rr % live.size()]].queue.push_back(chunk);
            ++rr;
        }
    };

    auto kill_path = [&](std::size_t idx) {
        if (!paths[idx].alive)
            return;
        paths[idx].alive = false;
        paths[idx].first->clear_in_flight();
        if (paths[idx].second)
            paths[idx].second->clear_in_flight();
        reassign(idx);
    };

    auto apply_churn = [&](double t) {
        while (churn_next < churn.size() && churn[churn_next].time <= t) {
            const ChurnEvent& ev = churn[churn_next++];
            if (ev.kind == ChurnEvent::Kind::Remove) {
                kill_path(1 + ev.au_index);
            } else {
                join_exchange(ctrl, cfg, static_cast<std::uint32_t>(100 + paths.size()));
                ArqPath relay;
                relay.first = std::make_unique<SimLink>(ev.params.uplink);
                relay.second = std::make_unique<SimLink>(ev.params.downlink);
                configure_timing(relay, wire::kDataHeaderSize + chunk_size);
                paths.push_back(std::move(relay));
                // hand the newcomer half of the longest backlog
                std::size_t longest = 0;
                for (std::size_t i = 0; i < paths.size() - 1; ++i)
                    if (paths[i].alive && paths[i].queue.size() > paths[longest].queue.size())
                        longest = i;
                std::size_t steal = paths[longest].queue.size() / 2;
                ArqPath& fresh = paths.back();
                for (std::size_t s = 0; s < steal; ++s) {
                    fresh.queue.push_back(paths[longest].queue.back());
                    paths[longest].queue.pop_back();
                }
            }
        }
    };

    auto pump_sends = [&](double t) {
        for (std::size_t i = 0; i < paths.size(); ++i) {
            ArqPath& p = paths[i];
            if (!p.alive)
                continue;
            while (p.outstanding.size() < kArqWindow && !p.queue.empty() &&
                   p.first->busy_until() <= t) {
                std::uint32_t chunk = p.queue.front();
                p.queue.pop_front();
                if (acked[chunk])
                    continue;
                wire::DataPacket pkt;
                pkt.block_id = chunk;
                pkt.block_count = chunk_count;
                pkt.n = 0; // chunk framing, not an LT symbol
                Bytes body = chunk_payload(chunk);
                pkt.symbol_size = static_cast<std::uint16_t>(body.size());
                pkt.seed = retries[chunk];
                pkt.payload = std::move(body);
                p.first->send(wire::encode_data_packet(pkt), t);
                ++p.stats.scheduled;
                p.outstanding[chunk] = t;
                events.push({t + p.rto, 1, i, chunk});
            }
        }
    };

    auto credit = [&](std::uint32_t chunk, double t) {
        std::size_t start = static_cast<std::size_t>(chunk) * chunk_size;
        std::size_t len = std::min<std::size_t>(chunk_size, original.size() - start);
        std::size_t window = static_cast<std::size_t>(t / cfg.monitor_window);
        if (timeline.size() <= window)
            timeline.resize(window + 1, 0.0);
        timeline[window] += static_cast<double>(len);
    };

    auto ru_receive = [&](std::size_t path_idx, const Delivery& d) {
        auto pkt = wire::decode_data_packet(d.data);
        if (!pkt || pkt->block_id >= chunk_count)
            return;
        ++ru_received;
        ++paths[path_idx].stats.delivered;
        events.push({d.time + paths[path_idx].ack_latency, 0, path_idx, pkt->block_id});
        if (!have[pkt->block_id]) {
            have[pkt->block_id] = true;
            ++have_count;
            credit(pkt->block_id, d.time);
            if (have_count == chunk_count) {
                completion_time = d.time;
                done = true;
                terminate_session(cfg, ctrl);
            }
        }
    };

    while (!done) {
        apply_churn(now);
        pump_sends(now);

        double t_next = kInf;
        if (churn_next < churn.size())
            t_next = std::min(t_next, churn[churn_next].time);
        if (!events.empty())
            t_next = std::min(t_next, events.top().time);
        for (ArqPath& p : paths) {
            t_next = std::min(t_next, p.first->next_delivery_time());
            if (p.second)
                t_next = std::min(t_next, p.second->next_delivery_time());
            if (p.alive && !p.queue.empty() && p.outstanding.size() < kArqWindow)
                t_next = std::min(t_next, std::max(now, p.first->busy_until()));
        }
        if (t_next <= now)
            t_next = std::nextafter(now, kInf);

        if (t_next == kInf) {
            std::size_t live = 0;
            for (ArqPath& p : paths)
                live += p.alive ? 1 : 0;
            throw SessionTimeout(timeout_diagnostic("arq stalled", now, live, ru_received,
                                                    have_count, chunk_count));
        }
        if (t_next > cfg.max_time)
            throw SessionTimeout(timeout_diagnostic("arq exceeded max_time", now, 0,
                                                    ru_received, have_count, chunk_count));
        now = t_next;

        // deliveries
        for (std::size_t i = 0; i < paths.size() && !done; ++i) {
            ArqPath& p = paths[i];
            if (p.second) {
                for (Delivery& d : p.first->poll(now)) {
                    if (!p.alive)
                        break;
                    p.second->send(d.data, d.time);
                    ++p.stats.forwarded;
                }
                for (Delivery& d : p.second->poll(now)) {
                    ru_receive(i, d);
                    if (done)
                        break;
                }
            } else {
                for (Delivery& d : p.first->poll(now)) {
                    ru_receive(i, d);
                    if (done)
                        break;
                }
            }
        }

        // acks and timeouts
        while (!done && !events.empty() && events.top().time <= now) {
            ArqEvent ev = events.top();
            events.pop();
            ArqPath& p = paths[ev.path];
            if (ev.kind == 0) {
                acked[ev.chunk] = true;
                p.outstanding.erase(ev.chunk);
            } else {
                auto it = p.outstanding.find(ev.chunk);
                if (it == p.outstanding.end() || acked[ev.chunk]) {
                    if (it != p.outstanding.end() && acked[ev.chunk])
                        p.outstanding.erase(it);
                    continue;
                }
                p.outstanding.erase(it);
                p.queue.push_front(ev.chunk);
                if (++retries[ev.chunk] > kArqMaxRetries)
                    kill_path(ev.path); // survivors inherit the queue, chunk included

            }
        }
    }

    report.completion_time = completion_time;
    report.goodput = static_cast<double>(original.size()) / completion_time;
    report.total_overhead =
        static_cast<double>(ru_received) / static_cast<double>(chunk_count) - 1.0;
    report.timeline = std::move(timeline);
    report.terminate_signals = ctrl.terminate_signals;
    for (ArqPath& p : paths)
        report.per_path.push_back(p.stats);
    report.exact = have_count == chunk_count; // chunks copied verbatim
    return report;
}

} // namespace ltcast::coop

#include <doctest.h>

#include <cmath>

#include "ltcast/coop.hpp"

using namespace ltcast;
using namespace ltcast::coop;

namespace {

SessionConfig small_session(std::uint32_t aus, double loss, std::uint64_t seed,
                            std::uint64_t file_size = 256 * 1024) {
    SessionConfig cfg;
    cfg.synthetic_size = file_size;
    cfg.data_seed = seed + 11;
    cfg.coding = {64, 1024, 0.1, 0.5};
    cfg.session_seed = seed;
    std::uint64_t link_seed = seed * 31 + 5;
    auto link = [&] {
        LinkParams p;
        p.loss_rate = loss;
        p.rate_limit = 500'000.0;
        p.latency_ms = 5.0;
        p.seed = link_seed++;
        return p;
    };
    cfg.direct = link();
    for (std::uint32_t a = 0; a < aus; ++a)
        cfg.aus.push_back({link(), link()});
    return cfg;
}

} // namespace

TEST_CASE("dissemination serves every free path one fresh symbol per round") {
    Bytes data(2 * 16 * 64);
    for (std::size_t i = 0; i < data.size(); ++i)
        data[i] = static_cast<std::uint8_t>(i * 31);
    wire::CodingParams coding{16, 64, 0.1, 0.5};
    Disseminator diss(segment_message(data, coding.n, coding.symbol_size), coding, 4, 9);

    SimLink a({0.0, 100'000.0, 0.0, 1});
    SimLink b({0.0, 100'000.0, 0.0, 2});
    SimLink c({0.0, 100'000.0, 0.0, 3});
    std::vector<Disseminator::PathRef> refs = {{&a, true}, {&b, true}, {&c, false}};

    std::vector<std::uint32_t> sent = diss.step(0.0, refs);
    CHECK(sent == std::vector<std::uint32_t>{1, 1, 0}); // equal budgets, even split
    CHECK(diss.step(0.0, refs) == std::vector<std::uint32_t>{0, 0, 0}); // pipes busy

    // inactive paths never get symbols
    CHECK(c.stats().sent == 0);
}

TEST_CASE("a double-rate path receives twice the symbols within one round") {
    Bytes data(4 * 32 * 128, 0x5C);
    wire::CodingParams coding{32, 128, 0.1, 0.5};
    Disseminator diss(segment_message(data, coding.n, coding.symbol_size), coding, 4, 21);

    SimLink slow({0.0, 100'000.0, 0.0, 1});
    SimLink fast({0.0, 200'000.0, 0.0, 2});
    std::vector<Disseminator::PathRef> refs = {{&slow, true}, {&fast, true}};

    std::uint64_t slow_count = 0, fast_count = 0;
    double now = 0.0;
    for (int round = 0; round < 300; ++round) {
        std::vector<std::uint32_t> sent = diss.step(now, refs);
        slow_count += sent[0];
        fast_count += sent[1];
        now = std::min(slow.busy_until(), fast.busy_until());
    }
    CHECK(fast_count >= 2 * slow_count - 1);
    CHECK(fast_count <= 2 * slow_count + 1);
}

TEST_CASE("seeds never repeat within a block") {
    Bytes data(8 * 16, 0x42);
    wire::CodingParams coding{8, 16, 0.1, 0.5};
    Disseminator diss(segment_message(data, coding.n, coding.symbol_size), coding, 4, 55);
    std::set<std::pair<std::uint32_t, std::uint64_t>> seen;
    for (int i = 0; i < 5000; ++i) {
        wire::DataPacket pkt = diss.next_packet();
        CHECK(seen.emplace(pkt.block_id, pkt.seed).second);
    }
}

TEST_CASE("RU bank routes, counts duplicates, and reassembles") {
    Bytes data(2 * 8 * 32);
    for (std::size_t i = 0; i < data.size(); ++i)
        data[i] = static_cast<std::uint8_t>(i ^ 0x3D);
    wire::CodingParams coding{8, 32, 0.1, 0.5};
    Segmented seg = segment_message(data, coding.n, coding.symbol_size);
    Disseminator diss(seg, coding, 4, 77);
    RuDecoderBank bank(coding, seg.manifest, 1.0);

    // duplicate seed: deliver the same packet twice
    wire::DataPacket first = diss.next_packet();
    Bytes first_bytes = wire::encode_data_packet(first);
    auto r1 = bank.ingest(first_bytes, 0.0);
    CHECK(r1.kind != RuDecoderBank::IngestResult::Kind::Malformed);
    std::uint64_t redundant_before = bank.redundant_packets();
    auto r2 = bank.ingest(first_bytes, 0.0);
    CHECK(r2.kind == RuDecoderBank::IngestResult::Kind::Redundant);
    CHECK(bank.redundant_packets() == redundant_before + 1);
    CHECK(bank.received_packets() == 2);

    // malformed datagrams are dropped and counted
    CHECK(bank.ingest(Bytes{1, 2, 3}, 0.0).kind ==
          RuDecoderBank::IngestResult::Kind::Malformed);
    CHECK(bank.malformed_packets() == 1);

    // stream until both blocks finish
    double t = 0.0;
    while (!bank.complete()) {
        auto r = bank.ingest(wire::encode_data_packet(diss.next_packet()), t);
        if (r.completed_block)
            diss.mark_block_complete(r.block_id);
        t += 0.001;
    }
    CHECK(bank.file() == data);
    CHECK(bank.total_overhead() >= 0.0);

    // post-completion packets are redundant
    wire::DataPacket extra = first;
    extra.seed ^= 0x1234;
    std::uint64_t redundant_end = bank.redundant_packets();
    CHECK(bank.ingest(wire::encode_data_packet(extra), t).kind ==
          RuDecoderBank::IngestResult::Kind::Redundant);
    CHECK(bank.redundant_packets() == redundant_end + 1);
}

TEST_CASE("lossless direct-only session matches single-link arithmetic") {
    SessionConfig cfg = small_session(0, 0.0, 1, 512 * 1024);
    SessionReport report = run_session(cfg);
    REQUIRE(report.exact);
    CHECK(report.terminate_signals == 1);

    const double rate = cfg.direct.rate_limit;
    const double n_blocks = 512.0 * 1024 / (64 * 1024);
    double received = (1.0 + report.total_overhead) * 64.0 * n_blocks;
    double per_packet = (wire::kDataHeaderSize + 1024.0) / rate;
    double expected = received * per_packet + cfg.direct.latency_ms / 1000.0;
    CHECK(report.completion_time == doctest::Approx(expected).epsilon(0.02));

    // the coarse estimate file*(1+overhead)/rate holds within 10%
    double coarse = 512.0 * 1024 * (1.0 + report.total_overhead) / rate;
    CHECK(report.completion_time == doctest::Approx(coarse).epsilon(0.10));

    // goodput * completion time recovers the file size
    CHECK(report.goodput * report.completion_time ==
          doctest::Approx(double(report.file_bytes)));
}

TEST_CASE("relay paths carry traffic and the decode stays exact under loss") {
    SessionConfig cfg = small_session(2, 0.1, 3);
    SessionReport report = run_session(cfg);
    CHECK(report.exact);
    CHECK(report.terminate_signals == 1);
    REQUIRE(report.per_path.size() == 3);
    for (const PathStats& p : report.per_path) {
        CHECK(p.scheduled > 0);
        CHECK(p.delivered > 0);
    }
    // loss only removes packets along the way
    CHECK(report.per_path[0].forwarded == 0); // direct path has no relay hop
    CHECK(report.per_path[0].delivered <= report.per_path[0].scheduled);
    for (std::size_t i = 1; i < report.per_path.size(); ++i) {
        const PathStats& p = report.per_path[i];
        CHECK(p.forwarded > 0);
        CHECK(p.forwarded <= p.scheduled);
        CHECK(p.delivered <= p.forwarded);
    }
}

TEST_CASE("timeline credits sum to the file size") {
    SessionConfig cfg = small_session(1, 0.0, 5);
    cfg.monitor_window = 0.25;
    SessionReport report = run_session(cfg);
    double credited = 0.0;
    for (double w : report.timeline)
        credited += w;
    CHECK(credited == doctest::Approx(double(report.file_bytes)).epsilon(0.01));
}

TEST_CASE("removing a relay mid-session delays but never corrupts") {
    SessionConfig base = small_session(3, 0.0, 7);
    SessionReport quiet = run_session(base);
    REQUIRE(quiet.exact);

    SessionConfig churned = base;
    churned.churn.push_back(
        {0.3 * quiet.completion_time, ChurnEvent::Kind::Remove, 1, {}});
    SessionReport report = run_session(churned);
    CHECK(report.exact);
    CHECK(report.completion_time > quiet.completion_time);

    // removed path stops receiving symbols: its scheduled count is frozen early
    CHECK(report.per_path[2].scheduled < quiet.per_path[2].scheduled);
}

TEST_CASE("a joining relay speeds the session back up") {
    SessionConfig base = small_session(1, 0.0, 9);
    SessionReport solo = run_session(base);

    SessionConfig helped = base;
    PathParams fresh;
    fresh.uplink = base.direct;
    fresh.uplink.seed = 999;
    fresh.downlink = base.direct;
    fresh.downlink.seed = 998;
    helped.churn.push_back({0.2 * solo.completion_time, ChurnEvent::Kind::Add, 0, fresh});
    SessionReport report = run_session(helped);
    CHECK(report.exact);
    CHECK(report.completion_time < solo.completion_time);
    REQUIRE(report.per_path.size() == 3);
    CHECK(report.per_path[2].scheduled > 0);
}

TEST_CASE("total loss aborts with a diagnostic instead of spinning") {
    SessionConfig cfg = small_session(0, 1.0, 13, 64 * 1024);
    cfg.max_time = 5.0;
    CHECK_THROWS_AS(run_session(cfg), SessionTimeout);
    try {
        run_session(cfg);
    } catch (const SessionTimeout& e) {
        CHECK(std::string(e.what()).find("max_time") != std::string::npos);
    }
}

TEST_CASE("ARQ gives up once every path has retried itself to death") {
    SessionConfig cfg = small_session(0, 1.0, 27, 64 * 1024);
    cfg.mode = Mode::Arq;
    cfg.max_time = 600.0;
    CHECK_THROWS_AS(run_arq_baseline(cfg), SessionTimeout);
}

TEST_CASE("mode mismatches are rejected up front") {
    SessionConfig cfg = small_session(1, 0.0, 15);
    cfg.mode = Mode::Arq;
    CHECK_THROWS_AS(run_session(cfg), std::invalid_argument);
    cfg.mode = Mode::Lt;
    CHECK_THROWS_AS(run_arq_baseline(cfg), std::invalid_argument);
}

TEST_CASE("ARQ baseline completes and keeps pace on clean links") {
    SessionConfig cfg = small_session(0, 0.0, 17, 512 * 1024);
    cfg.mode = Mode::Arq;
    SessionReport report = run_arq_baseline(cfg);
    CHECK(report.exact);
    CHECK(report.terminate_signals == 1);
    // clean stop-and-wait with window 8 approaches the line rate
    double line = cfg.direct.rate_limit * 1024.0 / (wire::kDataHeaderSize + 1024.0);
    CHECK(report.goodput > 0.9 * line);
    CHECK(report.total_overhead == doctest::Approx(0.0));
}

TEST_CASE("LT rides through loss that cripples the ARQ baseline") {
    SessionConfig lt = small_session(3, 0.2, 19);
    SessionReport lt_report = run_session(lt);
    REQUIRE(lt_report.exact);

    SessionConfig arq = small_session(3, 0.2, 19);
    arq.mode = Mode::Arq;
    SessionReport arq_report = run_arq_baseline(arq);
    REQUIRE(arq_report.exact);

    CHECK(lt_report.goodput > arq_report.goodput);
}

TEST_CASE("a dead path hands its chunks to the survivors under ARQ") {
    SessionConfig cfg = small_session(2, 0.0, 23, 128 * 1024);
    cfg.mode = Mode::Arq;
    cfg.aus[1].uplink.loss_rate = 1.0; // one of three paths is a black hole
    cfg.max_time = 600.0;
    SessionReport report = run_arq_baseline(cfg);
    CHECK(report.exact);

    // the same black hole leaves LT untouched apart from rate
    SessionConfig lt = small_session(2, 0.0, 23, 128 * 1024);
    lt.aus[1].uplink.loss_rate = 1.0;
    SessionReport lt_report = run_session(lt);
    CHECK(lt_report.exact);
    CHECK(lt_report.per_path[2].delivered == 0);
}

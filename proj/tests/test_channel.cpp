#include <doctest.h>

#include <stdexcept>

#include "ltcast/channel.hpp"
#include "oracles.hpp"

using namespace ltcast;

namespace {
Bytes packet_of(std::size_t len, std::uint8_t fill = 0xAB) { return Bytes(len, fill); }
}

TEST_CASE("lossless link delivers everything; loss 1 delivers nothing") {
    SimLink perfect({0.0, 1e6, 0.0, 1});
    SimLink broken({1.0, 1e6, 0.0, 2});
    for (int i = 0; i < 500; ++i) {
        perfect.send(packet_of(100), 0.0);
        broken.send(packet_of(100), 0.0);
    }
    perfect.poll(1e9);
    broken.poll(1e9);
    CHECK(perfect.stats().sent == 500);
    CHECK(perfect.stats().delivered == 500);
    CHECK(perfect.stats().dropped == 0);
    CHECK(broken.stats().delivered == 0);
    CHECK(broken.stats().dropped == 500);
}

TEST_CASE("loss rate over many sends sits in the 3-sigma binomial band") {
    const double p = 0.2;
    const int sends = 10'000;
    SimLink link({p, 1e9, 0.0, 77});
    for (int i = 0; i < sends; ++i)
        link.send(packet_of(64), 0.0);
    link.poll(1e9);
    double delivered_fraction = double(link.stats().delivered) / sends;
    CHECK(oracles::within_binomial_3sigma(delivered_fraction, 1.0 - p, sends));
}

TEST_CASE("conservation: sent = delivered + dropped + in flight, always") {
    SimLink link({0.3, 1e5, 10.0, 5});
    for (int i = 0; i < 200; ++i) {
        link.send(packet_of(50 + i % 100), i * 0.001);
        const LinkStats& s = link.stats();
        CHECK(s.sent == s.delivered + s.dropped + s.in_flight);
        if (i % 13 == 0)
            link.poll(i * 0.001);
    }
    link.poll(1e9);
    CHECK(link.stats().sent == link.stats().delivered + link.stats().dropped);
}

TEST_CASE("nothing arrives before the latency elapses; order is FIFO") {
    SimLink link({0.0, 1e6, 50.0, 1});
    link.send(packet_of(100, 0x01), 0.0);
    link.send(packet_of(100, 0x02), 0.0);
    CHECK(link.poll(0.049).empty());
    std::vector<Delivery> due = link.poll(1.0);
    REQUIRE(due.size() == 2);
    CHECK(due[0].data[0] == 0x01);
    CHECK(due[1].data[0] == 0x02);
    CHECK(due[0].time <= due[1].time);
}

TEST_CASE("saturated link delivers rate * window within one packet") {
    const double rate = 250'000.0;
    const std::size_t pkt = 1000;
    SimLink link({0.0, rate, 0.0, 1});
    // saturate well past the window
    for (int i = 0; i < 3000; ++i)
        link.send(packet_of(pkt), 0.0);
    const double window = 4.0;
    std::uint64_t bytes_in_window = 0;
    for (const Delivery& d : link.poll(window))
        bytes_in_window += d.data.size();
    CHECK(bytes_in_window <= rate * window + pkt);
    CHECK(bytes_in_window >= rate * window - pkt);
    CHECK(double(link.stats().bytes_delivered) == doctest::Approx(double(bytes_in_window)));
}

TEST_CASE("identical seeds reproduce identical drop sequences") {
    LinkParams params{0.37, 1e6, 5.0, 424242};
    SimLink a(params);
    SimLink b(params);
    for (int i = 0; i < 2000; ++i) {
        a.send(packet_of(80), i * 0.0001);
        b.send(packet_of(80), i * 0.0001);
        CHECK(a.stats().dropped == b.stats().dropped);
    }
}

TEST_CASE("oversize packets bounce with mtu-exceeded") {
    SimLink link({0.0, 1e6, 0.0, 1});
    CHECK_THROWS_AS(link.send(packet_of(1451), 0.0), std::length_error);
    CHECK_NOTHROW(link.send(packet_of(1450), 0.0));
    CHECK_THROWS_AS(SimLink({-0.1, 1e6, 0.0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(SimLink({0.0, 0.0, 0.0, 1}), std::invalid_argument);
}

TEST_CASE("loopback transport moves datagrams intact") {
    LoopbackTransport a;
    LoopbackTransport b;
    REQUIRE(a.port() != 0);
    REQUIRE(b.port() != 0);

    CHECK_FALSE(b.recv().has_value()); // nothing pending

    Bytes msg = {1, 2, 3, 4, 5};
    a.send(msg, b.port());
    std::optional<Bytes> got;
    for (int spin = 0; spin < 1000 && !got; ++spin)
        got = b.recv();
    REQUIRE(got.has_value());
    CHECK(*got == msg);

    // a full 1450-byte datagram survives loopback without fragmentation
    Bytes big(1450);
    for (std::size_t i = 0; i < big.size(); ++i)
        big[i] = static_cast<std::uint8_t>(i);
    a.send(big, b.port());
    got.reset();
    for (int spin = 0; spin < 1000 && !got; ++spin)
        got = b.recv();
    REQUIRE(got.has_value());
    CHECK(*got == big);
}

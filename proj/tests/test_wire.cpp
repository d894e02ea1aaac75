#include <doctest.h>

#include <stdexcept>

#include "ltcast/prng.hpp"
#include "ltcast/wire.hpp"

using namespace ltcast;
using namespace ltcast::wire;

namespace {

DataPacket sample_packet(std::uint16_t symbol_size, std::uint64_t seed) {
    DataPacket p;
    SeedStream s(seed);
    p.block_id = static_cast<std::uint32_t>(s.next_u64());
    p.block_count = static_cast<std::uint32_t>(s.next_u64());
    p.n = static_cast<std::uint16_t>(s.next_u64());
    p.symbol_size = symbol_size;
    p.seed = s.next_u64();
    p.payload.resize(symbol_size);
    for (auto& b : p.payload)
        b = static_cast<std::uint8_t>(s.next_u64());
    return p;
}

} // namespace

TEST_CASE("data packet serialized size is header plus payload") {
    DataPacket p = sample_packet(1024, 1);
    CHECK(encode_data_packet(p).size() == 1049);

    DataPacket max = sample_packet(1425, 2);
    CHECK(encode_data_packet(max).size() == 1450); // exactly the budget

    DataPacket over = sample_packet(1425, 3);
    over.symbol_size = 1426;
    over.payload.resize(1426);
    CHECK_THROWS_AS(encode_data_packet(over), std::length_error);
}

TEST_CASE("data packet round-trips bit-exactly") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        DataPacket p = sample_packet(static_cast<std::uint16_t>(1 + seed * 7 % 1425), seed);
        auto decoded = decode_data_packet(encode_data_packet(p));
        REQUIRE(decoded.has_value());
        CHECK(*decoded == p);
    }
}

TEST_CASE("malformed data packets are rejected, never fatal") {
    DataPacket p = sample_packet(64, 9);
    Bytes good = encode_data_packet(p);

    SUBCASE("truncated header") {
        Bytes b(good.begin(), good.begin() + 10);
        CHECK_FALSE(decode_data_packet(b).has_value());
    }
    SUBCASE("flipped magic byte") {
        Bytes b = good;
        b[0] ^= 0x01;
        CHECK_FALSE(decode_data_packet(b).has_value());
    }
    SUBCASE("wrong version") {
        Bytes b = good;
        b[4] = 0x7F;
        CHECK_FALSE(decode_data_packet(b).has_value());
    }
    SUBCASE("length field disagrees with the buffer") {
        Bytes b = good;
        b.pop_back();
        CHECK_FALSE(decode_data_packet(b).has_value());
    }
    SUBCASE("random bytes never crash the decoder") {
        SeedStream rng(123);
        for (int i = 0; i < 2000; ++i) {
            Bytes junk(rng.next_below(1500));
            for (auto& x : junk)
                x = static_cast<std::uint8_t>(rng.next_u64());
            (void)decode_data_packet(junk); // may or may not parse; must not throw
        }
    }
}

TEST_CASE("control messages round-trip per variant") {
    std::vector<ControlMessage> messages = {
        Register{42, 31.2297, 121.4734, 77},
        HelpRequest{42, "movies/launch.mp4"},
        GroupAssign{"coop-3f2a", Role::Au, {64, 1024, 0.1, 0.5}, {1, 2, 3, 4, 5}},
        GroupAssign{"coop-3f2a", Role::Ru, {1024, 1425, 0.05, 0.5}, {}},
        ReadySignal{7},
        TerminateSignal{42, "movies/launch.mp4"},
    };
    for (const ControlMessage& msg : messages) {
        Bytes b = encode_ctrl(msg);
        auto decoded = decode_ctrl(b);
        REQUIRE(decoded.has_value());
        CHECK(decoded->second == b.size());
        CHECK(decoded->first == msg);
    }
}

TEST_CASE("control stream framing consumes one message at a time") {
    Bytes stream = encode_ctrl(ReadySignal{1});
    Bytes second = encode_ctrl(ReadySignal{2});
    stream.insert(stream.end(), second.begin(), second.end());

    auto first = decode_ctrl(stream);
    REQUIRE(first.has_value());
    CHECK(std::get<ReadySignal>(first->first).client_id == 1);
    Bytes rest(stream.begin() + first->second, stream.end());
    auto next = decode_ctrl(rest);
    REQUIRE(next.has_value());
    CHECK(std::get<ReadySignal>(next->first).client_id == 2);
}

TEST_CASE("unknown tags and truncated frames are malformed") {
    Bytes unknown = {0x00, 0x02, 0xFF, 0x00};
    CHECK_FALSE(decode_ctrl(unknown).has_value());

    Bytes good = encode_ctrl(Register{1, 0.0, 0.0, 50});
    Bytes truncated(good.begin(), good.end() - 3);
    CHECK_FALSE(decode_ctrl(truncated).has_value());

    SeedStream rng(55);
    for (int i = 0; i < 2000; ++i) {
        Bytes junk(rng.next_below(80));
        for (auto& x : junk)
            x = static_cast<std::uint8_t>(rng.next_u64());
        (void)decode_ctrl(junk);
    }
}

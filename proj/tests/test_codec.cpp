#include <doctest.h>

#include <stdexcept>

#include "ltcast/codec.hpp"
#include "oracles.hpp"

using namespace ltcast;

namespace {

Bytes pattern_bytes(std::size_t len, std::uint64_t seed) {
    Bytes out(len);
    SeedStream s(seed);
    for (auto& b : out)
        b = static_cast<std::uint8_t>(s.next_u64());
    return out;
}

/// Finds a seed whose neighbor set equals `want` (for hand-built scenarios).
std::uint64_t seed_for_neighbors(std::uint32_t n, const DegreeDistribution& dist,
                                 const std::vector<std::uint32_t>& want) {
    for (std::uint64_t seed = 0;; ++seed) {
        NeighborSet nb = neighbors_from_seed(seed, n, dist);
        if (nb.indices == want)
            return seed;
        REQUIRE(seed < 5'000'000);
    }
}

} // namespace

TEST_CASE("encode_symbol XORs the selected sources") {
    DegreeDistribution dist = ideal_soliton(3);
    SourceBlock block;
    block.block_id = 7;
    block.symbol_size = 1;
    block.symbols = {{0x0F}, {0xF0}, {0xAA}};

    std::uint64_t s1 = seed_for_neighbors(3, dist, {1});
    EncodedSymbol deg1 = encode_symbol(block, s1, dist);
    CHECK(deg1.payload == Bytes{0xF0}); // degree-1 is the identity

    std::uint64_t s01 = seed_for_neighbors(3, dist, {0, 1});
    EncodedSymbol deg2 = encode_symbol(block, s01, dist);
    CHECK(deg2.payload == Bytes{0xFF});
    CHECK(deg2.block_id == 7);
}

TEST_CASE("three-symbol peeling cascade recovers everything") {
    DegreeDistribution dist = ideal_soliton(3);
    SourceBlock block;
    block.block_id = 0;
    block.symbol_size = 2;
    block.symbols = {{0x01, 0x10}, {0x02, 0x20}, {0x04, 0x40}};

    Decoder dec(0, 3, 2, dist);
    // {0}, {0,1}, {1,2}: first releases 0, then peeling cascades
    auto push_set = [&](std::vector<std::uint32_t> want) {
        return dec.push(encode_symbol(block, seed_for_neighbors(3, dist, want), dist));
    };
    DecodeProgress p = push_set({0});
    CHECK(p.recovered_count == 1);
    CHECK_FALSE(p.complete);
    p = push_set({0, 1});
    CHECK(p.recovered_count == 2);
    p = push_set({1, 2});
    CHECK(p.complete);
    CHECK(p.recovered_count == 3);
    CHECK(dec.symbol(0) == block.symbols[0]);
    CHECK(dec.symbol(1) == block.symbols[1]);
    CHECK(dec.symbol(2) == block.symbols[2]);
    CHECK(dec.overhead() == doctest::Approx(0.0));
}

TEST_CASE("rank-deficient symbol sets never complete") {
    DegreeDistribution dist = ideal_soliton(3);
    SourceBlock block;
    block.block_id = 0;
    block.symbol_size = 1;
    block.symbols = {{0x01}, {0x02}, {0x04}};

    Decoder dec(0, 3, 1, dist);
    for (auto& want : std::vector<std::vector<std::uint32_t>>{{0, 1}, {1, 2}, {0, 2}}) {
        DecodeProgress p =
            dec.push(encode_symbol(block, seed_for_neighbors(3, dist, want), dist));
        CHECK_FALSE(p.complete);
        CHECK(p.recovered_count == 0);
    }
    CHECK_THROWS_AS(dec.overhead(), std::logic_error);
}

TEST_CASE("single-symbol block completes on the first push") {
    DegreeDistribution dist = ideal_soliton(1);
    SourceBlock block;
    block.block_id = 0;
    block.symbol_size = 4;
    block.symbols = {{1, 2, 3, 4}};
    Decoder dec(0, 1, 4, dist);
    DecodeProgress p = dec.push(encode_symbol(block, 99, dist));
    CHECK(p.complete);
    CHECK(dec.overhead() == doctest::Approx(0.0));
}

TEST_CASE("pushes after completion are counted but change nothing") {
    DegreeDistribution dist = ideal_soliton(1);
    SourceBlock block;
    block.block_id = 0;
    block.symbol_size = 1;
    block.symbols = {{0x5A}};
    Decoder dec(0, 1, 1, dist);
    dec.push(encode_symbol(block, 1, dist));
    REQUIRE(dec.complete());
    double frozen = dec.overhead();
    dec.push(encode_symbol(block, 2, dist));
    dec.push(encode_symbol(block, 3, dist));
    CHECK(dec.received_count() == 3);
    CHECK(dec.overhead() == frozen);
    CHECK(dec.recovered_count() == 1);
}

TEST_CASE("mismatched symbols are rejected") {
    DegreeDistribution dist = ideal_soliton(2);
    Decoder dec(5, 2, 4, dist);
    EncodedSymbol wrong_block{6, 1, Bytes(4, 0)};
    CHECK_THROWS_AS(dec.push(wrong_block), std::invalid_argument);
    EncodedSymbol wrong_size{5, 1, Bytes(3, 0)};
    CHECK_THROWS_AS(dec.push(wrong_size), std::invalid_argument);
}

TEST_CASE("recovered count never decreases") {
    const std::uint32_t n = 16;
    DegreeDistribution dist = robust_soliton({n, 0.1, 0.5});
    SourceBlock block;
    block.block_id = 0;
    block.symbol_size = 8;
    for (std::uint32_t i = 0; i < n; ++i)
        block.symbols.push_back(pattern_bytes(8, i + 1));

    Decoder dec(0, n, 8, dist);
    std::uint32_t last = 0;
    std::uint64_t pushes = 0;
    for (std::uint64_t seed = 0; !dec.complete() && seed < 4096; ++seed) {
        DecodeProgress p = dec.push(encode_symbol(block, seed, dist));
        ++pushes;
        CHECK(p.recovered_count >= last);
        last = p.recovered_count;
    }
    REQUIRE(dec.complete());
    CHECK(dec.overhead() == doctest::Approx(double(pushes) / n - 1.0));
}

TEST_CASE("peeling agrees with GF(2) elimination on small random instances") {
    const std::uint32_t n = 6;
    DegreeDistribution dist = robust_soliton({n, 0.1, 0.5});
    SeedStream rng(2024);

    for (int trial = 0; trial < 400; ++trial) {
        SourceBlock block;
        block.block_id = 0;
        block.symbol_size = 4;
        for (std::uint32_t i = 0; i < n; ++i)
            block.symbols.push_back(pattern_bytes(4, rng.next_u64()));

        std::uint32_t count = 3 + rng.next_below(2 * n);
        Decoder dec(0, n, 4, dist);
        oracles::Gf2System sys;
        sys.n = n;
        bool peel_complete = false;
        for (std::uint32_t k = 0; k < count; ++k) {
            std::uint64_t seed = rng.next_u64();
            EncodedSymbol sym = encode_symbol(block, seed, dist);
            sys.add_row(neighbors_from_seed(seed, n, dist).indices, sym.payload);
            peel_complete = dec.push(sym).complete;
        }
        oracles::Gf2Solution ref = oracles::gf2_eliminate(sys);
        if (peel_complete) {
            REQUIRE(ref.rank == n);
            for (std::uint32_t i = 0; i < n; ++i) {
                CHECK((*ref.symbols)[i] == block.symbols[i]);
                CHECK(dec.symbol(i) == block.symbols[i]);
            }
        }
        if (ref.rank < n)
            CHECK_FALSE(peel_complete);
    }
}

TEST_CASE("segmentation: exact fit, padding, and block arithmetic") {
    SUBCASE("64KB fits one block exactly at n=64, N=1024") {
        Bytes data = pattern_bytes(64 * 1024, 1);
        Segmented seg = segment_message(data, 64, 1024);
        CHECK(seg.manifest.block_count == 1);
        CHECK(seg.blocks.size() == 1);
        CHECK(seg.manifest.total_len == data.size());
        Bytes flat;
        for (const Bytes& s : seg.blocks[0].symbols)
            flat.insert(flat.end(), s.begin(), s.end());
        CHECK(flat == data); // no padding
    }
    SUBCASE("1 byte pads out a full block") {
        Bytes data{0xAB};
        Segmented seg = segment_message(data, 64, 1024);
        CHECK(seg.manifest.block_count == 1);
        CHECK(seg.manifest.total_len == 1);
        CHECK(seg.blocks[0].symbols[0][0] == 0xAB);
        std::uint64_t pad = 0;
        for (const Bytes& s : seg.blocks[0].symbols)
            for (std::uint8_t b : s)
                pad += b == 0 ? 1 : 0;
        CHECK(pad >= 64 * 1024 - 1); // 65535 zero bytes
        CHECK(reassemble({Bytes{0xAB, 0, 0}}, {1, 1}) == data);
    }
    SUBCASE("multi-megabyte file block count is the ceiling division") {
        const std::uint64_t len = 9'877'389; // a 9.42MB file
        Bytes data = pattern_bytes(len, 3);
        Segmented seg = segment_message(data, 64, 1024);
        CHECK(seg.manifest.block_count == (len + 65535) / 65536);
        CHECK(seg.manifest.block_count == 151);
    }
    SUBCASE("degenerate parameters are rejected") {
        Bytes data{1};
        CHECK_THROWS_AS(segment_message(data, 0, 1024), std::invalid_argument);
        CHECK_THROWS_AS(segment_message(data, 64, 0), std::invalid_argument);
        CHECK_THROWS_AS(segment_message(Bytes{}, 64, 1024), std::invalid_argument);
    }
}

TEST_CASE("segment -> encode -> decode -> reassemble is byte-exact") {
    SeedStream rng(777);
    for (auto [n, symbol_size] : {std::pair<std::uint32_t, std::uint16_t>{8, 16},
                                  {16, 64},
                                  {64, 128}}) {
        DegreeDistribution dist = robust_soliton({n, 0.1, 0.5});
        std::size_t len = 1 + rng.next_below(3 * n * symbol_size);
        Bytes data = pattern_bytes(len, rng.next_u64());
        Segmented seg = segment_message(data, n, symbol_size);

        std::vector<Bytes> recovered(seg.manifest.block_count);
        for (SourceBlock& block : seg.blocks) {
            Decoder dec(block.block_id, n, symbol_size, dist);
            std::uint64_t seed = rng.next_u64();
            while (!dec.complete()) {
                // a lossy stream: drop every third symbol
                EncodedSymbol sym = encode_symbol(block, seed++, dist);
                if (seed % 3 == 0)
                    continue;
                dec.push(sym);
            }
            Bytes flat;
            for (Bytes& s : dec.take_symbols())
                flat.insert(flat.end(), s.begin(), s.end());
            recovered[block.block_id] = std::move(flat);
        }
        CHECK(reassemble(recovered, seg.manifest) == data);
    }
}

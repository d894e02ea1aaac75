#ifndef LTCAST_CODEC_HPP
#define LTCAST_CODEC_HPP

#include <cstdint>
#include <vector>

#include "ltcast/bytes.hpp"
#include "ltcast/prng.hpp"
#include "ltcast/soliton.hpp"

namespace ltcast {

/// One fixed-size slice of the original message: n symbols of symbol_size
/// bytes each, the last block zero-padded up to full length.
struct SourceBlock {
    std::uint32_t block_id = 0;
    std::uint16_t symbol_size = 0;
    std::vector<Bytes> symbols;
};

/// One rateless packet body: the (block, seed) pair identifies the XOR
/// combination, the payload carries it.
struct EncodedSymbol {
    std::uint32_t block_id = 0;
    std::uint64_t seed = 0;
    Bytes payload;
};

/// Original-length bookkeeping produced by segment_message; needed to strip
/// the final block's padding on reassembly.
struct Manifest {
    std::uint64_t total_len = 0;
    std::uint32_t block_count = 0;
};

struct Segmented {
    std::vector<SourceBlock> blocks;
    Manifest manifest;
};

Segmented segment_message(const Bytes& data, std::uint32_t n, std::uint16_t symbol_size);

/// Concatenates per-block recovered bytes and truncates to the manifest
/// length. Blocks must be ordered by block_id.
Bytes reassemble(const std::vector<Bytes>& block_data, const Manifest& manifest);

EncodedSymbol encode_symbol(const SourceBlock& block, std::uint64_t seed,
                            const DegreeDistribution& dist);

struct DecodeProgress {
    std::uint32_t recovered_count = 0;
    bool complete = false;
};

/// Peeling decoder for one block. Symbols whose reduced neighbor list hits
/// degree one release a source symbol, and every release is XOR-subtracted
/// from the buffered symbols until no further release is possible. Decoding
/// never fails hard: an undecodable working set just waits for more symbols.
class Decoder {
public:
    Decoder(std::uint32_t block_id, std::uint32_t n, std::uint16_t symbol_size,
            const DegreeDistribution& dist);

    DecodeProgress push(const EncodedSymbol& sym);

    bool complete() const { return recovered_count_ == n_; }
    std::uint32_t recovered_count() const { return recovered_count_; }
    std::uint64_t received_count() const { return received_count_; }

    /// received/n - 1 frozen at the moment decoding completed.
    /// Throws std::logic_error before completion.
    double overhead() const;

    std::uint32_t block_id() const { return block_id_; }
    std::uint32_t n() const { return n_; }
    std::uint16_t symbol_size() const { return symbol_size_; }

    /// Recovered source symbols in index order; only valid once complete.
    std::vector<Bytes> take_symbols();
    const Bytes& symbol(std::uint32_t index) const { return recovered_[index]; }

private:
    struct Pending {
        std::vector<std::uint32_t> neighbors;
        Bytes payload;
        bool alive = false;
    };

    void release(std::uint32_t index, Bytes value);

    std::uint32_t block_id_;
    std::uint32_t n_;
    std::uint16_t symbol_size_;
    const DegreeDistribution* dist_;

    std::vector<Bytes> recovered_;
    std::vector<bool> have_;
    std::uint32_t recovered_count_ = 0;
    std::uint64_t received_count_ = 0;
    std::uint64_t received_at_completion_ = 0;

    std::vector<Pending> pending_;
    std::vector<std::uint32_t> free_slots_;
    std::vector<std::vector<std::uint32_t>> by_index_; // source index -> pending slots
};

void xor_into(Bytes& acc, const Bytes& other);

} // namespace ltcast

#endif

#include "ltcast/codec.hpp"

#include <algorithm>
#include <stdexcept>

namespace ltcast {

void xor_into(Bytes& acc, const Bytes& other) {
    for (std::size_t i = 0; i < acc.size(); ++i)
        acc[i] ^= other[i];
}

Segmented segment_message(const Bytes& data, std::uint32_t n, std::uint16_t symbol_size) {
    if (data.empty())
        throw std::invalid_argument("segment_message: empty input");
    if (n == 0 || symbol_size == 0)
        throw std::invalid_argument("segment_message: n and symbol_size must be positive");

    const std::uint64_t block_bytes = static_cast<std::uint64_t>(n) * symbol_size;
    const std::uint32_t block_count =
        static_cast<std::uint32_t>((data.size() + block_bytes - 1) / block_bytes);

    Segmented out;
    out.manifest.total_len = data.size();
    out.manifest.block_count = block_count;
    out.blocks.reserve(block_count);

    std::size_t pos = 0;
    for (std::uint32_t b = 0; b < block_count; ++b) {
        SourceBlock block;
        block.block_id = b;
        block.symbol_size = symbol_size;
        block.symbols.reserve(n);
        for (std::uint32_t s = 0; s < n; ++s) {
            Bytes sym(symbol_size, 0);
            if (pos < data.size()) {
                std::size_t take = std::min<std::size_t>(symbol_size, data.size() - pos);
                std::copy(data.begin() + pos, data.begin() + pos + take, sym.begin());
                pos += take;
            }
            block.symbols.push_back(std::move(sym));
        }
        out.blocks.push_back(std::move(block));
    }
    return out;
}

Bytes reassemble(const std::vector<Bytes>& block_data, const Manifest& manifest) {
    if (block_data.size() != manifest.block_count)
        throw std::invalid_argument("reassemble: block count mismatch");
    Bytes out;
    out.reserve(manifest.total_len);
    for (const Bytes& b : block_data)
        out.insert(out.end(), b.begin(), b.end());
    if (out.size() < manifest.total_len)
        throw std::invalid_argument("reassemble: blocks shorter than manifest length");
    out.resize(manifest.total_len);
    return out;
}

EncodedSymbol encode_symbol(const SourceBlock& block, std::uint64_t seed,
                            const DegreeDistribution& dist) {
    const std::uint32_t n = static_cast<std::uint32_t>(block.symbols.size());
    NeighborSet nb = neighbors_from_seed(seed, n, dist);
    EncodedSymbol sym;
    sym.block_id = block.block_id;
    sym.seed = seed;
    sym.payload.assign(block.symbol_size, 0);
    for (std::uint32_t idx : nb.indices)
        xor_into(sym.payload, block.symbols[idx]);
    return sym;
}

Decoder::Decoder(std::uint32_t block_id, std::uint32_t n, std::uint16_t symbol_size,
                 const DegreeDistribution& dist)
    : block_id_(block_id), n_(n), symbol_size_(symbol_size), dist_(&dist),
      recovered_(n), have_(n, false), by_index_(n) {
    if (n == 0 || symbol_size == 0)
        throw std::invalid_argument("Decoder: n and symbol_size must be positive");
    if (dist.max_degree() != n)
        throw std::invalid_argument("Decoder: distribution does not match n");
}

DecodeProgress Decoder::push(const EncodedSymbol& sym) {
    if (sym.block_id != block_id_ || sym.payload.size() != symbol_size_)
        throw std::invalid_argument("Decoder::push: symbol does not belong to this block");

    ++received_count_;
    if (complete())
        return {recovered_count_, true};

    NeighborSet nb = neighbors_from_seed(sym.seed, n_, *dist_);

    // Subtract already-recovered sources up front.
    Bytes payload = sym.payload;
    std::vector<std::uint32_t> remaining;
    remaining.reserve(nb.indices.size());
    for (std::uint32_t idx : nb.indices) {
        if (have_[idx])
            xor_into(payload, recovered_[idx]);
        else
            remaining.push_back(idx);
    }

    if (remaining.empty()) {
        // Fully redundant with what we already know.
    } else if (remaining.size() == 1) {
        release(remaining[0], std::move(payload));
    } else {
        std::uint32_t slot;
        if (!free_slots_.empty()) {
            slot = free_slots_.back();
            free_slots_.pop_back();
        } else {
            slot = static_cast<std::uint32_t>(pending_.size());
            pending_.emplace_back();
        }
        Pending& p = pending_[slot];
        p.neighbors = std::move(remaining);
        p.payload = std::move(payload);
        p.alive = true;
        for (std::uint32_t idx : p.neighbors)
            by_index_[idx].push_back(slot);
    }

    if (complete())
        received_at_completion_ = received_count_;
    return {recovered_count_, complete()};
}

void Decoder::release(std::uint32_t index, Bytes value) {
    // Peel: each newly recovered source is removed from every buffered
    // symbol that references it; any symbol reduced to degree one releases
    // the next source.
    std::vector<std::pair<std::uint32_t, Bytes>> queue;
    queue.emplace_back(index, std::move(value));

    while (!queue.empty()) {
        auto [idx, val] = std::move(queue.back());
        queue.pop_back();
        if (have_[idx])
            continue;
        have_[idx] = true;
        recovered_[idx] = std::move(val);
        ++recovered_count_;

        std::vector<std::uint32_t> slots = std::move(by_index_[idx]);
        by_index_[idx].clear();
        for (std::uint32_t slot : slots) {
            Pending& p = pending_[slot];
            if (!p.alive)
                continue;
            auto it = std::find(p.neighbors.begin(), p.neighbors.end(), idx);
            if (it == p.neighbors.end())
                continue;
            xor_into(p.payload, recovered_[idx]);
            p.neighbors.erase(it);
            if (p.neighbors.size() == 1) {
                std::uint32_t last = p.neighbors[0];
                p.alive = false;
                p.neighbors.clear();
                queue.emplace_back(last, std::move(p.payload));
                p.payload = Bytes();
                free_slots_.push_back(slot);
            }
        }
    }
}

double Decoder::overhead() const {
    if (!complete())
        throw std::logic_error("Decoder::overhead: decoding not complete");
    return static_cast<double>(received_at_completion_) / static_cast<double>(n_) - 1.0;
}

std::vector<Bytes> Decoder::take_symbols() {
    if (!complete())
        throw std::logic_error("Decoder::take_symbols: decoding not complete");
    std::vector<Bytes> out = std::move(recovered_);
    recovered_.assign(n_, Bytes());
    return out;
}

} // namespace ltcast

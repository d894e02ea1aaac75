#include "ltcast/wire.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace ltcast::wire {

namespace {

void put_u8(Bytes& b, std::uint8_t v) { b.push_back(v); }

void put_u16(Bytes& b, std::uint16_t v) {
    b.push_back(static_cast<std::uint8_t>(v >> 8));
    b.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(Bytes& b, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8)
        b.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_u64(Bytes& b, std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8)
        b.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_f64(Bytes& b, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    put_u64(b, bits);
}

void put_string(Bytes& b, const std::string& s) {
    if (s.size() > 0xFFFF)
        throw std::invalid_argument("wire: string too long");
    put_u16(b, static_cast<std::uint16_t>(s.size()));
    b.insert(b.end(), s.begin(), s.end());
}

/// Bounds-checked big-endian reader; any read past the end marks the
/// cursor bad instead of throwing so decoders can just bail out once.
class Reader {
public:
    Reader(const std::uint8_t* data, std::size_t len) : data_(data), len_(len) {}

    std::uint8_t u8() { return ok(1) ? data_[pos_++] : fail8(); }

    std::uint16_t u16() {
        if (!ok(2)) return fail8();
        std::uint16_t v = static_cast<std::uint16_t>((data_[pos_] << 8) | data_[pos_ + 1]);
        pos_ += 2;
        return v;
    }

    std::uint32_t u32() {
        if (!ok(4)) return fail8();
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v = (v << 8) | data_[pos_ + i];
        pos_ += 4;
        return v;
    }

    std::uint64_t u64() {
        if (!ok(8)) return fail8();
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v = (v << 8) | data_[pos_ + i];
        pos_ += 8;
        return v;
    }

    double f64() {
        std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }

    std::string str() {
        std::uint16_t len = u16();
        if (!ok(len)) { bad_ = true; return {}; }
        std::string s(reinterpret_cast<const char*>(data_ + pos_), len);
        pos_ += len;
        return s;
    }

    Bytes bytes(std::size_t count) {
        if (!ok(count)) { bad_ = true; return {}; }
        Bytes b(data_ + pos_, data_ + pos_ + count);
        pos_ += count;
        return b;
    }

    bool bad() const { return bad_; }
    std::size_t remaining() const { return len_ - pos_; }
    std::size_t pos() const { return pos_; }

private:
    bool ok(std::size_t need) {
        if (bad_ || len_ - pos_ < need) { bad_ = true; return false; }
        return true;
    }
    std::uint8_t fail8() { bad_ = true; return 0; }

    const std::uint8_t* data_;
    std::size_t len_;
    std::size_t pos_ = 0;
    bool bad_ = false;
};

enum class Tag : std::uint8_t {
    Register = 1,
    HelpRequest = 2,
    GroupAssign = 3,
    ReadySignal = 4,
    TerminateSignal = 5,
};

} // namespace

Bytes encode_data_packet(const DataPacket& p) {
    if (p.payload.size() != p.symbol_size)
        throw std::invalid_argument("encode_data_packet: payload/symbol_size mismatch");
    if (p.symbol_size > kMaxSymbolSize)
        throw std::length_error("encode_data_packet: symbol size exceeds datagram budget");
    Bytes b(kDataHeaderSize + p.payload.size());
    std::size_t at = 0;
    auto w8 = [&](std::uint8_t v) { b[at++] = v; };
    auto w16 = [&](std::uint16_t v) {
        w8(static_cast<std::uint8_t>(v >> 8));
        w8(static_cast<std::uint8_t>(v));
    };
    auto w32 = [&](std::uint32_t v) {
        w16(static_cast<std::uint16_t>(v >> 16));
        w16(static_cast<std::uint16_t>(v));
    };
    for (std::uint8_t m : kMagic)
        w8(m);
    w8(kVersion);
    w32(p.block_id);
    w32(p.block_count);
    w16(p.n);
    w16(p.symbol_size);
    w32(static_cast<std::uint32_t>(p.seed >> 32));
    w32(static_cast<std::uint32_t>(p.seed));
    std::copy(p.payload.begin(), p.payload.end(), b.begin() + kDataHeaderSize);
    return b;
}

std::optional<DataPacket> decode_data_packet(const Bytes& buf) {
    if (buf.size() < kDataHeaderSize || buf.size() > kMaxDatagram)
        return std::nullopt;
    Reader r(buf.data(), buf.size());
    for (std::uint8_t m : kMagic)
        if (r.u8() != m)
            return std::nullopt;
    if (r.u8() != kVersion)
        return std::nullopt;
    DataPacket p;
    p.block_id = r.u32();
    p.block_count = r.u32();
    p.n = r.u16();
    p.symbol_size = r.u16();
    p.seed = r.u64();
    if (r.bad() || r.remaining() != p.symbol_size)
        return std::nullopt;
    p.payload = r.bytes(p.symbol_size);
    return p;
}

namespace {

void encode_body(Bytes& b, const Register& m) {
    put_u8(b, static_cast<std::uint8_t>(Tag::Register));
    put_u32(b, m.client_id);
    put_f64(b, m.latitude);
    put_f64(b, m.longitude);
    put_u8(b, m.battery);
}

void encode_body(Bytes& b, const HelpRequest& m) {
    put_u8(b, static_cast<std::uint8_t>(Tag::HelpRequest));
    put_u32(b, m.client_id);
    put_string(b, m.file_id);
}

void encode_body(Bytes& b, const GroupAssign& m) {
    put_u8(b, static_cast<std::uint8_t>(Tag::GroupAssign));
    put_string(b, m.ssid);
    put_u8(b, static_cast<std::uint8_t>(m.role));
    put_u16(b, m.coding.n);
    put_u16(b, m.coding.symbol_size);
    put_f64(b, m.coding.c);
    put_f64(b, m.coding.delta);
    if (m.peers.size() > 0xFFFF)
        throw std::invalid_argument("wire: too many peers");
    put_u16(b, static_cast<std::uint16_t>(m.peers.size()));
    for (std::uint32_t peer : m.peers)
        put_u32(b, peer);
}

void encode_body(Bytes& b, const ReadySignal& m) {
    put_u8(b, static_cast<std::uint8_t>(Tag::ReadySignal));
    put_u32(b, m.client_id);
}

void encode_body(Bytes& b, const TerminateSignal& m) {
    put_u8(b, static_cast<std::uint8_t>(Tag::TerminateSignal));
    put_u32(b, m.client_id);
    put_string(b, m.file_id);
}

} // namespace

Bytes encode_ctrl(const ControlMessage& msg) {
    Bytes body;
    std::visit([&](const auto& m) { encode_body(body, m); }, msg);
    if (body.size() > 0xFFFF)
        throw std::invalid_argument("wire: control message too long");
    Bytes framed;
    framed.reserve(2 + body.size());
    put_u16(framed, static_cast<std::uint16_t>(body.size()));
    framed.insert(framed.end(), body.begin(), body.end());
    return framed;
}

std::optional<std::pair<ControlMessage, std::size_t>> decode_ctrl(const Bytes& buf) {
    if (buf.size() < 3)
        return std::nullopt;
    std::uint16_t body_len = static_cast<std::uint16_t>((buf[0] << 8) | buf[1]);
    if (buf.size() < 2u + body_len || body_len == 0)
        return std::nullopt;
    Reader r(buf.data() + 2, body_len);
    std::uint8_t tag = r.u8();
    ControlMessage msg;
    switch (static_cast<Tag>(tag)) {
    case Tag::Register: {
        Register m;
        m.client_id = r.u32();
        m.latitude = r.f64();
        m.longitude = r.f64();
        m.battery = r.u8();
        msg = m;
        break;
    }
    case Tag::HelpRequest: {
        HelpRequest m;
        m.client_id = r.u32();
        m.file_id = r.str();
        msg = m;
        break;
    }
    case Tag::GroupAssign: {
        GroupAssign m;
        m.ssid = r.str();
        std::uint8_t role = r.u8();
        if (role > 1)
            return std::nullopt;
        m.role = static_cast<Role>(role);
        m.coding.n = r.u16();
        m.coding.symbol_size = r.u16();
        m.coding.c = r.f64();
        m.coding.delta = r.f64();
        std::uint16_t count = r.u16();
        for (std::uint16_t i = 0; i < count && !r.bad(); ++i)
            m.peers.push_back(r.u32());
        msg = m;
        break;
    }
    case Tag::ReadySignal: {
        ReadySignal m;
        m.client_id = r.u32();
        msg = m;
        break;
    }
    case Tag::TerminateSignal: {
        TerminateSignal m;
        m.client_id = r.u32();
        m.file_id = r.str();
        msg = m;
        break;
    }
    default:
        return std::nullopt;
    }
    if (r.bad() || r.remaining() != 0)
        return std::nullopt;
    return std::make_pair(std::move(msg), 2u + static_cast<std::size_t>(body_len));
}

} // namespace ltcast::wire

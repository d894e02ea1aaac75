#ifndef LTCAST_WIRE_HPP
#define LTCAST_WIRE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ltcast/bytes.hpp"

namespace ltcast::wire {

// Application payload budget: Ethernet MTU minus IP/UDP/application framing.
inline constexpr std::size_t kMaxDatagram = 1450;
inline constexpr std::size_t kDataHeaderSize = 25;
inline constexpr std::size_t kMaxSymbolSize = kMaxDatagram - kDataHeaderSize;
inline constexpr std::array<std::uint8_t, 4> kMagic = {'L', 'T', 'C', 'P'};
// Version 1 pins the splitmix64 seed->neighbors mapping (see docs/protocol.md).
inline constexpr std::uint8_t kVersion = 1;

/// Data-channel packet. All integers big-endian on the wire; the serialized
/// size is kDataHeaderSize + symbol_size and never exceeds kMaxDatagram.
struct DataPacket {
    std::uint32_t block_id = 0;
    std::uint32_t block_count = 0;
    std::uint16_t n = 0;
    std::uint16_t symbol_size = 0;
    std::uint64_t seed = 0;
    Bytes payload;

    bool operator==(const DataPacket&) const = default;
};

Bytes encode_data_packet(const DataPacket& p);
std::optional<DataPacket> decode_data_packet(const Bytes& buf);

/// Coding parameters announced in GroupAssign; enough for a client to build
/// matching encoder/decoder state.
struct CodingParams {
    std::uint16_t n = 64;
    std::uint16_t symbol_size = 1024;
    double c = 0.1;
    double delta = 0.5;

    bool operator==(const CodingParams&) const = default;
};

enum class Role : std::uint8_t { Au = 0, Ru = 1 };

struct Register {
    std::uint32_t client_id = 0;
    double latitude = 0.0;
    double longitude = 0.0;
    std::uint8_t battery = 0;

    bool operator==(const Register&) const = default;
};

struct HelpRequest {
    std::uint32_t client_id = 0;
    std::string file_id;

    bool operator==(const HelpRequest&) const = default;
};

struct GroupAssign {
    std::string ssid;
    Role role = Role::Au;
    CodingParams coding;
    std::vector<std::uint32_t> peers;

    bool operator==(const GroupAssign&) const = default;
};

struct ReadySignal {
    std::uint32_t client_id = 0;

    bool operator==(const ReadySignal&) const = default;
};

struct TerminateSignal {
    std::uint32_t client_id = 0;
    std::string file_id;

    bool operator==(const TerminateSignal&) const = default;
};

using ControlMessage =
    std::variant<Register, HelpRequest, GroupAssign, ReadySignal, TerminateSignal>;

/// Control messages are framed for a stream: 2-byte big-endian body length,
/// then a tag byte and the tagged body.
Bytes encode_ctrl(const ControlMessage& msg);

/// Decodes one framed message from the front of `buf`. Returns the message
/// and the number of bytes consumed, or nullopt if the frame is incomplete
/// or malformed.
std::optional<std::pair<ControlMessage, std::size_t>> decode_ctrl(const Bytes& buf);

} // namespace ltcast::wire

#endif

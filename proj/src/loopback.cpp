#include "ltcast/channel.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>
#include <string>

namespace ltcast {

LoopbackTransport::LoopbackTransport(std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0)
        throw std::runtime_error("LoopbackTransport: socket() failed");

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        int err = errno;
        ::close(fd_);
        fd_ = -1;
        throw std::runtime_error("LoopbackTransport: bind failed: " +
                                 std::string(std::strerror(err)));
    }

    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);

    int flags = ::fcntl(fd_, F_GETFL, 0);
    ::fcntl(fd_, F_SETFL, flags | O_NONBLOCK);
}

LoopbackTransport::~LoopbackTransport() {
    if (fd_ >= 0)
        ::close(fd_);
}

void LoopbackTransport::send(const Bytes& packet, std::uint16_t dest_port) {
    if (packet.size() > 1450)
        throw std::length_error("LoopbackTransport::send: packet exceeds 1450 bytes");
    sockaddr_in dest{};
    dest.sin_family = AF_INET;
    dest.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    dest.sin_port = htons(dest_port);
    ::sendto(fd_, packet.data(), packet.size(), 0, reinterpret_cast<sockaddr*>(&dest),
             sizeof dest);
}

std::optional<Bytes> LoopbackTransport::recv() {
    Bytes buf(2048);
    ssize_t got = ::recv(fd_, buf.data(), buf.size(), 0);
    if (got < 0)
        return std::nullopt;
    buf.resize(static_cast<std::size_t>(got));
    return buf;
}

} // namespace ltcast

#include "ltcast/channel.hpp"

#include <algorithm>
#include <stdexcept>

namespace ltcast {

namespace {
constexpr std::size_t kMtu = 1450;
}

SimLink::SimLink(const LinkParams& params) : params_(params), drops_(params.seed) {
    if (!params.valid())
        throw std::invalid_argument("SimLink: invalid link parameters");
}

void SimLink::send(const Bytes& packet, double now) {
    if (packet.size() > kMtu)
        throw std::length_error("SimLink::send: packet exceeds 1450-byte datagram budget");
    ++stats_.sent;
    // the sender pays serialization whether or not the packet survives the air
    double start = std::max(now, busy_until_);
    double end = start + static_cast<double>(packet.size()) / params_.rate_limit;
    busy_until_ = end;
    if (drops_.next_unit() < params_.loss_rate) {
        ++stats_.dropped;
        return;
    }
    ++stats_.in_flight;
    queue_.push_back({end + params_.latency_ms / 1000.0, packet});
}

std::vector<Delivery> SimLink::poll(double now) {
    std::vector<Delivery> out;
    while (!queue_.empty() && queue_.front().time <= now) {
        ++stats_.delivered;
        --stats_.in_flight;
        stats_.bytes_delivered += queue_.front().data.size();
        out.push_back(std::move(queue_.front()));
        queue_.pop_front();
    }
    return out;
}

double SimLink::next_delivery_time() const {
    return queue_.empty() ? std::numeric_limits<double>::infinity() : queue_.front().time;
}

void SimLink::clear_in_flight() {
    stats_.in_flight -= queue_.size();
    stats_.dropped += queue_.size();
    queue_.clear();
}

} // namespace ltcast

#ifndef LTCAST_BYTES_HPP
#define LTCAST_BYTES_HPP

#include <cstdint>
#include <vector>

namespace ltcast {

using Bytes = std::vector<std::uint8_t>;

} // namespace ltcast

#endif

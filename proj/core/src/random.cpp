#include "secache/random.hpp"

#include <cmath>

namespace secache {

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) noexcept
    : key_(mix64(mix64(mix64(seed ^ 0x6A09E667F3BCC909ULL) + stream) + substream)) {}

double CounterRng::exponential() noexcept { return -std::log(uniform()); }

}  // namespace secache

#include "hcnqos/random.hpp"

namespace hcnqos {

Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(block),
                    static_cast<std::uint32_t>(block >> 32)};
  return Rng(seq);
}

}  // namespace hcnqos

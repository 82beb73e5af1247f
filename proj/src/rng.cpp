#include "dmmf/rng.hpp"

#include <array>

namespace dmmf {

namespace {

std::mt19937_64 seeded(std::initializer_list<std::uint64_t> words) {
  std::vector<std::uint32_t> parts;
  for (std::uint64_t w : words) {
    parts.push_back(static_cast<std::uint32_t>(w));
    parts.push_back(static_cast<std::uint32_t>(w >> 32));
  }
  std::seed_seq seq(parts.begin(), parts.end());
  return std::mt19937_64(seq);
}

} // namespace

Stream::Stream(std::uint64_t seed) : engine_(seeded({seed})) {}

Stream::Stream(std::uint64_t master_seed, std::uint64_t replication, std::uint64_t agent, StreamTag tag)
    : engine_(seeded({master_seed, replication, agent, static_cast<std::uint64_t>(tag)})) {}

std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t rep) {
  Stream s(master_seed, rep, 0, StreamTag::replication);
  return s.next();
}

} // namespace dmmf

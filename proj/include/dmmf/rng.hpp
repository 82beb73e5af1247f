#pragma once

#include <cstdint>
#include <random>

namespace dmmf {

/// Purpose tags for independent random sub-streams.
enum class StreamTag : std::uint32_t {
  values = 1,
  agent_coins = 2,
  adversary_coins = 3,
  replication = 4,
};

/// Seedable generator for one sub-stream. Streams derived from distinct
/// (seed, replication, agent, tag) tuples are statistically independent,
/// so an adversary's coins never shift an agent's value sequence.
class Stream {
public:
  explicit Stream(std::uint64_t seed);
  Stream(std::uint64_t master_seed, std::uint64_t replication, std::uint64_t agent, StreamTag tag);

  /// Uniform double in [0, 1) built from the top 53 bits of one draw.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

/// Seed of replication `rep` under `master_seed`.
std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t rep);

} // namespace dmmf

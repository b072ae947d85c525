#pragma once

#include <cstdint>
#include <random>

namespace fts {

/// Seeded random stream. A (seed, stream-id) pair always reproduces the same
/// sequence, so parallel replications get distinct stream ids rather than
/// sharing one engine. Not thread-safe.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  double normal();
  /// Uniform on [0, 1).
  double uniform();
  /// +1 or -1 with equal probability.
  double rademacher();

  /// A stream derived from this one's identity, independent of its position.
  RngStream substream(std::uint64_t tag) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace fts

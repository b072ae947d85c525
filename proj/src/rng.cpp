#include "fts/rng.hpp"

namespace fts {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(stream_id ^ 0x5851f42d4c957f2dULL);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

double RngStream::normal() { return normal_(engine_); }

double RngStream::uniform() { return uniform_(engine_); }

double RngStream::rademacher() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

RngStream RngStream::substream(std::uint64_t tag) const {
  return RngStream(splitmix64(seed_ ^ splitmix64(tag)), stream_id_);
}

}  // namespace fts

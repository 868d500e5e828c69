#include "astar/random_stream.hpp"

#include <cmath>

namespace astar {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += kGolden);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix64(std::uint64_t x) {
  std::uint64_t state = x;
  return splitmix64(state);
}

double RandomStream::uniform() { return static_cast<double>(next_u64() >> 11) * kTwoPow53Inv; }

double RandomStream::uniform_open() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * kTwoPow53Inv;
}

double RandomStream::exponential() { return -std::log(uniform_open()); }

Xoshiro256Stream::Xoshiro256Stream(std::uint64_t seed) : key_(mix64(seed)) {
  std::uint64_t state = key_;
  for (auto& word : s_) word = splitmix64(state);
}

std::uint64_t Xoshiro256Stream::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

Xoshiro256Stream Xoshiro256Stream::child(std::uint64_t index) const {
  // Child keys depend only on the parent key and the index.
  return Xoshiro256Stream(key_ ^ mix64(index * kGolden + 0x632BE59BD9B4E019ULL));
}

std::unique_ptr<RandomStream> Xoshiro256Stream::split(std::uint64_t index) const {
  return std::make_unique<Xoshiro256Stream>(child(index));
}

}  // namespace astar

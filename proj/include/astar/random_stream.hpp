#pragma once

#include <cstdint>
#include <limits>
#include <memory>

namespace astar {

/// Seeded source of random bits with a deterministic splitting contract.
///
/// `split(k)` derives the k-th child stream from the parent's seed path
/// without advancing the parent, so replica i of an experiment always sees
/// the same numbers regardless of how replicas are scheduled on threads.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  virtual ~RandomStream() = default;

  virtual std::uint64_t next_u64() = 0;
  [[nodiscard]] virtual std::unique_ptr<RandomStream> split(std::uint64_t index) const = 0;

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1); never returns an endpoint.
  double uniform_open();
  // Unit-rate exponential.
  double exponential();

  // UniformRandomBitGenerator, so the stream can drive <random> distributions.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }
};

/// xoshiro256** seeded through splitmix64.
class Xoshiro256Stream final : public RandomStream {
 public:
  explicit Xoshiro256Stream(std::uint64_t seed);

  std::uint64_t next_u64() override;
  [[nodiscard]] std::unique_ptr<RandomStream> split(std::uint64_t index) const override;

  // Concrete-typed split for callers that want value semantics.
  [[nodiscard]] Xoshiro256Stream child(std::uint64_t index) const;

  [[nodiscard]] std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix64(std::uint64_t x);

}  // namespace astar

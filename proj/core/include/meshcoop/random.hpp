#pragma once

#include <cstdint>
#include <random>

namespace meshcoop {

// Portable seeded generator. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the conversions below are spelled out
// instead of using <random> distributions, whose algorithms are
// implementation-defined.
//
//   uniform01()      = (next() >> 11) * 2^-53            in [0, 1)
//   uniform(a, b)    = a + (b - a) * uniform01()
//   below(n)         = next() mod n, rejecting draws >= 2^64 - (2^64 mod n)
//
// generate_random() draws, in order: x then y for each node in id order
// (provider 1's nodes first); then for each provider and each of its
// sessions: source index, destination index (redrawn until it differs from
// the source), rate requirement.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace meshcoop

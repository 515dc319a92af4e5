#ifndef WICKSELL_RNG_HPP_
#define WICKSELL_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace wicksell {

// splitmix64 finalizer; used to derive independent stream keys.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class RandomStream;

// A splittable seed. Every experiment owns one root seed; replications and
// posterior draws use children derived by index, so any subset of draws can be
// recomputed (or run concurrently) without touching the others.
class Seed {
 public:
  constexpr explicit Seed(std::uint64_t value) : value_(value) {}

  constexpr Seed child(std::uint64_t index) const {
    return Seed(mix64(value_ ^ mix64(index + 0x632be59bd9b4e019ULL)));
  }

  constexpr std::uint64_t value() const { return value_; }

  RandomStream stream() const;

 private:
  std::uint64_t value_;
};

// Random source for one logical stream. Not thread-safe; give each thread its
// own stream derived from a Seed.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : engine_(mix64(key)) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1).
  double open_uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard exponential.
  double exponential() { return -std::log(open_uniform()); }

  double gamma(double shape) {
    std::gamma_distribution<double> dist(shape, 1.0);
    return dist(engine_);
  }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    if (x + y <= 0.0) return a >= b ? 1.0 : 0.0;
    return x / (x + y);
  }

  double normal() {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(engine_);
  }

  // Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline RandomStream Seed::stream() const { return RandomStream(value_); }

}  // namespace wicksell

#endif  // WICKSELL_RNG_HPP_

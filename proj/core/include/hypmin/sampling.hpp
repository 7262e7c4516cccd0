#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace hypmin {

/// Radical inverse of `index` in the given base.
inline double radical_inverse(std::uint64_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

/// Two-dimensional Halton points (bases 2 and 3) in [0,1)^2 with a random
/// Cranley-Patterson rotation drawn from the seed.
class HaltonSampler {
 public:
  explicit HaltonSampler(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    shift_ = {uniform(rng), uniform(rng)};
  }

  Eigen::Vector2d next() {
    ++index_;
    Eigen::Vector2d p(radical_inverse(index_, 2) + shift_.x(),
                      radical_inverse(index_, 3) + shift_.y());
    if (p.x() >= 1.0) p.x() -= 1.0;
    if (p.y() >= 1.0) p.y() -= 1.0;
    return p;
  }

 private:
  Eigen::Vector2d shift_;
  std::uint64_t index_ = 0;
};

}  // namespace hypmin

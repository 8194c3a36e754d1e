#include "entpca/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "entpca/errors.hpp"

namespace entpca {

double SeededRng::uniform() {
  // 53 random bits, shifted by half a step so 0 is never produced.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double SeededRng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::vector<double> SeededRng::gaussian_vector(std::size_t length) {
  std::vector<double> out(length);
  for (double& v : out) v = gaussian();
  return out;
}

std::uint64_t SeededRng::uniform_index(std::uint64_t bound) {
  if (bound == 0) throw ContractViolation("uniform_index needs a positive bound");
  // Largest multiple of bound representable; reject above it to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return draw % bound;
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t size,
                                                    std::uint64_t seed) {
  if (size > n) {
    throw ContractViolation("cannot sample " + std::to_string(size) + " items from " +
                            std::to_string(n));
  }
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  SeededRng rng(seed);
  for (std::size_t i = 0; i < size; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(size);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace entpca

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace entpca {

// Reproducible random source for experiments.
//
// Pinned algorithm: std::mt19937_64 seeded with the 64-bit seed; uniforms take
// the top 53 bits; normals use the Box-Muller transform, emitting cos then sin
// of each pair. The standard library's distributions are avoided because their
// output is implementation-defined.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0, 1).
  double uniform();
  double gaussian();
  std::vector<double> gaussian_vector(std::size_t length);
  // Uniform on [0, bound), bound >= 1, by rejection.
  std::uint64_t uniform_index(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// `size` distinct indices from [0, n), sorted ascending.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t size,
                                                    std::uint64_t seed);

}  // namespace entpca

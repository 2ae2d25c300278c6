// Copyright (C) 2026 Revision Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace revision {

// Deterministic PRNG (splitmix64 seeding + xoshiro256**). std::shuffle and
// the std distributions are implementation-defined, so everything that has
// to reproduce bit-exactly draws from this instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, bound), bias-free via rejection sampling. bound > 0.
  std::uint64_t uniform_int(std::uint64_t bound);

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform();

  // Standard normal via Box-Muller.
  double normal();

  // Normal(0, sigma) with resampling outside [-2 sigma, 2 sigma].
  double truncated_normal(double sigma);

  // Child generator with an independent stream, keyed by label.
  Rng fork(std::string_view label) const;

  template <typename T>
  void shuffle(std::vector<T>& v) {
    if (v.size() < 2) return;
    for (std::size_t i = v.size() - 1; i > 0; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i + 1));
      std::swap(v[i], v[j]);
    }
  }

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace revision

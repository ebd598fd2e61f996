#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "causkit/backend.hpp"
#include "causkit/process.hpp"

namespace causkit::testing {

/// Unconstrained random process; matr+ gets nonnegative entries, rel 0/1.
inline Process random_process(Backend b, std::vector<System> outs, std::vector<System> ins, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t n = 1;
  for (const auto& s : outs) n *= wire_extent(b, s.dim);
  for (const auto& s : ins) n *= wire_extent(b, s.dim);
  std::vector<Complex> data(n);
  for (auto& x : data) {
    if (b == Backend::Rel) x = u(rng) < 0.5 ? 1.0 : 0.0;
    else if (b == Backend::Cpm) x = Complex(u(rng) - 0.5, u(rng) - 0.5);
    else x = u(rng);
  }
  return Process(b, std::move(outs), std::move(ins), std::move(data));
}

/// Computational basis state |i> (|i><i| for cpm).
inline Process basis_state(Backend b, const System& s, std::size_t i) {
  std::vector<Complex> data(wire_extent(b, s.dim), Complex{});
  data[b == Backend::Cpm ? i * s.dim + i : i] = 1.0;
  return Process(b, {s}, {}, std::move(data));
}

inline std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace causkit::testing

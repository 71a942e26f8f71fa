#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "hbim/linalg.hpp"

namespace hbim {

using Rng = std::mt19937_64;

inline CMatrix random_complex(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      const double re = normal(rng);
      m(i, j) = cplx(re, normal(rng));
    }
  return m;
}

inline CVector random_vector(Rng& rng, Index n) { return random_complex(rng, n, 1).col(0); }

inline CMatrix random_hermitian(Rng& rng, Index n) {
  CMatrix a = random_complex(rng, n, n);
  return (a + a.adjoint()) * 0.5;
}

/// Uniform point of the probability simplex of dimension k-1.
inline std::vector<double> dirichlet_uniform(Rng& rng, std::size_t k) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(k);
  double total = 0.0;
  for (auto& x : w) total += (x = expo(rng));
  for (auto& x : w) x /= total;
  return w;
}

/// Random subset of {0..n-1} of the given size, sorted.
inline std::vector<std::size_t> random_subset(Rng& rng, std::size_t n, std::size_t size) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(size, n));
  std::sort(all.begin(), all.end());
  return all;
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

/// Random subspace of C^m of dimension k (generic position).
inline Subspace random_subspace(Rng& rng, Index m, Index k) {
  return span_columns(m, random_complex(rng, m, k));
}

}  // namespace hbim

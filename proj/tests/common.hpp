#pragma once

#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "hbim/hbim.hpp"

namespace hbim::testing {

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names{"Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8",
                                              "Klein4", "S3", "D4", "Q8", "Z2xZ4"};
  return names;
}

inline CMatrix unit(Index n, Index a, Index b) {
  CMatrix e = CMatrix::Zero(n, n);
  e(a, b) = 1.0;
  return e;
}

/// Same subspace at the default angle tolerance.
inline ::testing::AssertionResult same(const Subspace& a, const Subspace& b, double tol = kAngleTol) {
  const auto c = equal(a, b, tol);
  if (c.holds) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "dims " << c.dim_a << " vs " << c.dim_b << ", angle " << c.max_angle;
}

}  // namespace hbim::testing

// A short walk through the library on S3 and Z6: left ideals and their
// bimodules, harmonic operators, the abelian Fourier picture and the
// boundary algebra of a random walk.

#include <cstdio>
#include <vector>

#include "hbim/hbim.hpp"

using namespace hbim;

namespace {

std::size_t element_order(const FiniteGroup& g, std::size_t x) {
  std::size_t k = 1;
  for (std::size_t y = x; y != 0; y = g.mul(y, x)) ++k;
  return k;
}

std::size_t first_of_order(const FiniteGroup& g, std::size_t k) {
  for (std::size_t x = 0; x < g.order(); ++x)
    if (element_order(g, x) == k) return x;
  return 0;
}

void print_report(const Report& r) {
  std::printf("  %-14s %-24s pass=%d  angle=%.1e  dims:", r.theorem_id.c_str(), r.ideal_spec.c_str(), r.pass,
              r.max_principal_angle);
  for (const auto& [k, v] : r.dims) std::printf(" %s=%lld", k.c_str(), v);
  std::printf("\n");
}

}  // namespace

int main() {
  const FiniteGroup s3 = make_builtin("S3");
  const auto irreps = decompose_regular(s3, 7);
  std::printf("S3 has %zu irreps of dimensions", irreps.size());
  for (const auto& p : irreps) std::printf(" %zu", p.dim);
  std::printf("\n\n");

  std::printf("Left ideals J(E), one per choice of subspaces E_pi:\n");
  for (const auto& splits : exhaustive_splits(irreps)) {
    const LeftIdeal j = ideal_from_subspaces(s3, irreps, splits);
    print_report(verify_main_theorem(s3, j));
  }

  // A walk driven by a transposition and a 3-cycle generates S3, so the only
  // bounded harmonic functions are constants while the operator space is larger.
  std::printf("\nHarmonic functions and operators:\n");
  MeasureVec mu = MeasureVec::delta(s3.order(), first_of_order(s3, 2));
  mu.weights *= 0.5;
  mu.weights(static_cast<Index>(first_of_order(s3, 3))) = 0.5;
  const std::vector<MeasureVec> lambda{mu};
  const Subspace h = harmonic_functions(s3, lambda);
  const Subspace ht = harmonic_operators(s3, lambda);
  std::printf("  mu = %s  dim H(mu)=%lld  dim H~(mu)=%lld\n", describe_measure(lambda[0]).c_str(),
              static_cast<long long>(h.dim()), static_cast<long long>(ht.dim()));
  print_report(verify_joint_harmonic(s3, lambda, describe_lambda(lambda)));

  std::printf("\nZ6 through the Fourier transform:\n");
  const FiniteGroup z6 = cyclic_group(6);
  const DualGroup d = dual_group(z6);
  for (const std::vector<std::size_t>& subset : {std::vector<std::size_t>{}, {0}, {1, 5}, {0, 2, 4}}) {
    const DualIdeal ideal = dual_ideal_from_subset(d, subset);
    print_report(verify_theorem21(z6, d, ideal));
  }

  std::printf("\nBoundary algebra of the walk on S3:\n");
  const ConditionalExpectation e = poisson_projection(s3, lambda[0]);
  const BoundaryAlgebra a = boundary_algebra(s3, lambda[0], e, 7);
  std::printf("  dim=%lld  center=%lld  commutative=%s  choi min eig=%.1e\n",
              static_cast<long long>(a.basis.dim()), static_cast<long long>(a.center_dim),
              a.commutative ? "yes" : "no", choi_min_eigenvalue(e.superop));
  const CesaroCheck c = cesaro_validation(s3, lambda[0], e, 1024);
  std::printf("  Cesaro gap %.2e at N=1024, %.2e at N=2048\n", c.gap_first, c.gap_second);
  print_report(verify_cross_iso(s3, lambda[0], describe_measure(lambda[0]), {}));
  return 0;
}

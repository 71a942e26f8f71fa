#include <numbers>

#include "common.hpp"

using namespace hbim;

namespace {

std::vector<Irrep> irreps_of(const std::string& name, std::uint64_t seed = 1) {
  return decompose_regular(make_builtin(name), seed);
}

}  // namespace

TEST(Decompose, TrivialGroup) {
  const auto irreps = irreps_of("trivial");
  ASSERT_EQ(irreps.size(), 1u);
  EXPECT_EQ(irreps[0].dim, 1u);
  EXPECT_TRUE(irreps[0].is_trivial());
}

TEST(Decompose, CyclicCharactersInOrder) {
  for (std::size_t n : {2, 3, 5, 8}) {
    const auto irreps = decompose_regular(cyclic_group(n), 5);
    ASSERT_EQ(irreps.size(), n);
    for (std::size_t k = 0; k < n; ++k) {
      ASSERT_EQ(irreps[k].dim, 1u);
      for (std::size_t s = 0; s < n; ++s) {
        const cplx expected = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k * s) / static_cast<double>(n));
        EXPECT_LT(std::abs(irreps[k].matrices[s](0, 0) - expected), 1e-10) << "n=" << n << " k=" << k;
      }
    }
  }
}

TEST(Decompose, SymmetricThreeDimensions) {
  const auto irreps = irreps_of("S3");
  ASSERT_EQ(irreps.size(), 3u);
  EXPECT_EQ(irreps[0].dim, 1u);
  EXPECT_EQ(irreps[1].dim, 1u);
  EXPECT_EQ(irreps[2].dim, 2u);
  EXPECT_TRUE(irreps[0].is_trivial());
  Rng rng(2);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(equivalent(irreps[a], irreps[b], rng), a == b);
}

TEST(Decompose, CorpusSumOfSquares) {
  for (const auto& name : hbim::testing::corpus_names()) {
    const FiniteGroup g = make_builtin(name);
    const auto irreps = decompose_regular(g, 3);
    std::size_t total = 0;
    for (const auto& p : irreps) total += p.dim * p.dim;
    EXPECT_EQ(total, g.order()) << name;
    EXPECT_EQ(irreps.size(), g.conjugacy_classes().size()) << name;
  }
}

TEST(Decompose, IrrepAxioms) {
  for (const std::string name : {"S3", "D4", "Q8", "S4"}) {
    const FiniteGroup g = make_builtin(name);
    for (const auto& p : decompose_regular(g, 7)) {
      const auto d = static_cast<Index>(p.dim);
      EXPECT_LT(max_abs(p.matrices[0] - CMatrix::Identity(d, d)), 1e-10);
      for (std::size_t s = 0; s < g.order(); ++s) {
        EXPECT_LT(max_abs(p.matrices[s].adjoint() - p.matrices[g.inv(s)]), 1e-10);
        for (std::size_t t = 0; t < g.order(); ++t)
          EXPECT_LT(max_abs(p.matrices[s] * p.matrices[t] - p.matrices[g.mul(s, t)]), 1e-10);
      }
      EXPECT_EQ(commutant_dimension(p.matrices), 1) << name;
    }
  }
}

TEST(Decompose, DeterministicPerSeedAndClassesSeedIndependent) {
  const FiniteGroup g = make_builtin("D4");
  const auto a = decompose_regular(g, 42), b = decompose_regular(g, 42), c = decompose_regular(g, 43);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t s = 0; s < g.order(); ++s) EXPECT_EQ(max_abs(a[i].matrices[s] - b[i].matrices[s]), 0.0);
  ASSERT_EQ(a.size(), c.size());
  Rng rng(1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].dim, c[i].dim);
    EXPECT_TRUE(equivalent(a[i], c[i], rng));
    EXPECT_LT(max_abs(a[i].character() - c[i].character()), 1e-9);
  }
}

TEST(Coefficients, TrivialIrrepIsConstantOne) {
  const auto irreps = irreps_of("S3");
  const CVector f = coefficient_function(irreps[0], 0, 0);
  EXPECT_LT(max_abs(f - CVector::Ones(6)), 1e-12);
}

TEST(Coefficients, IdentityGivesKronecker) {
  const auto irreps = irreps_of("D4");
  for (const auto& p : irreps)
    for (std::size_t i = 0; i < p.dim; ++i)
      for (std::size_t j = 0; j < p.dim; ++j)
        EXPECT_LT(std::abs(matrix_coefficient(p, i, j, GroupElement{0}) - (i == j ? 1.0 : 0.0)), 1e-10);
}

TEST(Coefficients, SquareSumsOnTwoDimensionalIrrepOfS3) {
  const auto irreps = irreps_of("S3");
  const Irrep& p = irreps[2];
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(coefficient_function(p, i, j).squaredNorm(), 3.0, 1e-10);
}

TEST(Coefficients, IndexRangeChecked) {
  const auto irreps = irreps_of("S3");
  EXPECT_THROW(matrix_coefficient(irreps[0], 1, 0, GroupElement{0}), DimensionError);
  EXPECT_THROW(matrix_coefficient(irreps[2], 0, 0, GroupElement{6}), DimensionError);
}

TEST(Coefficients, PeterWeylOrthonormality) {
  for (const std::string name : {"S3", "Q8", "Z2xZ4"}) {
    const FiniteGroup g = make_builtin(name);
    const auto irreps = decompose_regular(g, 9);
    CMatrix basis(static_cast<Index>(g.order()), static_cast<Index>(g.order()));
    Index col = 0;
    for (const auto& p : irreps)
      for (std::size_t i = 0; i < p.dim; ++i)
        for (std::size_t j = 0; j < p.dim; ++j)
          basis.col(col++) = std::sqrt(static_cast<double>(p.dim)) * coefficient_function(p, i, j);
    const CMatrix gram = basis.adjoint() * basis / static_cast<double>(g.order());
    EXPECT_LT(max_abs(gram - CMatrix::Identity(col, col)), 1e-10) << name;
  }
}

TEST(Schur, TrivialWithItselfIsExact) {
  const auto irreps = irreps_of("Z3");
  EXPECT_EQ(schur_check(irreps[0], irreps[0]), 0.0);
}

TEST(Schur, InequivalentCharactersOfZ4) {
  const auto irreps = irreps_of("Z4");
  EXPECT_LT(schur_check(irreps[1], irreps[3]), 1e-12);
}

TEST(Schur, AllPairsOfS3) {
  const auto irreps = irreps_of("S3");
  for (const auto& a : irreps)
    for (const auto& b : irreps) EXPECT_LT(schur_check(a, b), 1e-10);
}

TEST(Isotypic, TrivialGroup) {
  const FiniteGroup g = make_builtin("trivial");
  const auto irreps = decompose_regular(g, 1);
  EXPECT_LT(max_abs(isotypic_projection(g, irreps[0]).projection - CMatrix::Identity(1, 1)), 1e-14);
}

TEST(Isotypic, TrivialIrrepProjectsOntoConstants) {
  const FiniteGroup g = make_builtin("D4");
  const auto irreps = decompose_regular(g, 1);
  EXPECT_LT(max_abs(isotypic_projection(g, irreps[0]).projection - CMatrix::Constant(8, 8, 1.0 / 8.0)), 1e-14);
}

TEST(Isotypic, ProjectionProperties) {
  for (const auto& name : hbim::testing::corpus_names()) {
    const FiniteGroup g = make_builtin(name);
    const auto n = static_cast<Index>(g.order());
    const auto irreps = decompose_regular(g, 2);
    CMatrix total = CMatrix::Zero(n, n);
    std::vector<CMatrix> ps;
    for (const auto& p : irreps) {
      const IsotypicData d = isotypic_projection(g, p);
      ps.push_back(d.projection);
      total += d.projection;
      EXPECT_LT(max_abs(d.projection * d.projection - d.projection), 1e-10);
      EXPECT_LT(max_abs(d.projection.adjoint() - d.projection), 1e-12);
      EXPECT_NEAR(d.projection.trace().real(), static_cast<double>(d.block_dim), 1e-10);
      for (std::size_t s = 0; s < g.order(); ++s) {
        EXPECT_LT(max_abs(d.projection * right_regular(g, s) - right_regular(g, s) * d.projection), 1e-12);
        EXPECT_LT(max_abs(d.projection * left_regular(g, s) - left_regular(g, s) * d.projection), 1e-12);
      }
      // Range is span{pi_ij}.
      std::vector<CVector> coeffs;
      for (std::size_t i = 0; i < p.dim; ++i)
        for (std::size_t j = 0; j < p.dim; ++j) coeffs.push_back(coefficient_function(p, i, j));
      EXPECT_TRUE(hbim::testing::same(range(d.projection), span(n, coeffs))) << name;
    }
    EXPECT_LT(max_abs(total - CMatrix::Identity(n, n)), 1e-10) << name;
    for (std::size_t a = 0; a < ps.size(); ++a)
      for (std::size_t b = 0; b < ps.size(); ++b)
        if (a != b) {
          EXPECT_LT(max_abs(ps[a] * ps[b]), 1e-10);
        }
  }
}

TEST(Blocks, IdentityBlocks) {
  const FiniteGroup g = make_builtin("S3");
  const auto irreps = decompose_regular(g, 1);
  for (std::size_t a = 0; a < irreps.size(); ++a)
    for (std::size_t b = 0; b < irreps.size(); ++b) {
      const CMatrix blk = block(g, CMatrix::Identity(6, 6), irreps[a], irreps[b]);
      const CMatrix expected = a == b ? isotypic_projection(g, irreps[a]).projection : CMatrix::Zero(6, 6);
      EXPECT_LT(max_abs(blk - expected), 1e-12);
    }
}

TEST(Blocks, LeftRegularHasNoOffIsotypicBlocks) {
  const FiniteGroup g = make_builtin("D4");
  const auto irreps = decompose_regular(g, 1);
  for (std::size_t s = 0; s < 8; ++s)
    for (std::size_t a = 0; a < irreps.size(); ++a)
      for (std::size_t b = 0; b < irreps.size(); ++b)
        if (a != b) {
          EXPECT_LT(max_abs(block(g, left_regular(g, s), irreps[a], irreps[b])), 1e-12);
        }
}

TEST(Blocks, ReconstructRandomOperator) {
  const FiniteGroup g = make_builtin("Z4");
  const auto irreps = decompose_regular(g, 1);
  Rng rng(5);
  const CMatrix t = random_complex(rng, 4, 4);
  CMatrix total = CMatrix::Zero(4, 4);
  for (const auto& a : irreps)
    for (const auto& b : irreps) total += block(g, t, a, b);
  EXPECT_LT(max_abs(total - t), 1e-12);
}

TEST(Irreps, WithSubspacePutsEFirst) {
  const auto irreps = irreps_of("S3");
  const Irrep& p = irreps[2];
  CMatrix e(2, 1);
  e << 1.0, cplx(0.0, 1.0);
  const Irrep q = p.with_subspace(e);
  EXPECT_EQ(q.basis_split, 1u);
  // The first basis vector of q, written in p's basis, is proportional to e.
  Rng rng(1);
  EXPECT_TRUE(equivalent(p, q, rng));
  EXPECT_LT(max_abs(q.character() - p.character()), 1e-12);
}

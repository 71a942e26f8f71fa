#include "common.hpp"

using namespace hbim;

TEST(Group, LoadTrivialTable) {
  const FiniteGroup g = load_group(R"({"order": 1, "labels": ["e"], "table": [[0]]})");
  EXPECT_EQ(g.order(), 1u);
  EXPECT_TRUE(g.is_abelian());
}

TEST(Group, LoadCyclicTwo) {
  const FiniteGroup g = load_group(R"({"order": 2, "labels": ["e","g"], "table": [[0,1],[1,0]]})");
  EXPECT_EQ(g.order(), 2u);
  EXPECT_EQ(g.mul(1, 1), 0u);
  EXPECT_EQ(g.inv(1), 1u);
}

TEST(Group, IdentityRowViolationIsAnAxiomError) {
  EXPECT_THROW(load_group(R"({"order": 2, "table": [[0,0],[1,0]]})"), AxiomError);
}

TEST(Group, AssociativityViolationNamesATriple) {
  // Latin square with identity 0 that is not associative (order 5).
  const std::string t =
      R"({"table": [[0,1,2,3,4],[1,0,3,4,2],[2,4,0,1,3],[3,2,4,0,1],[4,3,1,2,0]]})";
  try {
    load_group(t);
    FAIL() << "expected AxiomError";
  } catch (const AxiomError& e) {
    EXPECT_NE(std::string(e.what()).find("associativity fails at ("), std::string::npos);
  }
}

TEST(Group, MalformedFilesAreParseErrors) {
  EXPECT_THROW(load_group("{not json"), ParseError);
  EXPECT_THROW(load_group(R"({"order": 2})"), ParseError);
  EXPECT_THROW(load_group(R"({"order": 3, "table": [[0,1],[1,0]]})"), ParseError);
  EXPECT_THROW(load_group(R"({"table": [[0,5],[1,0]]})"), AxiomError);
}

TEST(Group, BuiltinOrders) {
  EXPECT_EQ(make_builtin("Z1").order(), 1u);
  EXPECT_EQ(make_builtin("trivial").order(), 1u);
  EXPECT_EQ(make_builtin("Z7").order(), 7u);
  EXPECT_EQ(make_builtin("D5").order(), 10u);
  EXPECT_EQ(make_builtin("S3").order(), 6u);
  EXPECT_EQ(make_builtin("S4").order(), 24u);
  EXPECT_EQ(make_builtin("Q8").order(), 8u);
  EXPECT_EQ(make_builtin("Klein4").order(), 4u);
  EXPECT_EQ(make_builtin("Z2xZ4").order(), 8u);
  EXPECT_EQ(make_builtin("S5", 120).order(), 120u);
}

TEST(Group, CyclicOneIsTrivial) {
  const FiniteGroup g = cyclic_group(1);
  EXPECT_EQ(g.order(), 1u);
  EXPECT_EQ(g.exponent(), 1u);
}

TEST(Group, SymmetricThreeIsNonAbelian) {
  const FiniteGroup g = symmetric_group(3);
  EXPECT_EQ(g.order(), 6u);
  EXPECT_FALSE(g.is_abelian());
  bool differs = false;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) differs = differs || g.mul(i, j) != g.mul(j, i);
  EXPECT_TRUE(differs);
  EXPECT_EQ(g.conjugacy_classes().size(), 3u);
}

TEST(Group, ProductOfTwoCyclicTwosIsKleinFour) {
  const FiniteGroup g = direct_product(cyclic_group(2), cyclic_group(2));
  EXPECT_EQ(g.order(), 4u);
  EXPECT_TRUE(g.is_abelian());
  EXPECT_EQ(g.exponent(), 2u);
}

TEST(Group, ConjugacyClassCounts) {
  EXPECT_EQ(make_builtin("D4").conjugacy_classes().size(), 5u);
  EXPECT_EQ(make_builtin("Q8").conjugacy_classes().size(), 5u);
  EXPECT_EQ(make_builtin("S4").conjugacy_classes().size(), 5u);
  EXPECT_EQ(make_builtin("Z6").conjugacy_classes().size(), 6u);
}

TEST(Group, QuaternionElementOrders) {
  const FiniteGroup q = quaternion_group();
  EXPECT_FALSE(q.is_abelian());
  EXPECT_EQ(q.element_order(0), 1u);
  EXPECT_EQ(q.element_order(1), 2u);
  for (std::size_t x = 2; x < 8; ++x) EXPECT_EQ(q.element_order(x), 4u);
}

TEST(Group, SizeCap) {
  EXPECT_THROW(make_builtin("Z65"), SizeLimitError);
  EXPECT_THROW(make_builtin("S5"), SizeLimitError);
  EXPECT_THROW(make_builtin("S6", 1000), SizeLimitError);
  EXPECT_THROW(make_builtin("Z4xZ32"), SizeLimitError);
  EXPECT_NO_THROW(make_builtin("Z64"));
}

TEST(Group, UnknownNamesAreConfigErrors) {
  EXPECT_THROW(make_builtin("G7"), ConfigError);
  EXPECT_THROW(make_builtin("Z"), ConfigError);
  EXPECT_THROW(make_builtin("Z0"), ConfigError);
}

TEST(Group, ElementRangeChecked) {
  EXPECT_THROW(make_builtin("Z3").element(3), DimensionError);
}

TEST(Regular, LeftIdentityAndSwap) {
  const FiniteGroup z2 = cyclic_group(2);
  EXPECT_EQ(max_abs(left_regular(z2, 0) - CMatrix::Identity(2, 2)), 0.0);
  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  EXPECT_EQ(max_abs(left_regular(z2, 1) - swap), 0.0);
}

TEST(Regular, LeftActionFormula) {
  // (lambda_s f)(t) = f(s^-1 t)
  const FiniteGroup g = symmetric_group(3);
  Rng rng(3);
  const CVector f = random_vector(rng, 6);
  for (std::size_t s = 0; s < 6; ++s) {
    const CVector lf = left_regular(g, s) * f;
    for (std::size_t t = 0; t < 6; ++t) EXPECT_EQ(lf(static_cast<Index>(t)), f(static_cast<Index>(g.mul(g.inv(s), t))));
  }
}

TEST(Regular, RightActionFormula) {
  // (rho_r f)(s) = f(sr)
  const FiniteGroup g = make_builtin("D4");
  Rng rng(4);
  const CVector f = random_vector(rng, 8);
  for (std::size_t r = 0; r < 8; ++r) {
    const CVector rf = right_regular(g, r) * f;
    for (std::size_t s = 0; s < 8; ++s) EXPECT_EQ(rf(static_cast<Index>(s)), f(static_cast<Index>(g.mul(s, r))));
  }
}

TEST(Regular, HomomorphismUnitarityCommutation) {
  for (const auto& name : hbim::testing::corpus_names()) {
    const FiniteGroup g = make_builtin(name);
    for (std::size_t s = 0; s < g.order(); ++s) {
      EXPECT_EQ(max_abs(left_regular(g, s).adjoint() - left_regular(g, g.inv(s))), 0.0);
      EXPECT_EQ(max_abs(right_regular(g, s).adjoint() - right_regular(g, g.inv(s))), 0.0);
      for (std::size_t t = 0; t < g.order(); ++t) {
        EXPECT_EQ(max_abs(left_regular(g, s) * left_regular(g, t) - left_regular(g, g.mul(s, t))), 0.0) << name;
        EXPECT_EQ(max_abs(right_regular(g, s) * right_regular(g, t) - right_regular(g, g.mul(s, t))), 0.0) << name;
        EXPECT_LT(max_abs(left_regular(g, s) * right_regular(g, t) - right_regular(g, t) * left_regular(g, s)), 1e-14);
      }
    }
  }
}

TEST(Regular, CyclicRightIsInverseLeft) {
  const FiniteGroup g = cyclic_group(6);
  for (std::size_t r = 0; r < 6; ++r) EXPECT_EQ(max_abs(right_regular(g, r) - left_regular(g, g.inv(r))), 0.0);
}

TEST(Group, BuiltinsRoundTripThroughFileFormat) {
  for (const auto& name : hbim::testing::corpus_names()) {
    const FiniteGroup g = make_builtin(name);
    const FiniteGroup h = load_group(group_to_json(g).dump());
    EXPECT_EQ(h.table(), g.table());
    EXPECT_EQ(h.labels(), g.labels());
  }
}

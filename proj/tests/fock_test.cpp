#include <gtest/gtest.h>

#include <cmath>

#include "qtele/fock.hpp"

using namespace qtele;

namespace {

Ket e(const ModeId& m, unsigned n, const Scalar& c = 1) {
  return Ket::basis(BasisKet::of({{m, n}}), c);
}

}  // namespace

TEST(BasisKet, DropsZerosAndSorts) {
  const BasisKet k = BasisKet::of({{"b", 2}, {"a", 0}, {"c", 1}});
  EXPECT_EQ(k.occupation("a"), 0u);
  EXPECT_EQ(k.total_photons(), 3u);
  EXPECT_EQ(k.str(), "|b:2,c:1>");
  EXPECT_EQ(k, BasisKet::of({{"c", 1}, {"b", 2}}));
}

TEST(BasisKet, SplitAndMerge) {
  const BasisKet k = BasisKet::of({{"a", 1}, {"b", 2}, {"c", 3}});
  const auto [in, rest] = k.split({"a", "c"});
  EXPECT_EQ(in, BasisKet::of({{"a", 1}, {"c", 3}}));
  EXPECT_EQ(rest, BasisKet::of({{"b", 2}}));
  EXPECT_EQ(in.merged(rest), k);
  const std::vector<ModeId> order{"c", "z", "a"};
  EXPECT_EQ(k.occupations(order), (std::vector<unsigned>{3, 0, 1}));
}

TEST(DividedPower, LadderCoefficients) {
  EXPECT_EQ(apply_creation(e("a", 2), "a"), e("a", 3, 3));
  EXPECT_EQ(apply_annihilation(e("a", 2), "a"), e("a", 1));
  EXPECT_TRUE(apply_annihilation(Ket::vacuum(), "a").is_zero());
  EXPECT_EQ(apply_number(e("a", 4), "a"), e("a", 4, 4));
}

TEST(DividedPower, MetricMatchesRepeatedCreation) {
  // (a^dag)^n |0> has squared norm n!; it equals n! e_n, so <e_n, e_n> = 1/n!.
  for (unsigned n = 0; n <= 6; ++n) {
    Ket k = Ket::vacuum();
    for (unsigned i = 0; i < n; ++i) k = apply_creation(k, "a");
    EXPECT_EQ(squared_norm(k), factorial(n));
    EXPECT_EQ(k, e("a", n, factorial(n)));
    EXPECT_EQ(squared_norm(e("a", n)), factorial(n).inverse());
  }
  EXPECT_EQ(squared_norm(e("a", 2)), Scalar::fraction(1, 2));
}

TEST(DividedPower, CommutatorIsIdentity) {
  Ket psi = e("a", 3, Scalar::fraction(2, 7));
  psi.add(BasisKet::of({{"a", 1}, {"b", 2}}), Scalar::quadratic(1, -1));
  psi.add(BasisKet::vacuum(), 5);
  const Ket lhs = apply_annihilation(apply_creation(psi, "a"), "a") -
                  apply_creation(apply_annihilation(psi, "a"), "a");
  EXPECT_EQ(lhs, psi);
}

TEST(DividedPower, AnnihilationIsAdjointOfCreation) {
  Ket x = e("a", 2, 3);
  x.add(BasisKet::of({{"a", 1}, {"b", 1}}), -1);
  Ket y = e("a", 3, Scalar::fraction(1, 2));
  y.add(BasisKet::of({{"a", 2}, {"b", 1}}), 4);
  EXPECT_EQ(inner_product(apply_creation(x, "a"), y), inner_product(x, apply_annihilation(y, "a")));
}

TEST(DividedPower, OrthogonalBasis) {
  EXPECT_EQ(inner_product(e("a", 1), e("a", 2)), Scalar(0));
  EXPECT_EQ(inner_product(e("a", 1), e("b", 1)), Scalar(0));
}

TEST(DividedPower, ToNormalized) {
  const Ket n = to_normalized(e("a", 2, 2));  // 2 e_2 = sqrt2 |2>
  ASSERT_EQ(n.size(), 1u);
  EXPECT_NEAR(n.coefficient(BasisKet::of({{"a", 2}})).to_double(), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(n.convention(), Convention::normalized);
}

TEST(NormalizedConvention, CreationNeedsFloating) {
  const Ket exact = Ket::basis(BasisKet::vacuum(), 1, Convention::normalized);
  EXPECT_THROW(apply_creation(exact, "a"), FockError);
  const Ket f = Ket::basis(BasisKet::of({{"a", 1}}), Scalar::floating(1.0), Convention::normalized);
  EXPECT_NEAR(apply_creation(f, "a").coefficient(BasisKet::of({{"a", 2}})).to_double(),
              std::sqrt(2.0), 1e-15);
}

TEST(Ket, PhotonCapIsEnforced) {
  Ket k = e("a", 2);
  k.set_photon_cap(2);
  EXPECT_THROW(apply_creation(k, "a"), std::logic_error);
}

TEST(Ket, ConventionMismatchThrows) {
  Ket a = Ket::vacuum();
  const Ket b = Ket::basis(BasisKet::vacuum(), Scalar::floating(1.0), Convention::normalized);
  EXPECT_THROW(a += b, FockError);
}

TEST(Density, OuterTraceIsSquaredNorm) {
  Ket k = e("a", 2, 3);
  k.add(BasisKet::of({{"b", 1}}), Scalar::inv_sqrt2());
  EXPECT_EQ(dm_trace(outer(k)), squared_norm(k));
}

TEST(Density, ExpectationAndPhysicalEntries) {
  const DensityOperator rho = outer(e("a", 2));
  EXPECT_EQ(rho.expectation(e("a", 2)), Scalar::fraction(1, 4));  // |<e2,e2>|^2
  // e_2 = |2>/sqrt2, so |e_2><e_2| has physical entry 1/2 on |2><2|.
  const BasisKet two = BasisKet::of({{"a", 2}});
  EXPECT_EQ(rho.physical_entry(two, two), Scalar::fraction(1, 2));
  DensityOperator r({"a"});
  r.add_physical(two, two, 1);
  EXPECT_EQ(r.entry(two, two), Scalar(2));
  EXPECT_TRUE(rho.is_hermitian());
  EXPECT_TRUE(rho.has_nonnegative_diagonal());
}

TEST(Density, PartialTraceOfProductState) {
  Ket left = e("a", 1);
  left.add(BasisKet::of({{"a", 2}}), 1);
  Ket state;
  for (const auto& [k, c] : left.terms()) state.add(k.merged(BasisKet::of({{"b", 2}})), c);
  const DensityOperator full = outer(state, ModeSet{"a", "b"});
  const DensityOperator reduced = partial_trace(full, {"b"});
  // Tracing b contributes <e_2, e_2> = 1/2.
  EXPECT_EQ(reduced, Scalar::fraction(1, 2) * outer(left, ModeSet{"a"}));
  EXPECT_EQ(dm_trace(reduced), dm_trace(full));
  EXPECT_THROW(partial_trace(full, {"zz"}), FockError);
}

TEST(Density, ArithmeticAndEquality) {
  DensityOperator a = outer(e("a", 1));
  const DensityOperator b = a;
  a += Scalar(-1) * b;
  EXPECT_TRUE(a.is_zero());
  EXPECT_EQ(Scalar(2) * b, b + b);
}

#include "ifsends/exact_field.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ifsends;
using ifsends::testing::random_scalar;

namespace {

QuadScalar q(long n, long d = 1) { return QuadScalar::rational(n, d); }
QuadScalar surd(long pn, long pd, long qn, long qd, std::uint32_t r) {
  return QuadScalar(mpq_class(pn, pd), mpq_class(qn, qd), r);
}

long double as_long_double(const QuadScalar& x) {
  return x.rational_part().get_d() + x.radical_part().get_d() * std::sqrt(static_cast<long double>(x.radicand()));
}

}  // namespace

TEST(QuadScalar, RationalArithmetic) {
  EXPECT_EQ(q(1, 2) + q(1, 3), q(5, 6));
  EXPECT_EQ(q(1, 2) * q(2, 3), q(1, 3));
  EXPECT_EQ(q(1, 2) / q(1, 4), q(2));
  EXPECT_EQ(q(2, 4), q(1, 2));
  EXPECT_EQ(-q(3, 7), q(-3, 7));
}

TEST(QuadScalar, SquareRootSquaresToRadicand) {
  const QuadScalar root2 = surd(0, 1, 1, 1, 2);
  EXPECT_EQ(root2 * root2, q(2));
  EXPECT_FALSE(root2.is_rational());
  EXPECT_TRUE((root2 * root2).is_rational());
}

TEST(QuadScalar, DivisionUsesConjugate) {
  // 1 / (1 + sqrt 2) = sqrt 2 - 1
  const QuadScalar x = surd(1, 1, 1, 1, 2);
  EXPECT_EQ(q(1) / x, surd(-1, 1, 1, 1, 2));
}

TEST(QuadScalar, DivisionByZeroThrows) {
  EXPECT_THROW(q(1) / q(0), ArithmeticError);
  EXPECT_THROW(QuadScalar::rational(1, 0), ArithmeticError);
}

TEST(QuadScalar, MixedFieldsThrow) {
  EXPECT_THROW(surd(0, 1, 1, 1, 2) + surd(0, 1, 1, 1, 3), ArithmeticError);
  // A rational operand adopts the other field.
  EXPECT_NO_THROW(surd(0, 1, 1, 1, 2) + q(1));
}

TEST(QuadScalar, TrivialRadicandsCollapseToRationals) {
  EXPECT_EQ(surd(1, 2, 3, 1, 1), q(7, 2));
  EXPECT_EQ(surd(1, 2, 3, 1, 0), q(1, 2));
  EXPECT_TRUE(surd(1, 2, 3, 1, 1).is_rational());
}

TEST(QuadScalar, EqualityIsStructuralAndHashConsistent) {
  const QuadScalar a = surd(1, 3, -2, 5, 3);
  const QuadScalar b = surd(2, 6, -4, 10, 3);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a, a.conjugate());
}

TEST(QuadScalar, Formatting) {
  EXPECT_EQ(q(3).to_string(), "3/1");
  EXPECT_EQ(surd(1, 2, -1, 4, 3).to_string(), "1/2-1/4*sqrt(3)");
  EXPECT_EQ(surd(0, 1, 1, 1, 2).to_dsl(), "0/1+1/1r");
}

TEST(QuadScalar, ToDoubleAvoidsCancellation) {
  // (1 + sqrt 2)^-20 is tiny; p + q sqrt 2 with huge p, q cancels in doubles.
  QuadScalar x = surd(-1, 1, 1, 1, 2);  // sqrt 2 - 1
  QuadScalar p = q(1);
  for (int i = 0; i < 20; ++i) p *= x;
  const double expected = std::pow(std::sqrt(2.0) - 1.0, 20);
  EXPECT_NEAR(p.to_double() / expected, 1.0, 1e-12);
}

TEST(QuadScalarProperty, FieldAxiomsOnRandomElements) {
  std::mt19937 rng(17);
  for (std::uint32_t r : {0u, 2u, 3u, 5u}) {
    for (int i = 0; i < 300; ++i) {
      const QuadScalar a = random_scalar(rng, r);
      const QuadScalar b = random_scalar(rng, r);
      const QuadScalar c = random_scalar(rng, r);
      EXPECT_EQ((a + b) * c, a * c + b * c);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a - a, q(0));
      // Norm is multiplicative and conjugation is a ring map.
      EXPECT_EQ((a * b).norm(), a.norm() * b.norm());
      EXPECT_EQ((a * b).conjugate(), a.conjugate() * b.conjugate());
      if (!b.is_zero()) {
        EXPECT_EQ((a / b) * b, a);
        EXPECT_NE(b.norm(), 0);
      }
      EXPECT_NEAR(a.to_double(), static_cast<double>(as_long_double(a)), 1e-12);
    }
  }
}

TEST(SquareFree, SmallValues) {
  EXPECT_TRUE(is_square_free(0));
  EXPECT_TRUE(is_square_free(1));
  EXPECT_TRUE(is_square_free(2));
  EXPECT_TRUE(is_square_free(30));
  EXPECT_FALSE(is_square_free(4));
  EXPECT_FALSE(is_square_free(18));
  EXPECT_FALSE(is_square_free(49));
}

TEST(Matrix, ProductAndDeterminant) {
  Matrix a(2, {q(1), q(2), q(3), q(4)});
  Matrix b(2, {q(0), q(1), q(1), q(0)});
  EXPECT_EQ(a * b, Matrix(2, {q(2), q(1), q(4), q(3)}));
  EXPECT_EQ(a.det(), q(-2));
  EXPECT_EQ((a * b).det(), a.det() * b.det());
  EXPECT_EQ(Matrix::identity(3).det(), q(1));
}

TEST(Matrix, SolveRecoversVector) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix a(3);
    Vector x(3);
    for (std::size_t i = 0; i < 3; ++i) {
      x[i] = random_scalar(rng, 3);
      for (std::size_t j = 0; j < 3; ++j) a(i, j) = random_scalar(rng, 3);
    }
    if (a.det().is_zero()) continue;
    EXPECT_EQ(solve(a, a * x), x);
  }
}

TEST(Matrix, SolveSingularThrows) {
  Matrix a(2, {q(1), q(2), q(2), q(4)});
  EXPECT_THROW(solve(a, Vector{q(1), q(1)}), ArithmeticError);
}

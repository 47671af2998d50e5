#include <gtest/gtest.h>

#include <random>

#include "pmod2/arith.hpp"

using namespace pmod2;

TEST(Arith, DivisorsAscending) {
  EXPECT_EQ(divisors(1), (std::vector<std::int64_t>{1}));
  EXPECT_EQ(divisors(44), (std::vector<std::int64_t>{1, 2, 4, 11, 22, 44}));
}

TEST(Arith, FloorAndMod) {
  EXPECT_EQ(floor_div(-7, 2), -4);
  EXPECT_EQ(mod(-7, 24), 17);
  EXPECT_EQ(mod(-360, 24), 0);
}

TEST(Arith, Phi) {
  EXPECT_EQ(euler_phi(1), 1);
  EXPECT_EQ(euler_phi(12), 4);
  EXPECT_EQ(euler_phi(11), 10);
}

TEST(Arith, SquarefreeKernel) {
  EXPECT_EQ(squarefree_kernel(72), 2);
  EXPECT_EQ(squarefree_kernel(-7 * 9), -7);
  EXPECT_EQ(squarefree_kernel(1), 1);
}

TEST(Kronecker, SmallValues) {
  EXPECT_EQ(kronecker(1, 1), 1);
  EXPECT_EQ(kronecker(3, 5), -1);
  EXPECT_EQ(kronecker(4, 5), 1);
  EXPECT_EQ(kronecker(5, 10), 0);
  EXPECT_EQ(kronecker(-1, 7), -1);
  EXPECT_EQ(kronecker(2, 7), 1);
  EXPECT_EQ(kronecker(3, 8), -1);
}

// Euler's criterion for odd primes is an independent oracle.
TEST(Kronecker, AgreesWithEulerCriterion) {
  for (std::int64_t p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
    for (std::int64_t a = -40; a <= 40; ++a) {
      std::int64_t r = 1;
      const std::int64_t base = mod(a, p);
      for (std::int64_t i = 0; i < (p - 1) / 2; ++i) r = r * base % p;
      const int expected = base == 0 ? 0 : (r == 1 ? 1 : -1);
      EXPECT_EQ(kronecker(a, p), expected) << a << " / " << p;
    }
  }
}

TEST(Kronecker, SquareFactorDropsOut) {
  for (std::int64_t d : {5, 7, 11, 13, 29}) {
    for (std::int64_t s : {2, 3, -7, 10}) {
      EXPECT_EQ(kronecker(s * 9, d), kronecker(s, d));
    }
  }
}

TEST(KroneckerProperty, MultiplicativeInBothArguments) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> dist(-500, 500);
  std::uniform_int_distribution<std::int64_t> pos(1, 500);
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t a = dist(rng), b = dist(rng), n = pos(rng), m = pos(rng);
    ASSERT_EQ(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
    ASSERT_EQ(kronecker(a, n * m), kronecker(a, n) * kronecker(a, m));
  }
}

TEST(Rational, CeilFloorAndText) {
  EXPECT_EQ(ceil(Rational(-160, 11)), -14);
  EXPECT_EQ(floor(Rational(-160, 11)), -15);
  EXPECT_EQ(ceil(Rational(4)), 4);
  EXPECT_EQ(to_string(Rational(-160, 11)), "-160/11");
  EXPECT_EQ(to_string(Rational(6, 3)), "2");
}

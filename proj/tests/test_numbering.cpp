#include <gtest/gtest.h>

#include <set>

#include "zlw/numbering.hpp"

namespace {

using namespace zlw;

/// Integer-valued rate sequences written out again for the oracle.
std::uint64_t r_squares(std::uint64_t j) { return j * j; }
std::uint64_t r_linear(std::uint64_t j) { return j; }
std::uint64_t r_log_squared(std::uint64_t j) {
  std::uint64_t b = 0;
  while ((std::uint64_t{1} << b) < j + 1) ++b;
  return j * b * b;
}

/// N_R(k,l) by counting: pairs of smaller value, plus pairs of equal value
/// with smaller l, plus one.
std::uint64_t counting_rank(std::uint64_t (*r)(std::uint64_t), std::uint64_t k, std::uint64_t l) {
  const std::uint64_t v = k * r(l);
  std::uint64_t below = 0;
  for (std::uint64_t j = 1; r(j) < v; ++j) below += (v - 1) / r(j);
  for (std::uint64_t j = 1; j < l; ++j)
    if (v % r(j) == 0) ++below;
  return below + 1;
}

TEST(VR, SquaresAtFour) {
  const auto got = vr_members(RSequence::squares(), 4);
  const std::set<Pair> want{{1, 1}, {2, 1}, {3, 1}, {4, 1}, {1, 2}};
  EXPECT_EQ(std::set<Pair>(got.begin(), got.end()), want);
  EXPECT_EQ(got.size(), want.size());
}

TEST(VR, MinimalLayer) {
  EXPECT_EQ(vr_members(RSequence::squares(), 1), (std::vector<Pair>{{1, 1}}));
  EXPECT_THROW(vr_members(RSequence::squares(), 0), std::invalid_argument);
}

TEST(VR, CardinalityIsSumOfFloors) {
  for (const auto& R : {RSequence::squares(), RSequence::linear(), RSequence::log_squared()})
    for (std::uint64_t M : {1, 7, 50, 333}) {
      std::uint64_t floors = 0;
      for (std::uint64_t l = 1; l <= M; ++l) floors += M / boost::rational_cast<std::int64_t>(R.at(l));
      const auto size = vr_members(R, M).size();
      EXPECT_LE(size, floors);
      EXPECT_EQ(size, NRNumbering::count_members(R, M));
    }
}

TEST(NR, SquaresExamples) {
  const NRNumbering N(RSequence::squares(), 64);
  EXPECT_EQ(nr_rank(N, 1, 1), 1u);
  EXPECT_EQ(nr_rank(N, 1, 2), 5u);
  EXPECT_EQ(nr_rank(N, 2, 2), 10u);
  EXPECT_EQ(nr_unrank(N, 1), Pair(1, 1));
  EXPECT_EQ(nr_unrank(N, 5), Pair(1, 2));
  // Single-point instance of the convergent bound.
  EXPECT_LE(nr_rank(N, 1, 2), 2u * (1 * 4 + 1));
}

TEST(NR, InverseOnValuesUpToHundred) {
  const NRNumbering N(RSequence::squares(), 100);
  for (const auto& [k, l] : vr_members(RSequence::squares(), 100)) EXPECT_EQ(N.unrank(N.rank(k, l)), Pair(k, l));
}

TEST(NR, TiesGoToSmallerL) {
  const NRNumbering N(RSequence::linear(), 10);
  // (2,1) and (1,2) both have value 2.
  EXPECT_LT(N.rank(2, 1), N.rank(1, 2));
  EXPECT_EQ(N.rank(1, 2), N.rank(2, 1) + 1);
}

TEST(NR, HorizonErrors) {
  const NRNumbering N(RSequence::squares(), 20);
  EXPECT_THROW(N.rank(6, 2), HorizonExceeded);
  EXPECT_EQ(N.rank(5, 2), N.size());
  EXPECT_THROW(N.unrank(N.size() + 1), HorizonExceeded);
  EXPECT_THROW(N.unrank(0), HorizonExceeded);
  EXPECT_THROW(N.rank(0, 1), std::invalid_argument);
}

struct Case {
  RSequence R;
  std::uint64_t (*r)(std::uint64_t);
};

std::vector<Case> cases() {
  return {{RSequence::squares(), r_squares}, {RSequence::linear(), r_linear}, {RSequence::log_squared(), r_log_squared}};
}

TEST(NRProperty, BijectiveAndMatchesCountingOracleOnTenThousandRanks) {
  for (const auto& c : cases()) {
    const auto N = NRNumbering::with_ranks(c.R, 10000);
    ASSERT_GE(N.size(), 10000u);
    std::set<Pair> seen;
    for (std::uint64_t n = 1; n <= 10000; ++n) {
      const auto p = N.unrank(n);
      ASSERT_TRUE(seen.insert(p).second) << c.R.name << " repeats a pair at rank " << n;
      ASSERT_EQ(N.rank(p.first, p.second), n);
      ASSERT_EQ(counting_rank(c.r, p.first, p.second), n) << c.R.name << " (" << p.first << "," << p.second << ")";
    }
  }
}

TEST(NRProperty, LayerProperty) {
  for (const auto& c : cases()) {
    const NRNumbering N(c.R, 1000);
    // Ranks 1..|V(M)| are exactly V(M), so every new pair of V(M+1) ranks above them.
    std::uint64_t n = 0;
    for (std::uint64_t M = 1; M <= 1000; ++M) {
      const auto layer = NRNumbering::count_members(c.R, M);
      for (; n < layer; ++n) {
        const auto p = N.unrank(n + 1);
        ASSERT_LE(N.value(p), Rational(static_cast<std::int64_t>(M))) << c.R.name << " rank " << n + 1;
      }
      if (n < N.size()) ASSERT_GT(N.value(N.unrank(n + 1)), Rational(static_cast<std::int64_t>(M)));
    }
  }
}

TEST(NRProperty, NonIntegerRatesUseExactComparisons) {
  // R_l = (2l+1)/3 has many exact ties among k*R_l.
  RSequence R{"(2l+1)/3", [](std::uint64_t l) { return Rational(static_cast<std::int64_t>(2 * l + 1), 3); },
              RSequence::Kind::Divergent, Rational(0), [](std::uint64_t) { return Rational(1000); }};
  const NRNumbering N(R, 60);
  for (std::uint64_t n = 1; n <= N.size(); ++n) {
    const auto [k, l] = N.unrank(n);
    // Brute-force rank with cross-multiplied integers: i(2j+1) vs k(2l+1).
    std::uint64_t rank = 1;
    const std::uint64_t v = k * (2 * l + 1);
    for (std::uint64_t j = 1; 2 * j + 1 <= 3 * 60; ++j)
      for (std::uint64_t i = 1; i * (2 * j + 1) <= v; ++i)
        if (i * (2 * j + 1) < v || j < l) ++rank;
    ASSERT_EQ(rank, n) << k << "," << l;
  }
}

TEST(Bounds, SquaresConvergentBound) {
  const NRNumbering N(RSequence::squares(), 1000);
  const auto rep = check_bounds(N);
  EXPECT_EQ(rep.pairs_checked, N.size());
  EXPECT_EQ(rep.pairs_checked, 1601u);
  EXPECT_LE(rep.max_ratio, Rational(2));
  EXPECT_EQ(rep.max_ratio, Rational(1443, 901));
}

TEST(Bounds, LinearDivergentBound) {
  const NRNumbering N(RSequence::linear(), 1000);
  const auto rep = check_bounds(N);
  EXPECT_EQ(rep.bound, "(kR_l+1)F(kR_l+1)");
  EXPECT_GT(rep.max_ratio, Rational(2));  // no constant bound in the divergent case
}

TEST(Bounds, LogSquaredConvergentBound) {
  const auto rep = check_bounds(NRNumbering(RSequence::log_squared(), 2000));
  EXPECT_LE(rep.max_ratio, Rational(2));
}

TEST(Bounds, UnderstatedConstantIsCaught) {
  auto R = RSequence::squares();
  R.c = Rational(1);
  try {
    check_bounds(NRNumbering(R, 1000));
    FAIL() << "expected BoundViolated";
  } catch (const BoundViolated& e) {
    EXPECT_GT(NRNumbering(RSequence::squares(), 1000).rank(e.pair.first, e.pair.second), 1u);
  }
}

TEST(Sequence, DeclaredKindsCertify) {
  for (const auto& R : {RSequence::squares(), RSequence::linear(), RSequence::log_squared()}) {
    const auto chk = check_sequence(R, 100000);
    EXPECT_TRUE(chk.ok) << R.name << ": " << chk.detail;
    EXPECT_EQ(chk.checked, 100000u);
  }
}

TEST(Sequence, FalseCertificatesFail) {
  auto tight = RSequence::squares();
  tight.c = Rational(8, 5);  // pi^2/6 > 1.6
  const auto chk = check_sequence(tight, 100000);
  EXPECT_FALSE(chk.ok);
  ASSERT_TRUE(chk.failed_at.has_value());
  EXPECT_GT(*chk.failed_at, 10u);

  RSequence wobbly{"wobbly", [](std::uint64_t l) { return Rational(static_cast<std::int64_t>(l % 2 ? l * l : 1)); },
                   RSequence::Kind::Convergent, Rational(100), {}};
  EXPECT_FALSE(check_sequence(wobbly, 10).ok);

  auto harmonic_as_convergent = RSequence::linear();
  harmonic_as_convergent.kind = RSequence::Kind::Convergent;
  harmonic_as_convergent.c = Rational(5);
  EXPECT_FALSE(check_sequence(harmonic_as_convergent, 100000).ok);
}

TEST(Sequence, ByName) {
  EXPECT_EQ(RSequence::by_name("squares").name, "l^2");
  EXPECT_EQ(RSequence::by_name("l").kind, RSequence::Kind::Divergent);
  EXPECT_THROW(RSequence::by_name("cubes"), std::invalid_argument);
}

}  // namespace

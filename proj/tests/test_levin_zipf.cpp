#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <sstream>

#include "zlw/enumerate.hpp"
#include "zlw/levin.hpp"
#include "zlw/stdlib.hpp"
#include "zlw/zipf.hpp"

namespace {

using namespace zlw;

RankedCorpus ranked_from_masses(const MassTable& m) {
  std::map<std::uint64_t, std::uint64_t> c;
  for (const auto& [x, e] : m.entries) c[x] = e.numerator;
  return rank_frequency(corpus_from_counts(c));
}

/// Tokens t001, t002, ... so that lexicographic order is rank order.
Corpus power_law_corpus(double scale, double s, int ranks) {
  Corpus c;
  char name[16];
  for (int r = 1; r <= ranks; ++r) {
    std::snprintf(name, sizeof name, "t%03d", r);
    c[name] = static_cast<std::uint64_t>(std::floor(scale * std::pow(r, -s)));
  }
  return c;
}

TEST(Mass, MatchesBruteForceSum) {
  const auto ctx = stdlib::standard_context();
  const auto table = mass_table(ctx, 16, Fuel{10000}, 2);
  std::map<std::uint64_t, std::uint64_t> want;
  for (const auto& p : enumerate(16)) {
    if (p.term.arity() != Arity{0, 1}) continue;
    const auto r = eval(p.term, Value{}, Fuel{10000}, ctx);
    if (r.kind == EvalOutcome::Kind::Defined) want[r.value[0]] += std::uint64_t{1} << (16 - p.code.length());
  }
  ASSERT_EQ(table.entries.size(), want.size());
  for (const auto& [x, n] : want) EXPECT_EQ(table.numerator(x), n) << x;
}

TEST(Mass, KraftAndMonotoneInTruncation) {
  const auto ctx = stdlib::standard_context();
  std::vector<MassTable> tables;
  for (unsigned bits : {4u, 12u, 16u, 20u, 24u}) {
    tables.push_back(mass_table(ctx, bits, Fuel{10000}, 2));
    EXPECT_TRUE(tables.back().total_at_most_one()) << bits;
    EXPECT_GT(tables.back().numerator(1), 0u) << bits;
  }
  for (std::size_t i = 0; i + 1 < tables.size(); ++i) EXPECT_TRUE(tables[i].entrywise_le(tables[i + 1]));
  EXPECT_FALSE(tables.back().entrywise_le(tables.front()));
}

TEST(Mass, MonotoneInFuel) {
  const auto ctx = stdlib::standard_context();
  const auto poor = mass_table(ctx, 20, Fuel{30}, 1);
  const auto rich = mass_table(ctx, 20, Fuel{10000}, 1);
  EXPECT_TRUE(poor.entrywise_le(rich));
  EXPECT_LT(poor.total_numerator(), rich.total_numerator());
}

TEST(Mass, RoundNumberOutweighsItsPredecessor) {
  const auto table = mass_table(stdlib::standard_context(), 28, Fuel{10000}, 2);
  EXPECT_TRUE(table.total_at_most_one());
  EXPECT_GT(table.numerator(1024), table.numerator(1023));
}

TEST(Mass, RankedAndTop) {
  MassTable t{8, Fuel{}, {{1, {10, 4}}, {2, {30, 6}}, {3, {10, 6}}, {9, {5, 8}}}};
  const auto r = t.ranked();
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r[0].first, 2u);
  EXPECT_EQ(r[1].first, 1u);  // tie with 3, smaller key first
  EXPECT_EQ(r[2].first, 3u);
  EXPECT_EQ(t.top(2).entries.size(), 2u);
  EXPECT_EQ(t.top(2).numerator(1), 10u);
  EXPECT_EQ(t.restrict([](std::uint64_t x) { return x % 2 == 1; }).entries.size(), 3u);
}

TEST(Sampling, GeneratorIsTheStandardOne) {
  std::mt19937_64 g;
  g.discard(9999);
  EXPECT_EQ(g(), 9981545732273789042ull);
}

TEST(Sampling, DeterministicAndSeedSensitive) {
  const auto table = mass_table(stdlib::standard_context(), 16, Fuel{10000}, 1);
  const auto a = sample(table, 5000, 42);
  const auto b = sample(table, 5000, 42);
  const auto c = sample(table, 5000, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  std::uint64_t n = 0;
  for (const auto& [x, k] : a) {
    EXPECT_GT(table.numerator(x), 0u);
    n += k;
  }
  EXPECT_EQ(n, 5000u);
}

TEST(Sampling, SingleDrawAndErrors) {
  const MassTable t{4, Fuel{}, {{7, {3, 4}}}};
  EXPECT_EQ(sample(t, 1, 1), (std::map<std::uint64_t, std::uint64_t>{{7, 1}}));
  EXPECT_THROW(sample(MassTable{}, 1, 1), EmptyTable);
  EXPECT_THROW(sample(MassTable{4, Fuel{}, {{7, {0, 4}}}}, 1, 1), EmptyTable);
  EXPECT_THROW(sample(t, 0, 1), std::invalid_argument);
}

TEST(Sampling, FrequenciesApproachMasses) {
  const auto table = mass_table(stdlib::standard_context(), 20, Fuel{10000}, 2).top(20);
  const std::uint64_t n = 1000000;
  const auto counts = sample(table, n, 7);
  const double total = static_cast<double>(table.total_numerator());
  double chi2 = 0;
  for (const auto& [x, e] : table.entries) {
    const double expected = static_cast<double>(n) * static_cast<double>(e.numerator) / total;
    const double got = counts.count(x) ? static_cast<double>(counts.at(x)) : 0.0;
    chi2 += (got - expected) * (got - expected) / expected;
  }
  const double df = static_cast<double>(table.entries.size() - 1);
  // Far beyond the 0.9999 quantile for df = 19, about 50.
  EXPECT_LT(chi2, df + 8 * std::sqrt(2 * df));
}

TEST(Ranking, OrderAndTies) {
  auto r = rank_frequency({{"a", 3}, {"b", 1}});
  EXPECT_EQ(r.tokens[0].token, "a");
  EXPECT_EQ(r.tokens[0].rank, 1u);
  EXPECT_EQ(r.tokens[1].rank, 2u);
  EXPECT_EQ(r.total, 4u);
  auto t = rank_frequency({{"b", 2}, {"a", 2}});
  EXPECT_EQ(t.tokens[0].token, "a");
  EXPECT_EQ(t.tokens[1].token, "b");
  EXPECT_THROW(rank_frequency({}), EmptyCorpus);
}

TEST(Ranking, SyntheticZipfReproducesRanks) {
  const auto r = rank_frequency(power_law_corpus(1000, 1.0, 100));
  char name[16];
  for (int i = 1; i <= 100; ++i) {
    std::snprintf(name, sizeof name, "t%03d", i);
    EXPECT_EQ(r.tokens[i - 1].token, name);
    EXPECT_EQ(r.tokens[i - 1].rank, static_cast<std::uint64_t>(i));
  }
}

TEST(Fit, HarmonicCountsGiveExponentOne) {
  const auto rc = rank_frequency(power_law_corpus(1e6, 1.0, 500));
  const auto fit = fit_power_law(rc, FitMethod::LeastSquares);
  EXPECT_NEAR(fit.exponent, 1.0, 0.02);
  EXPECT_EQ(fit.r_min, 1u);
  EXPECT_EQ(fit.r_max, 500u);
  EXPECT_GE(fit.ks, 0.0);
}

TEST(Fit, RecoversSyntheticExponents) {
  for (double s : {0.8, 1.0, 1.2}) {
    const auto rc = rank_frequency(power_law_corpus(1e6, s, 500));
    for (auto m : {FitMethod::LeastSquares, FitMethod::MaximumLikelihood}) {
      const auto fit = fit_power_law(rc, m);
      EXPECT_NEAR(fit.exponent, s, 0.05) << method_name(m);
      EXPECT_LT(fit.ks, 0.01) << method_name(m);
    }
  }
}

TEST(Fit, SubRangeAndErrors) {
  const auto rc = rank_frequency(power_law_corpus(1e6, 1.0, 500));
  const auto fit = fit_power_law(rc, FitMethod::MaximumLikelihood, {10, 200});
  EXPECT_EQ(fit.r_min, 10u);
  EXPECT_EQ(fit.r_max, 200u);
  EXPECT_NEAR(fit.exponent, 1.0, 0.05);
  EXPECT_THROW(fit_power_law(rc, FitMethod::LeastSquares, {1, 9}), RangeTooSmall);
  EXPECT_THROW(fit_power_law(rc, FitMethod::LeastSquares, {400, 501}), RangeTooSmall);
  EXPECT_THROW(fit_power_law(rank_frequency({{"only", 5}}), FitMethod::LeastSquares), RangeTooSmall);
  Corpus flat;
  for (int i = 0; i < 20; ++i) flat["w" + std::to_string(i)] = 4;
  EXPECT_THROW(fit_power_law(rank_frequency(flat), FitMethod::LeastSquares), DegenerateCounts);
  EXPECT_THROW(fit_power_law(rank_frequency(flat), FitMethod::MaximumLikelihood), DegenerateCounts);
  EXPECT_EQ(parse_method("mle"), FitMethod::MaximumLikelihood);
  EXPECT_THROW(parse_method("ols"), std::invalid_argument);
}

TEST(Deviation, ExactLawIsFlatAndPerturbationShows) {
  auto corpus = power_law_corpus(1e6, 1.0, 300);
  const auto rc = rank_frequency(corpus);
  const auto base = zipf_deviation(rc, fit_power_law(rc, FitMethod::LeastSquares));
  EXPECT_LT(base.max_abs, 0.01);
  corpus["t150"] *= 100;
  const auto bumped_rc = rank_frequency(corpus);
  const auto bumped = zipf_deviation(bumped_rc, fit_power_law(bumped_rc, FitMethod::LeastSquares));
  EXPECT_GT(bumped.max_abs, base.max_abs);
  EXPECT_GT(bumped.mean_abs, base.mean_abs);
}

TEST(Kendall, KnownValues) {
  EXPECT_DOUBLE_EQ(kendall_tau_b({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0);
  EXPECT_DOUBLE_EQ(kendall_tau_b({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
  // One tie in b: C = 5, D = 0, ties_b = 1, so 5 / sqrt(6 * 5).
  EXPECT_NEAR(kendall_tau_b({1, 2, 3, 4}, {1, 2, 3, 3}), 5.0 / std::sqrt(30.0), 1e-12);
  EXPECT_THROW(kendall_tau_b({1}, {1, 2}), std::invalid_argument);
}

TEST(Numerals, ThousandPeak) {
  const Corpus corpus{{"nine hundred ninety-nine", 3}, {"thousand", 40}, {"thousand and one", 2}, {"cat", 100}};
  const std::map<std::string, std::uint64_t> numerals{
      {"nine hundred ninety-nine", 999}, {"thousand", 1000}, {"thousand and one", 1001}};
  MassTable table{8, Fuel{}, {{1000, {3, 7}}, {999, {1, 8}}}};
  const auto rep = numeral_profile(rank_frequency(corpus), numerals, table);
  EXPECT_EQ(rep.peak_factor, 2.0);
  EXPECT_EQ(rep.peaks, (std::vector<std::uint64_t>{1000}));
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_EQ(rep.rows[1].value, 1000u);
  EXPECT_EQ(rep.rows[1].mass_numerator, 3u);
  EXPECT_EQ(rep.rows[1].k_bits, 7u);
  EXPECT_FALSE(rep.rows[2].k_bits.has_value());
  EXPECT_EQ(rep.compared, 2u);
  ASSERT_TRUE(rep.tau.has_value());
  EXPECT_DOUBLE_EQ(*rep.tau, 1.0);
}

TEST(Numerals, FactorIsRespected) {
  const Corpus corpus{{"9", 10}, {"10", 15}, {"11", 2}};
  const std::map<std::string, std::uint64_t> numerals{{"9", 9}, {"10", 10}, {"11", 11}};
  EXPECT_TRUE(numeral_profile(rank_frequency(corpus), numerals, MassTable{}).peaks.empty());
  EXPECT_EQ(numeral_profile(rank_frequency(corpus), numerals, MassTable{}, 1.5).peaks,
            (std::vector<std::uint64_t>{10}));
  EXPECT_THROW(numeral_profile(rank_frequency(corpus), {}, MassTable{}), NoNumeralsFound);
}

TEST(CorpusFile, ParsesAndRoundTrips) {
  const auto c = read_corpus_string("the\t10\r\n\nof\t4\nthe\t1\n");
  EXPECT_EQ(c, (Corpus{{"the", 11}, {"of", 4}}));
  std::ostringstream out;
  write_corpus(out, c);
  EXPECT_EQ(read_corpus_string(out.str()), c);
}

TEST(CorpusFile, ErrorsCarryLineNumbers) {
  const std::pair<const char*, std::size_t> bad[] = {
      {"a\t1\nb 2\n", 2}, {"a\t1\n\nb\t0\n", 3}, {"a\t1.5\n", 1}, {"\t3\n", 1}, {"a\t-1\n", 1}, {"a\t\n", 1},
      {"a\t99999999999999999999999\n", 1}};
  for (const auto& [text, line] : bad) {
    try {
      read_corpus_string(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const CorpusFormatError& e) {
      EXPECT_EQ(e.line, line) << text;
      EXPECT_NE(std::string(e.what()).find("line " + std::to_string(line)), std::string::npos);
    }
  }
}

TEST(Restriction, EvenIntegersKeepTheShape) {
  // Soft property: tolerance 0.3 on the exponent difference.
  const auto table = mass_table(stdlib::standard_context(), 24, Fuel{10000}, 2);
  const auto full = ranked_from_masses(table);
  const auto even = ranked_from_masses(table.restrict([](std::uint64_t x) { return x % 2 == 0; }));
  for (auto m : {FitMethod::LeastSquares, FitMethod::MaximumLikelihood}) {
    const double a = fit_power_law(full, m).exponent;
    const double b = fit_power_law(even, m).exponent;
    EXPECT_LE(std::abs(a - b), 0.3) << method_name(m) << " " << a << " vs " << b;
  }
}

}  // namespace

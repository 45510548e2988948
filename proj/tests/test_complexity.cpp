#include <gtest/gtest.h>

#include <map>

#include "zlw/complexity.hpp"
#include "zlw/stdlib.hpp"
#include "zlw/zipf.hpp"

namespace {

using namespace zlw;
using St = ComplexityValue::Status;

struct ScanResult {
  std::map<std::uint64_t, std::pair<std::uint64_t, unsigned>> first;  // x -> (rank, bits)
  std::uint64_t first_exhausted = 0;                                   // 0 if none
};

/// K̂ by brute force: walk the whole shortlex stream and evaluate every
/// constant program.
ScanResult scan_constants(unsigned max_bits, const AdmissibleContext& ctx, Fuel fuel) {
  ScanResult out;
  for (const auto& p : enumerate(max_bits)) {
    if (p.term.arity() != Arity{0, 1}) continue;
    const auto r = eval(p.term, Value{}, fuel, ctx);
    if (r.kind == EvalOutcome::Kind::FuelExhausted && out.first_exhausted == 0) out.first_exhausted = p.rank;
    if (r.kind != EvalOutcome::Kind::Defined) continue;
    out.first.try_emplace(r.value.at(0), p.rank, static_cast<unsigned>(p.code.length()));
  }
  return out;
}

FunctionTable table_of(Arity a, const Box& box, std::uint64_t (*f)(const Value&)) {
  return tabulate(a, box, [&](const Value& p) { return Value{f(p)}; });
}

bool total(const FunctionTable& t) { return t.defined_count() == t.outcomes.size(); }

TEST(KHat, MatchesBruteForceScan) {
  for (const auto& ctx : {AdmissibleContext::bare(), stdlib::standard_context()}) {
    const SweepOptions opt{18, Fuel{10000}, 2};
    const auto table = ComplexityTable::build(ctx, opt);
    const auto scan = scan_constants(18, ctx, opt.fuel);
    ASSERT_EQ(table.sweep().values().size(), scan.first.size());
    for (const auto& [x, rb] : scan.first) {
      const auto k = table.khat(x);
      ASSERT_TRUE(k.has_value()) << x;
      EXPECT_EQ(k->index_form, rb.first) << x;
      EXPECT_EQ(k->witness_rank, rb.first) << x;
      EXPECT_EQ(k->bits_form, rb.second) << x;
      const bool upper = scan.first_exhausted != 0 && scan.first_exhausted < rb.first;
      EXPECT_EQ(k->status, upper ? St::UpperBoundOnly : St::ExactAtHorizon) << x;
    }
  }
}

TEST(KHat, SmallValues) {
  const auto table = ComplexityTable::build(stdlib::standard_context(), {18, Fuel{10000}, 1});
  const auto one = table.khat_or_throw(1);
  EXPECT_EQ(one.index_form, 1u);
  EXPECT_EQ(one.bits_form, 4u);
  EXPECT_EQ(one.status, St::ExactAtHorizon);
  EXPECT_EQ(decode(table.sweep().find(1)->code), build::one(0));

  const auto two = table.khat_or_throw(2);
  EXPECT_LE(two.bits_form, encode(build::compose(build::one(0), build::suc())).length());
  EXPECT_EQ(eval(decode(table.sweep().find(2)->code), Value{}, Fuel{10000}, stdlib::standard_context()).value,
            Value{2});
  EXPECT_THROW(table.khat(0), std::invalid_argument);
}

TEST(KHat, NotFoundIsNotAnUpperBound) {
  const auto table = ComplexityTable::build(AdmissibleContext::bare(), {12, Fuel{1000}, 1});
  EXPECT_FALSE(table.khat(1000000).has_value());
  EXPECT_THROW(table.khat_or_throw(1000000), NotFoundWithinHorizon);
}

TEST(KHat, KraftOverWitnesses) {
  const auto table = ComplexityTable::build(stdlib::standard_context(), {20, Fuel{10000}, 1});
  std::uint64_t sum = 0;  // units of 2^-20
  for (const auto& [x, info] : table.sweep().values()) sum += std::uint64_t{1} << (20 - table.kphat(x)->bits_form);
  EXPECT_LE(sum, std::uint64_t{1} << 20);
}

TEST(KHat, AntiMonotoneInFuelAndHorizon) {
  const auto ctx = stdlib::standard_context();
  std::vector<ComplexityTable> tables;
  for (auto [bits, fuel] : {std::pair{16u, 10u}, {16u, 1000u}, {20u, 1000u}, {20u, 100000u}})
    tables.push_back(ComplexityTable::build(ctx, {bits, Fuel{fuel}, 2}));
  for (std::size_t i = 0; i + 1 < tables.size(); ++i)
    for (const auto& [x, info] : tables[i].sweep().values()) {
      const auto small = tables[i].kphat(x);
      const auto big = tables[i + 1].kphat(x);
      ASSERT_TRUE(big.has_value()) << x;
      EXPECT_LE(big->index_form, small->index_form) << x;
      EXPECT_LE(big->bits_form, small->bits_form) << x;
    }
}

TEST(KHat, WorkerCountDoesNotMatter) {
  const auto ctx = stdlib::standard_context();
  const auto a = ComplexityTable::build(ctx, {19, Fuel{1000}, 1});
  const auto b = ComplexityTable::build(ctx, {19, Fuel{1000}, 4});
  ASSERT_EQ(a.sweep().values().size(), b.sweep().values().size());
  for (const auto& [x, info] : a.sweep().values()) {
    const auto* other = b.sweep().find(x);
    ASSERT_NE(other, nullptr);
    EXPECT_EQ(info.witness, other->witness);
    EXPECT_EQ(info.mass, other->mass);
    EXPECT_EQ(a.khat(x)->index_form, b.khat(x)->index_form);
  }
}

TEST(KHat, PowerOfTwoIsALocalPeakOfSimplicity) {
  const auto table = ComplexityTable::build(stdlib::standard_context(), {28, Fuel{10000}, 2});
  const auto peak = table.khat_or_throw(1024);
  int simpler_neighbors = 0, neighbors = 0;
  for (std::uint64_t x = 1024 - 31; x <= 1024 + 31; ++x) {
    if (x == 1024) continue;
    ++neighbors;
    const auto k = table.khat(x);
    if (!k || peak.bits_form < k->bits_form) ++simpler_neighbors;
  }
  EXPECT_GT(2 * simpler_neighbors, neighbors);

  const auto rows = k_vs_kp(table, 2048, 0.1);
  ASSERT_FALSE(rows.empty());
  for (const auto& r : rows) EXPECT_EQ(r.kp_bits, table.kphat(r.x)->bits_form);
}

TEST(KHat, LevinDominationTrend) {
  // r_l = 1/l^2 against 2^-K̂P(l): asserted only as a nonnegative rank correlation.
  const auto table = ComplexityTable::build(stdlib::standard_context(), {22, Fuel{10000}, 2});
  std::vector<double> r, m;
  for (std::uint64_t l = 1; l <= 64; ++l) {
    const auto k = table.kphat(l);
    if (!k) continue;
    r.push_back(1.0 / static_cast<double>(l * l));
    m.push_back(std::ldexp(1.0, -static_cast<int>(k->bits_form)));
  }
  ASSERT_GE(r.size(), 10u);
  EXPECT_GE(kendall_tau_b(r, m), 0.0);
}

class FnTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { stream_ = new ProgramStream(100000); }
  static void TearDownTestSuite() {
    delete stream_;
    stream_ = nullptr;
  }
  static ProgramStream* stream_;
};
ProgramStream* FnTest::stream_ = nullptr;

TEST_F(FnTest, IdentityAndSuccessorWitnesses) {
  const auto box = Box::cube(1, 10);
  const auto ident = table_of({1, 1}, box, [](const Value& p) { return p[0]; });
  const auto k = khat_fn(ident, *stream_, AdmissibleContext::bare(), Fuel{1000});
  EXPECT_EQ(stream_->unrank(k.witness_rank), build::pr(1, 1));
  EXPECT_EQ(k.witness_rank, stream_->rank_of(build::pr(1, 1)));
  EXPECT_EQ(k.bits_form, encode(build::pr(1, 1)).length());

  const auto succ = table_of({1, 1}, box, [](const Value& p) { return p[0] + 1; });
  const auto s = khat_fn(succ, *stream_, AdmissibleContext::bare(), Fuel{1000});
  EXPECT_EQ(stream_->unrank(s.witness_rank), build::suc());
  EXPECT_EQ(s.status, St::ExactAtHorizon);
}

TEST_F(FnTest, EmptyBoxGivesRankOne) {
  const FunctionTable empty{{2, 1}, Box{{{1, 0}, {1, 0}}}, {}};
  const auto k = khat_fn(empty, *stream_, AdmissibleContext::bare(), Fuel{10});
  EXPECT_EQ(k.witness_rank, 1u);
  EXPECT_EQ(k.index_form, 1u);
}

TEST_F(FnTest, NotFoundWithinHorizon) {
  const ProgramStream small(2000);
  const auto far = table_of({1, 1}, Box::cube(1, 4), [](const Value& p) { return p[0] * p[0] + 7; });
  EXPECT_THROW(khat_fn(far, small, AdmissibleContext::bare(), Fuel{1000}), NotFoundWithinHorizon);
}

TEST_F(FnTest, IndexAgreesWithLinearSearch) {
  const auto box = Box::cube(2, 3);
  const auto ctx = stdlib::standard_context();
  const FunctionIndex index(*stream_, {2, 1}, box, Fuel{1000}, ctx, 2);
  const auto ranks = index.witness_ranks();
  ASSERT_EQ(ranks.size(), index.distinct());
  for (std::size_t i = 0; i < ranks.size(); i += 7) {
    const auto behavior = denote(stream_->unrank(ranks[i]), box, Fuel{1000}, ctx);
    const auto linear = khat_fn(behavior, *stream_, ctx, Fuel{1000});
    const auto fast = index.find(behavior);
    ASSERT_TRUE(fast.has_value());
    EXPECT_EQ(fast->witness_rank, linear.witness_rank);
    EXPECT_EQ(fast->witness_rank, ranks[i]);
    EXPECT_EQ(fast->status, linear.status);
  }
}

TEST_F(FnTest, LibraryHitCostsOneLeaf) {
  AdmissibleContext ctx;
  ctx.add_term(stdlib::square(), "square");
  const auto g = denote(stdlib::square(), Box::cube(1, 6), Fuel{100000});
  const auto k = krel(g, *stream_, ctx, Fuel{100000});
  EXPECT_LE(k.bits_form, encode(build::lib(1, {1, 1})).length());
  EXPECT_THROW(krel(g, *stream_, AdmissibleContext::bare(), Fuel{10}), std::invalid_argument);
}

TEST_F(FnTest, LibrariesNeverHurtOnTotalBehaviors) {
  const auto bare = AdmissibleContext::bare();
  const auto lib = stdlib::standard_context();
  int checked = 0;
  for (auto [arity, box] : {std::pair{Arity{1, 1}, Box::cube(1, 5)}, {Arity{2, 1}, Box::cube(2, 3)}}) {
    const FunctionIndex plain(*stream_, arity, box, Fuel{1000}, bare);
    const FunctionIndex with(*stream_, arity, box, Fuel{1000}, lib);
    for (auto r : plain.witness_ranks()) {
      const auto f = denote(stream_->unrank(r), box, Fuel{1000}, bare);
      if (!total(f)) continue;
      const auto k = plain.find(f);
      const auto kr = with.find(f);
      ASSERT_TRUE(kr.has_value());
      EXPECT_LE(kr->index_form, k->index_form);
      ++checked;
    }
  }
  EXPECT_GE(checked, 50);
}

TEST_F(FnTest, OracleTableBeatsTheHorizon) {
  const auto far = table_of({1, 1}, Box::cube(1, 4), [](const Value& p) { return p[0] * p[0] + 7; });
  EXPECT_THROW(khat_fn(far, *stream_, AdmissibleContext::bare(), Fuel{1000}), NotFoundWithinHorizon);
  AdmissibleContext ctx;
  OracleTable t{{1, 1}, {}};
  for (std::uint64_t x = 1; x <= 4; ++x) t.entries[{x}] = {x * x + 7};
  ctx.add_table(t, "far");
  const auto k = krel(far, *stream_, ctx, Fuel{1000});
  EXPECT_EQ(stream_->unrank(k.witness_rank), build::lib(1, {1, 1}));
}

TEST_F(FnTest, DummyVariableExtensionIsFound) {
  // f(x) found as (1,1); g(x,y) = f(x) must be found within the code of pr(2,1) ; f.
  const auto bare = AdmissibleContext::bare();
  const FunctionIndex unary(*stream_, {1, 1}, Box::cube(1, 3), Fuel{1000}, bare);
  const FunctionIndex binary(*stream_, {2, 1}, Box::cube(2, 3), Fuel{1000}, bare);
  int checked = 0;
  for (auto r : unary.witness_ranks()) {
    const auto ext = build::compose(build::pr(2, 1), stream_->unrank(r));
    if (encode(ext).length() > stream_->complete_length()) continue;
    const auto k = binary.find(denote(ext, Box::cube(2, 3), Fuel{1000}, bare));
    ASSERT_TRUE(k.has_value());
    EXPECT_LE(k->bits_form, encode(ext).length());
    ++checked;
  }
  EXPECT_GE(checked, 5);
}

TEST_F(FnTest, FamilyMembersUnfoldTheDefinition) {
  const auto theta = NRNumbering::with_ranks(RSequence::squares(), 5000);
  const OptimalFamily u(*stream_, theta, {1, 1});
  const auto box = Box::cube(1, 4);
  int matched = 0;
  for (std::uint64_t k = 1; k <= 5000; k += 13) {
    const auto [a, b] = u.source(k);
    EXPECT_EQ(theta.rank(a, b), k);
    const auto got = u.member(k, box, Fuel{1000}, AdmissibleContext::bare());
    const Term& t = stream_->unrank(b);
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (t.arity() != Arity{2, 1}) {
        EXPECT_FALSE(got[i].defined());
        continue;
      }
      const auto want = eval(t, Value{i + 1, a}, Fuel{1000});
      EXPECT_EQ(got[i].kind, want.kind);
      EXPECT_EQ(got[i].value, want.value);
      ++matched;
    }
  }
  EXPECT_GT(matched, 0);
  const auto tiny = NRNumbering(RSequence::squares(), 1u << 20);
  const ProgramStream few(10);
  EXPECT_THROW(OptimalFamily(few, tiny, {1, 1}).source(tiny.rank(1, 11)), HorizonExceeded);
}

TEST_F(FnTest, TwoSidedTransferBound) {
  const auto tu = NRNumbering::with_ranks(RSequence::squares(), 60000);
  const auto tv = NRNumbering::with_ranks(RSequence::log_squared(), 60000);
  const std::uint64_t window = 8000;
  const auto tc = transfer_constants(tu, tv, window);
  EXPECT_GE(tc.c_uv, Rational(1));
  EXPECT_GE(tc.c_vu, Rational(1));
  const OptimalFamily u(*stream_, tu, {1, 1}), v(*stream_, tv, {1, 1});
  const auto box = Box::cube(1, 5);
  const auto ctx = stdlib::standard_context();
  const auto ku = u.first_indices(tc.reach_u, box, Fuel{1000}, ctx);
  const auto kv = v.first_indices(tc.reach_v, box, Fuel{1000}, ctx);
  int checked = 0;
  for (const auto& [key, a] : ku) {
    auto it = kv.find(key);
    if (it == kv.end() || a > window || it->second > window) continue;
    const Rational ratio(static_cast<std::int64_t>(a), static_cast<std::int64_t>(it->second));
    EXPECT_LE(ratio, tc.c_uv);
    EXPECT_GE(ratio, 1 / tc.c_vu);
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

TEST(Transfer, SameNumberingHasUnitConstants) {
  const auto t = NRNumbering::with_ranks(RSequence::squares(), 2000);
  const auto tc = transfer_constants(t, t, 1000);
  EXPECT_EQ(tc.c_uv, Rational(1));
  EXPECT_EQ(tc.c_vu, Rational(1));
  EXPECT_EQ(tc.reach_u, 1000u);
}

}  // namespace

#pragma once

// Resource-bounded complexities over the program stream.
//
// K̂(x) is the rank of the first constant program printing x; K̂P(x) is the
// same search measured by code length, which is a prefix complexity because
// the program code is prefix-free. Function behaviors are compared by
// agreement on a finite box. A result is exact at the horizon unless some
// earlier candidate ran out of fuel, in which case it is only an upper
// bound.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "zlw/enumerate.hpp"
#include "zlw/evaluator.hpp"
#include "zlw/numbering.hpp"
#include "zlw/sweep.hpp"

namespace zlw {

class NotFoundWithinHorizon : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ComplexityValue {
  enum class Status { ExactAtHorizon, UpperBoundOnly };

  std::uint64_t index_form = 0;
  unsigned bits_form = 0;
  std::uint64_t witness_rank = 0;
  Status status = Status::ExactAtHorizon;
};

inline const char* status_name(ComplexityValue::Status s) {
  return s == ComplexityValue::Status::ExactAtHorizon ? "ExactAtHorizon" : "UpperBoundOnly";
}

/// K̂ and K̂P of integers, read off a constant sweep.
class ComplexityTable {
 public:
  ComplexityTable(ConstantSweep sweep, std::vector<std::uint64_t> census)
      : sweep_(std::move(sweep)), census_(std::move(census)) {
    if (census_.size() < sweep_.max_bits() + 1u) throw std::invalid_argument("census shorter than sweep");
    before_.assign(census_.size() + 1, 0);
    for (std::size_t l = 0; l < census_.size(); ++l) before_[l + 1] = before_[l] + census_[l];
  }

  static ComplexityTable build(const AdmissibleContext& ctx, const SweepOptions& opt) {
    return ComplexityTable(ConstantSweep(ctx, opt), code_census(opt.max_bits, opt.workers));
  }

  const ConstantSweep& sweep() const { return sweep_; }

  /// Global rank of a constant program. Constant codes start with the
  /// smallest root prefix, so they precede every other code of their length.
  std::uint64_t rank_of(const SweepPosition& pos) const { return before_[pos.bits] + pos.index; }

  std::optional<ComplexityValue> khat(std::uint64_t x) const {
    if (x == 0) throw std::invalid_argument("x must be positive");
    const auto* info = sweep_.find(x);
    if (!info) return std::nullopt;
    ComplexityValue v;
    v.witness_rank = rank_of(info->witness);
    v.index_form = v.witness_rank;
    v.bits_form = info->witness.bits;
    const auto ex = sweep_.first_exhausted();
    v.status = (ex && *ex < info->witness) ? ComplexityValue::Status::UpperBoundOnly
                                           : ComplexityValue::Status::ExactAtHorizon;
    return v;
  }

  /// Same witness as khat: the only code in play is already prefix-free.
  std::optional<ComplexityValue> kphat(std::uint64_t x) const { return khat(x); }

  ComplexityValue khat_or_throw(std::uint64_t x) const {
    auto v = khat(x);
    if (!v)
      throw NotFoundWithinHorizon("no constant program of at most " + std::to_string(sweep_.max_bits()) +
                                  " bits prints " + std::to_string(x));
    return *v;
  }

 private:
  ConstantSweep sweep_;
  std::vector<std::uint64_t> census_;
  std::vector<std::uint64_t> before_;
};

/// One row of the K̂ versus K̂P log^(1+eps) K̂P comparison, where K̂P is
/// exponentiated: KP = 2^bits.
struct KvsKPRow {
  std::uint64_t x;
  std::uint64_t k_index;
  unsigned kp_bits;
  double kp_bound;  // 2^b * b^(1+eps)
  bool within;
};

inline std::vector<KvsKPRow> k_vs_kp(const ComplexityTable& table, std::uint64_t x_max, double eps = 0.1) {
  std::vector<KvsKPRow> rows;
  for (std::uint64_t x = 1; x <= x_max; ++x) {
    auto k = table.khat(x);
    if (!k) continue;
    auto kp = table.kphat(x);
    const double b = kp->bits_form;
    const double bound = std::ldexp(1.0, static_cast<int>(kp->bits_form)) * std::pow(b, 1.0 + eps);
    rows.push_back({x, k->index_form, kp->bits_form, bound, static_cast<double>(k->index_form) <= bound});
  }
  return rows;
}

namespace detail {

/// Box agreement as a hash key: each point contributes its value, or 0 when
/// the point is not defined (values are positive, so 0 is free).
inline std::string table_key(const std::vector<EvalOutcome>& outcomes) {
  std::string key;
  key.reserve(outcomes.size() * 8);
  for (const auto& o : outcomes) {
    const std::uint64_t n = o.defined() ? o.value.size() : 0;
    key.append(reinterpret_cast<const char*>(&n), sizeof n);
    for (auto v : o.value) key.append(reinterpret_cast<const char*>(&v), sizeof v);
  }
  return key;
}

inline bool any_exhausted(const std::vector<EvalOutcome>& outcomes) {
  for (const auto& o : outcomes)
    if (o.exhausted()) return true;
  return false;
}

}  // namespace detail

/// Minimal-rank program of the stream agreeing with `behavior` on its box.
/// An empty box is matched vacuously by the rank-1 program.
inline ComplexityValue khat_fn(const FunctionTable& behavior, const ProgramStream& stream,
                               const AdmissibleContext& ctx, const Fuel& fuel) {
  ComplexityValue v;
  if (behavior.box.size() == 0) {
    v.index_form = v.witness_rank = 1;
    v.bits_form = static_cast<unsigned>(stream.code(1).length());
    return v;
  }
  bool exhausted_before = false;
  for (std::uint64_t r = 1; r <= stream.size(); ++r) {
    const Term& t = stream.unrank(r);
    if (t.arity() != behavior.arity) continue;
    const auto table = denote(t, behavior.box, fuel, ctx);
    if (table.agrees_with(behavior)) {
      v.index_form = v.witness_rank = r;
      v.bits_form = static_cast<unsigned>(stream.code(r).length());
      v.status = exhausted_before ? ComplexityValue::Status::UpperBoundOnly : ComplexityValue::Status::ExactAtHorizon;
      return v;
    }
    exhausted_before = exhausted_before || detail::any_exhausted(table.outcomes);
  }
  throw NotFoundWithinHorizon("no program among the first " + std::to_string(stream.size()) +
                              " ranks agrees with the behavior");
}

/// khat_fn in a context with a library; LibRef leaves cost only their
/// address code.
inline ComplexityValue krel(const FunctionTable& behavior, const ProgramStream& stream,
                            const AdmissibleContext& ctx_with_library, const Fuel& fuel) {
  if (ctx_with_library.library_size() == 0) throw std::invalid_argument("krel needs a context with a library");
  return khat_fn(behavior, stream, ctx_with_library, fuel);
}

/// Box tables of every program of one arity in the stream, indexed for
/// repeated khat_fn queries.
class FunctionIndex {
 public:
  FunctionIndex(const ProgramStream& stream, Arity arity, Box box, const Fuel& fuel, const AdmissibleContext& ctx,
                unsigned workers = 1)
      : stream_(stream), arity_(arity), box_(std::move(box)) {
    constexpr std::uint64_t chunk = 4096;
    const std::uint64_t chunks = (stream.size() + chunk - 1) / chunk;
    struct Part {
      std::vector<std::pair<std::string, std::uint64_t>> firsts;
      std::optional<std::uint64_t> first_exhausted;
    };
    std::vector<Part> parts(chunks);
    parallel_for(chunks, workers, [&](std::size_t c) {
      std::unordered_map<std::string, std::uint64_t> seen;
      const std::uint64_t lo = c * chunk + 1, hi = std::min(stream.size(), (c + 1) * chunk);
      for (std::uint64_t r = lo; r <= hi; ++r) {
        const Term& t = stream.unrank(r);
        if (t.arity() != arity_) continue;
        const auto table = denote(t, box_, fuel, ctx);
        if (detail::any_exhausted(table.outcomes) && !parts[c].first_exhausted) parts[c].first_exhausted = r;
        auto key = detail::table_key(table.outcomes);
        if (seen.emplace(key, r).second) parts[c].firsts.emplace_back(std::move(key), r);
      }
    });
    for (auto& p : parts) {
      for (auto& [key, r] : p.firsts) first_.try_emplace(std::move(key), r);
      if (p.first_exhausted && !first_exhausted_) first_exhausted_ = p.first_exhausted;
    }
  }

  std::optional<ComplexityValue> find(const FunctionTable& behavior) const {
    if (behavior.arity != arity_ || !(behavior.box == box_))
      throw std::invalid_argument("behavior does not match the index arity and box");
    auto it = first_.find(detail::table_key(behavior.outcomes));
    if (it == first_.end()) return std::nullopt;
    ComplexityValue v;
    v.index_form = v.witness_rank = it->second;
    v.bits_form = static_cast<unsigned>(stream_.code(it->second).length());
    v.status = (first_exhausted_ && *first_exhausted_ < it->second) ? ComplexityValue::Status::UpperBoundOnly
                                                                    : ComplexityValue::Status::ExactAtHorizon;
    return v;
  }

  std::size_t distinct() const { return first_.size(); }

  /// First rank of each distinct box table, ascending.
  std::vector<std::uint64_t> witness_ranks() const {
    std::vector<std::uint64_t> out;
    out.reserve(first_.size());
    for (const auto& [key, r] : first_) out.push_back(r);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  const ProgramStream& stream_;
  Arity arity_;
  Box box_;
  std::unordered_map<std::string, std::uint64_t> first_;
  std::optional<std::uint64_t> first_exhausted_;
};

/// The family u(x, k) = U_b(x, a) where (a, b) = theta^-1(k): member k is
/// slice a of the b-th stream program. Every (m,n)-behavior reachable as a
/// slice of some stream program is some u_k.
class OptimalFamily {
 public:
  OptimalFamily(const ProgramStream& U, const NRNumbering& theta, Arity member) : U_(U), theta_(theta), member_(member) {}

  const NRNumbering& theta() const { return theta_; }
  Arity member_arity() const { return member_; }

  /// (a, b) behind u_k.
  Pair source(std::uint64_t k) const {
    const Pair p = theta_.unrank(k);
    if (p.second > U_.size())
      throw HorizonExceeded("u_" + std::to_string(k) + " needs program rank " + std::to_string(p.second) +
                            " beyond the stream horizon");
    return p;
  }

  /// u_k on a box. A source program of the wrong arity gives the nowhere
  /// defined member.
  std::vector<EvalOutcome> member(std::uint64_t k, const Box& box, const Fuel& fuel,
                                  const AdmissibleContext& ctx) const {
    detail::Machine machine(ctx, fuel);
    return member(k, box, machine);
  }

  std::vector<EvalOutcome> member(std::uint64_t k, const Box& box, detail::Machine& machine) const {
    const auto [a, b] = source(k);
    const Term& t = U_.unrank(b);
    std::vector<EvalOutcome> out;
    const auto points = box.points();
    out.reserve(points.size());
    if (t.arity() != Arity{member_.m + 1, member_.n}) {
      out.assign(points.size(), EvalOutcome::undefined());
      return out;
    }
    for (auto p : points) {
      p.push_back(a);
      out.push_back(machine.run(t, p));
    }
    return out;
  }

  /// K_u of every behavior seen among u_1..u_window: first index per box
  /// table.
  std::unordered_map<std::string, std::uint64_t> first_indices(std::uint64_t window, const Box& box, const Fuel& fuel,
                                                               const AdmissibleContext& ctx,
                                                               unsigned workers = 1) const {
    constexpr std::uint64_t chunk = 8192;
    const std::uint64_t chunks = (window + chunk - 1) / chunk;
    std::vector<std::vector<std::pair<std::string, std::uint64_t>>> parts(chunks);
    parallel_for(chunks, workers, [&](std::size_t c) {
      detail::Machine machine(ctx, fuel);
      std::unordered_map<std::string, std::uint64_t> seen;
      const std::uint64_t lo = c * chunk + 1, hi = std::min(window, (c + 1) * chunk);
      for (std::uint64_t k = lo; k <= hi; ++k) {
        auto key = detail::table_key(member(k, box, machine));
        if (seen.emplace(key, k).second) parts[c].emplace_back(std::move(key), k);
      }
    });
    std::unordered_map<std::string, std::uint64_t> first;
    for (auto& p : parts)
      for (auto& [key, k] : p) first.try_emplace(std::move(key), k);
    return first;
  }

 private:
  const ProgramStream& U_;
  const NRNumbering& theta_;
  Arity member_;
};

/// Constants of the two-sided comparison between families built on the
/// same stream with numberings theta_u and theta_v. If v_k = f then
/// u_{theta_u(theta_v^-1(k))} = f, so K_u(f) <= c_uv K_v(f) with
/// c_uv = max_{k <= window} theta_u(theta_v^-1(k)) / k, valid whenever
/// K_v(f) <= window; symmetrically for c_vu.
struct TransferConstants {
  Rational c_uv{0};
  Rational c_vu{0};
  std::uint64_t window = 0;
  /// Largest index either family must scan so that every behavior with
  /// complexity <= window in the other family is found.
  std::uint64_t reach_u = 0;
  std::uint64_t reach_v = 0;
};

inline TransferConstants transfer_constants(const NRNumbering& theta_u, const NRNumbering& theta_v,
                                            std::uint64_t window) {
  TransferConstants tc;
  tc.window = window;
  for (std::uint64_t k = 1; k <= window; ++k) {
    const Pair pv = theta_v.unrank(k);
    const std::uint64_t ku = theta_u.rank(pv.first, pv.second);
    tc.c_uv = std::max(tc.c_uv, Rational(static_cast<std::int64_t>(ku), static_cast<std::int64_t>(k)));
    tc.reach_u = std::max(tc.reach_u, ku);
    const Pair pu = theta_u.unrank(k);
    const std::uint64_t kv = theta_v.rank(pu.first, pu.second);
    tc.c_vu = std::max(tc.c_vu, Rational(static_cast<std::int64_t>(kv), static_cast<std::int64_t>(k)));
    tc.reach_v = std::max(tc.reach_v, kv);
  }
  return tc;
}

}  // namespace zlw

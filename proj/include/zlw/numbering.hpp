#pragma once

// Slowly growing pairings Z+ x Z+ -> Z+ driven by a rate sequence R.
//
// Pairs are ordered by the value k*R_l, ties broken by the smaller l; the
// numbering N_R(k,l) is the rank in that order. All comparisons are exact
// rational comparisons.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace zlw {

using Rational = boost::rational<std::int64_t>;
using Pair = std::pair<std::uint64_t, std::uint64_t>;

class HorizonExceeded : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class BoundViolated : public std::logic_error {
 public:
  BoundViolated(Pair p, const std::string& what) : std::logic_error(what), pair(p) {}
  Pair pair;
};

/// Rate sequence R_l with its summability certificate. R must be
/// nondecreasing in l, which is how "R_l -> infinity" is made checkable.
struct RSequence {
  enum class Kind { Convergent, Divergent };

  std::string name;
  std::function<Rational(std::uint64_t)> R;
  Kind kind = Kind::Convergent;
  /// Convergent: upper bound on sum of 1/R_l.
  Rational c{0};
  /// Divergent: majorant of the partial sums, sum_{l<=M} 1/R_l <= F(M).
  std::function<Rational(std::uint64_t)> F;

  Rational at(std::uint64_t l) const { return R(l); }

  /// R_l = l^2, sum = pi^2/6 < 2.
  static RSequence squares() {
    return {"l^2", [](std::uint64_t l) { return Rational(static_cast<std::int64_t>(l * l)); }, Kind::Convergent,
            Rational(2), {}};
  }

  /// R_l = l. Harmonic sums obey H_M <= 1 + ln M <= 1 + ceil(log2 M) * 0.6931472.
  static RSequence linear() {
    return {"l", [](std::uint64_t l) { return Rational(static_cast<std::int64_t>(l)); }, Kind::Divergent, Rational(0),
            [](std::uint64_t M) {
              std::int64_t bits = 0;
              while ((std::uint64_t{1} << bits) < M) ++bits;
              return Rational(1) + Rational(bits * 6931472, 10000000);
            }};
  }

  /// R_l = l * ceil(log2(l+1))^2. The block 2^(j-1) <= l < 2^j contributes
  /// at most 1/j^2, so the sum is below pi^2/6 < 2.
  static RSequence log_squared() {
    return {"l*ceil(log2(l+1))^2",
            [](std::uint64_t l) {
              std::int64_t j = 0;
              while ((std::uint64_t{1} << j) < l + 1) ++j;
              return Rational(static_cast<std::int64_t>(l) * j * j);
            },
            Kind::Convergent, Rational(2), {}};
  }

  static RSequence by_name(const std::string& name) {
    if (name == "l^2" || name == "squares") return squares();
    if (name == "l" || name == "linear") return linear();
    if (name == "l*ceil(log2(l+1))^2" || name == "log-squared") return log_squared();
    throw std::invalid_argument("unknown R sequence '" + name + "' (expected squares, linear or log-squared)");
  }
};

namespace detail {

/// ceil(2^62 / q) for positive rational q, computed exactly.
inline unsigned __int128 reciprocal_up(const Rational& q) {
  const unsigned __int128 num = static_cast<unsigned __int128>(q.denominator()) << 62;
  const auto den = static_cast<unsigned __int128>(q.numerator());
  return (num + den - 1) / den;
}

/// floor(2^62 * q) for nonnegative rational q.
inline unsigned __int128 scaled_down(const Rational& q) {
  return (static_cast<unsigned __int128>(q.numerator()) << 62) / static_cast<unsigned __int128>(q.denominator());
}

}  // namespace detail

struct SequenceCheck {
  bool ok = true;
  std::uint64_t checked = 0;
  std::optional<std::uint64_t> failed_at;
  std::string detail;
};

/// Certifies the declared kind on l = 1..horizon: positivity, monotonicity,
/// and the partial-sum bound. Sums are rounded upward, so a pass is a proof.
inline SequenceCheck check_sequence(const RSequence& R, std::uint64_t horizon) {
  SequenceCheck out;
  unsigned __int128 sum = 0;
  Rational prev(0);
  for (std::uint64_t l = 1; l <= horizon; ++l) {
    const Rational r = R.at(l);
    auto fail = [&](std::string why) {
      out.ok = false;
      out.failed_at = l;
      out.detail = std::move(why);
    };
    if (r <= 0) {
      fail("R_l must be positive");
      return out;
    }
    if (r < prev) {
      fail("R_l must be nondecreasing");
      return out;
    }
    prev = r;
    sum += detail::reciprocal_up(r);
    const Rational bound = R.kind == RSequence::Kind::Convergent ? R.c : R.F(l);
    if (sum > detail::scaled_down(bound)) {
      fail("partial sum of 1/R_l exceeds the declared bound");
      return out;
    }
    out.checked = l;
  }
  return out;
}

/// All pairs with k*R_l <= M, ordered by l then k.
inline std::vector<Pair> vr_members(const RSequence& R, std::uint64_t M) {
  if (M == 0) throw std::invalid_argument("M must be positive");
  std::vector<Pair> out;
  const Rational bound(static_cast<std::int64_t>(M));
  for (std::uint64_t l = 1;; ++l) {
    const Rational r = R.at(l);
    if (r > bound) break;
    for (std::uint64_t k = 1; Rational(static_cast<std::int64_t>(k)) * r <= bound; ++k) out.emplace_back(k, l);
  }
  return out;
}

/// N_R tabulated on V_R(M) for a value bound M. Every pair with k*R_l <= M
/// has its exact rank, because all such pairs precede every pair of larger
/// value.
class NRNumbering {
 public:
  NRNumbering(RSequence R, std::uint64_t value_bound) : R_(std::move(R)), value_bound_(value_bound) {
    auto members = vr_members(R_, value_bound);
    std::vector<std::pair<Rational, Pair>> keyed;
    keyed.reserve(members.size());
    for (const auto& p : members) keyed.emplace_back(Rational(static_cast<std::int64_t>(p.first)) * R_.at(p.second), p);
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second.second < b.second.second;
    });
    by_rank_.reserve(keyed.size());
    for (const auto& [v, p] : keyed) {
      rank_.emplace(key(p), by_rank_.size() + 1);
      by_rank_.push_back(p);
    }
  }

  /// Smallest table holding at least `ranks` ranks.
  static NRNumbering with_ranks(const RSequence& R, std::uint64_t ranks) {
    std::uint64_t M = 1;
    while (count_members(R, M) < ranks) M *= 2;
    return NRNumbering(R, M);
  }

  const RSequence& sequence() const { return R_; }
  std::uint64_t value_bound() const { return value_bound_; }
  std::uint64_t size() const { return by_rank_.size(); }

  std::uint64_t rank(std::uint64_t k, std::uint64_t l) const {
    if (k == 0 || l == 0) throw std::invalid_argument("pairs are positive");
    auto it = rank_.find(key({k, l}));
    if (it == rank_.end())
      throw HorizonExceeded("pair (" + std::to_string(k) + "," + std::to_string(l) + ") lies beyond value bound " +
                            std::to_string(value_bound_));
    return it->second;
  }

  Pair unrank(std::uint64_t n) const {
    if (n == 0 || n > by_rank_.size())
      throw HorizonExceeded("rank " + std::to_string(n) + " outside table of " + std::to_string(by_rank_.size()));
    return by_rank_[n - 1];
  }

  bool contains(std::uint64_t k, std::uint64_t l) const { return rank_.count(key({k, l})) != 0; }

  Rational value(Pair p) const { return Rational(static_cast<std::int64_t>(p.first)) * R_.at(p.second); }

  static std::uint64_t count_members(const RSequence& R, std::uint64_t M) {
    std::uint64_t n = 0;
    const Rational bound(static_cast<std::int64_t>(M));
    for (std::uint64_t l = 1;; ++l) {
      const Rational r = R.at(l);
      if (r > bound) break;
      n += static_cast<std::uint64_t>(boost::rational_cast<std::int64_t>(bound / r));
    }
    return n;
  }

 private:
  static std::uint64_t key(Pair p) { return (p.first << 32) ^ p.second; }

  RSequence R_;
  std::uint64_t value_bound_;
  std::vector<Pair> by_rank_;
  std::unordered_map<std::uint64_t, std::uint64_t> rank_;
};

inline std::uint64_t nr_rank(const NRNumbering& N, std::uint64_t k, std::uint64_t l) { return N.rank(k, l); }
inline Pair nr_unrank(const NRNumbering& N, std::uint64_t n) { return N.unrank(n); }

struct BoundsReport {
  std::string sequence;
  std::string bound;  // "c(kR_l+1)" or "(kR_l+1)F(kR_l+1)"
  std::uint64_t pairs_checked = 0;
  Rational max_ratio{0};  // max of N_R(k,l) / (kR_l+1)
  Pair argmax{0, 0};
};

/// Checks the applicable growth bound for every tabulated pair. A violation
/// would mean the table is wrong, since the bounds are theorems.
inline BoundsReport check_bounds(const NRNumbering& N) {
  const auto& R = N.sequence();
  BoundsReport rep;
  rep.sequence = R.name;
  rep.bound = R.kind == RSequence::Kind::Convergent ? "c(kR_l+1)" : "(kR_l+1)F(kR_l+1)";
  for (std::uint64_t n = 1; n <= N.size(); ++n) {
    const Pair p = N.unrank(n);
    const Rational base = N.value(p) + 1;
    Rational limit;
    if (R.kind == RSequence::Kind::Convergent) {
      limit = R.c * base;
    } else {
      const auto arg = static_cast<std::uint64_t>(boost::rational_cast<std::int64_t>(base));
      const bool exact = Rational(static_cast<std::int64_t>(arg)) == base;
      limit = base * R.F(exact ? arg : arg + 1);
    }
    const Rational rank(static_cast<std::int64_t>(n));
    if (rank > limit)
      throw BoundViolated(p, "N_R(" + std::to_string(p.first) + "," + std::to_string(p.second) + ") = " +
                                 std::to_string(n) + " exceeds " + rep.bound);
    const Rational ratio = rank / base;
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.argmax = p;
    }
    ++rep.pairs_checked;
  }
  return rep;
}

}  // namespace zlw

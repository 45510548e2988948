#pragma once

// Fuel-bounded big-step evaluation of programs.
//
// One fuel unit is charged per node application, plus one per iteration of
// rho and mu. Running out of budget, or producing a component above
// `value_cap`, ends evaluation with FuelExhausted; that is a statement about
// resources, never about the function. UndefinedProven is reported only with
// a finite witness: an oracle miss, an unresolvable library address, or a
// library arity mismatch, propagated through the domain rules of each
// operator (mu fails as soon as an inner call below the witness is undefined).

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "zlw/context.hpp"
#include "zlw/opgraph.hpp"

namespace zlw {

using Value = std::vector<std::uint64_t>;

struct Fuel {
  std::uint64_t budget = 10'000;
  std::uint64_t value_cap = std::numeric_limits<std::int64_t>::max();
};

struct EvalOutcome {
  enum class Kind : std::uint8_t { Defined, UndefinedProven, FuelExhausted };
  enum class Cause : std::uint8_t { None, Budget, ValueCap };

  Kind kind = Kind::UndefinedProven;
  Value value;
  std::uint64_t steps = 0;
  Cause cause = Cause::None;

  bool defined() const { return kind == Kind::Defined; }
  bool exhausted() const { return kind == Kind::FuelExhausted; }

  static EvalOutcome of(Value v) { return {Kind::Defined, std::move(v), 0, Cause::None}; }
  static EvalOutcome undefined() { return {Kind::UndefinedProven, {}, 0, Cause::None}; }
};

inline const char* kind_name(EvalOutcome::Kind k) {
  switch (k) {
    case EvalOutcome::Kind::Defined: return "Defined";
    case EvalOutcome::Kind::UndefinedProven: return "UndefinedProven";
    case EvalOutcome::Kind::FuelExhausted: return "FuelExhausted";
  }
  return "?";
}

class ArityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

/// Evaluation machine with an explicit value stack. Arguments and results
/// live in `stack_`, addressed by offset because the vector may grow.
class Machine {
 public:
  enum class Status : std::uint8_t { Ok, Undefined, Exhausted };

  Machine(const AdmissibleContext& ctx, const Fuel& fuel) : ctx_(ctx), fuel_(fuel) { stack_.reserve(64); }

  EvalOutcome run(const Term& t, std::span<const std::uint64_t> args) {
    steps_ = 0;
    cause_ = EvalOutcome::Cause::None;
    stack_.assign(args.begin(), args.end());
    const Status s = call(t, 0, 0, static_cast<std::uint32_t>(args.size()));
    EvalOutcome out;
    out.steps = steps_;
    switch (s) {
      case Status::Ok:
        out.kind = EvalOutcome::Kind::Defined;
        out.value.assign(stack_.begin() + static_cast<std::ptrdiff_t>(args.size()), stack_.end());
        break;
      case Status::Undefined: out.kind = EvalOutcome::Kind::UndefinedProven; break;
      case Status::Exhausted:
        out.kind = EvalOutcome::Kind::FuelExhausted;
        out.cause = cause_;
        break;
    }
    return out;
  }

  /// Single-result fast path for sweeps: avoids building an EvalOutcome.
  Status run_scalar(const Term& t, std::span<const std::uint64_t> args, std::uint64_t& result) {
    steps_ = 0;
    cause_ = EvalOutcome::Cause::None;
    stack_.assign(args.begin(), args.end());
    const Status s = call(t, 0, 0, static_cast<std::uint32_t>(args.size()));
    if (s == Status::Ok) result = stack_.back();
    return s;
  }

  std::uint64_t steps() const { return steps_; }

 private:
  bool charge() {
    if (steps_ >= fuel_.budget) {
      cause_ = EvalOutcome::Cause::Budget;
      return false;
    }
    ++steps_;
    return true;
  }

  Status fail(Status s, std::size_t keep) {
    stack_.resize(keep);
    return s;
  }

  Status lookup(const OracleTable& table, const TermNode& n, std::size_t arg, std::uint32_t m) {
    if (table.arity != n.arity) return Status::Undefined;
    key_.assign(stack_.begin() + static_cast<std::ptrdiff_t>(arg),
                stack_.begin() + static_cast<std::ptrdiff_t>(arg + m));
    auto it = table.entries.find(key_);
    if (it == table.entries.end()) return Status::Undefined;
    for (auto v : it->second) stack_.push_back(v);
    return Status::Ok;
  }

  // Applies node `i` of `t` to the m arguments at stack_[arg..arg+m) and
  // pushes its results. On failure the stack is restored to its entry size.
  Status call(const Term& t, std::uint32_t i, std::size_t arg, std::uint32_t m) {
    const std::size_t entry = stack_.size();
    if (!charge()) return Status::Exhausted;
    const TermNode& n = t.nodes[i];
    const std::uint32_t* kid = t.kids.data() + n.first_kid;
    switch (n.label) {
      case Label::Leaf:
        switch (n.leaf.kind) {
          case BasicFunc::Kind::Suc: {
            const std::uint64_t x = stack_[arg];
            if (x >= fuel_.value_cap) {
              cause_ = EvalOutcome::Cause::ValueCap;
              return Status::Exhausted;
            }
            stack_.push_back(x + 1);
            return Status::Ok;
          }
          case BasicFunc::Kind::One: stack_.push_back(1); return Status::Ok;
          case BasicFunc::Kind::Proj: stack_.push_back(stack_[arg + n.leaf.i - 1]); return Status::Ok;
          case BasicFunc::Kind::LibRef: {
            const LibraryEntry* e = ctx_.library(n.leaf.address);
            if (!e) return Status::Undefined;
            if (const Term* lt = std::get_if<Term>(e)) {
              if (lt->arity() != n.arity) return Status::Undefined;
              return call(*lt, 0, arg, m);
            }
            return lookup(std::get<OracleTable>(*e), n, arg, m);
          }
          case BasicFunc::Kind::OracleRef: {
            const OracleTable* table = ctx_.oracle(n.leaf.address);
            if (!table) return Status::Undefined;
            return lookup(*table, n, arg, m);
          }
        }
        return Status::Undefined;

      case Label::Iota: return call(t, kid[0], arg, m);

      case Label::Gamma: {
        const std::uint32_t k = t.nodes[kid[0]].arity.n;
        if (auto s = call(t, kid[0], arg, m); s != Status::Ok) return s;
        if (auto s = call(t, kid[1], entry, k); s != Status::Ok) return fail(s, entry);
        stack_.erase(stack_.begin() + static_cast<std::ptrdiff_t>(entry),
                     stack_.begin() + static_cast<std::ptrdiff_t>(entry + k));
        return Status::Ok;
      }

      case Label::Sigma:
        for (std::uint32_t j = 0; j < n.kid_count; ++j)
          if (auto s = call(t, kid[j], arg, m); s != Status::Ok) return fail(s, entry);
        return Status::Ok;

      case Label::Rho: {
        // h(x,1) = f(x); h(x,k+1) = g(x,k,h(x,k)).
        const std::uint32_t base_m = m - 1;
        const std::uint64_t y = stack_[arg + base_m];
        // frame: x_1..x_m, k, h
        for (std::uint32_t j = 0; j < base_m; ++j) stack_.push_back(stack_[arg + j]);
        const std::size_t frame = entry;
        stack_.push_back(1);
        if (auto s = call(t, kid[0], frame, base_m); s != Status::Ok) return fail(s, entry);
        for (std::uint64_t k = 1; k < y; ++k) {
          if (!charge()) return fail(Status::Exhausted, entry);
          if (auto s = call(t, kid[1], frame, base_m + 2); s != Status::Ok) return fail(s, entry);
          const std::uint64_t h = stack_.back();
          stack_.pop_back();
          stack_[frame + base_m] = k + 1;
          stack_[frame + base_m + 1] = h;
        }
        const std::uint64_t h = stack_[frame + base_m + 1];
        stack_.resize(entry);
        stack_.push_back(h);
        return Status::Ok;
      }

      case Label::Mu: {
        // least k with f(x,k) = 1, all f(x,j) for j < k defined.
        for (std::uint32_t j = 0; j < m; ++j) stack_.push_back(stack_[arg + j]);
        const std::size_t frame = entry;
        stack_.push_back(0);
        for (std::uint64_t k = 1;; ++k) {
          if (!charge()) return fail(Status::Exhausted, entry);
          if (k > fuel_.value_cap) {
            cause_ = EvalOutcome::Cause::ValueCap;
            return fail(Status::Exhausted, entry);
          }
          stack_[frame + m] = k;
          if (auto s = call(t, kid[0], frame, m + 1); s != Status::Ok) return fail(s, entry);
          const std::uint64_t r = stack_.back();
          stack_.pop_back();
          if (r == 1) {
            stack_.resize(entry);
            stack_.push_back(k);
            return Status::Ok;
          }
        }
      }
    }
    return Status::Undefined;
  }

  const AdmissibleContext& ctx_;
  Fuel fuel_;
  std::vector<std::uint64_t> stack_;
  std::vector<std::uint64_t> key_;
  std::uint64_t steps_ = 0;
  EvalOutcome::Cause cause_ = EvalOutcome::Cause::None;
};

inline const AdmissibleContext& empty_context() {
  static const AdmissibleContext ctx;
  return ctx;
}

}  // namespace detail

/// Evaluates a term on `args`. Throws ArityError if args.size() differs from
/// the term's argument count.
inline EvalOutcome eval(const Term& t, const Value& args, const Fuel& fuel = {},
                        const AdmissibleContext& ctx = detail::empty_context()) {
  if (args.size() != t.arity().m)
    throw ArityError("program takes " + std::to_string(t.arity().m) + " arguments, got " +
                     std::to_string(args.size()));
  for (auto a : args)
    if (a == 0) throw std::invalid_argument("arguments are positive integers");
  detail::Machine machine(ctx, fuel);
  return machine.run(t, args);
}

inline EvalOutcome eval(const Program& p, const Value& args, const Fuel& fuel = {},
                        const AdmissibleContext& ctx = detail::empty_context()) {
  return eval(to_term(p), args, fuel, ctx);
}

/// Rectangle lo_i <= x_i <= hi_i in (Z+)^m. A zero-dimensional box is the
/// single point (); a box with some lo > hi is empty.
struct Box {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;

  static Box cube(std::uint32_t dims, std::uint64_t hi) {
    return Box{std::vector<std::pair<std::uint64_t, std::uint64_t>>(dims, {1, hi})};
  }

  std::uint32_t dims() const { return static_cast<std::uint32_t>(ranges.size()); }

  std::uint64_t size() const {
    std::uint64_t s = 1;
    for (auto [lo, hi] : ranges) s *= hi >= lo ? hi - lo + 1 : 0;
    return s;
  }

  /// Points in lexicographic order (last coordinate fastest).
  std::vector<Value> points() const {
    std::vector<Value> out;
    if (size() == 0) return out;
    Value p;
    for (auto [lo, hi] : ranges) p.push_back(lo);
    while (true) {
      out.push_back(p);
      std::size_t d = ranges.size();
      while (d > 0) {
        --d;
        if (p[d] < ranges[d].second) {
          ++p[d];
          break;
        }
        p[d] = ranges[d].first;
        if (d == 0) return out;
      }
      if (ranges.empty()) return out;
    }
  }

  friend bool operator==(const Box&, const Box&) = default;
};

/// Finite partial-function table: one outcome per box point, in
/// lexicographic point order.
struct FunctionTable {
  Arity arity{};
  Box box;
  std::vector<EvalOutcome> outcomes;

  std::size_t defined_count() const {
    std::size_t c = 0;
    for (const auto& o : outcomes) c += o.defined();
    return c;
  }

  /// Agreement on the box: equal values where defined, undefined elsewhere.
  bool agrees_with(const FunctionTable& other) const {
    if (outcomes.size() != other.outcomes.size()) return false;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      if (outcomes[i].defined() != other.outcomes[i].defined()) return false;
      if (outcomes[i].defined() && outcomes[i].value != other.outcomes[i].value) return false;
    }
    return true;
  }
};

/// Tabulates a term over a box.
inline FunctionTable denote(const Term& t, const Box& box, const Fuel& fuel,
                            const AdmissibleContext& ctx = detail::empty_context()) {
  if (box.dims() != t.arity().m)
    throw ArityError("box has " + std::to_string(box.dims()) + " dimensions, program takes " +
                     std::to_string(t.arity().m));
  FunctionTable table{t.arity(), box, {}};
  if (box.size() == 0) return table;
  detail::Machine machine(ctx, fuel);
  for (const auto& p : box.points()) table.outcomes.push_back(machine.run(t, p));
  return table;
}

inline FunctionTable denote(const Program& p, const Box& box, const Fuel& fuel,
                            const AdmissibleContext& ctx = detail::empty_context()) {
  return denote(to_term(p), box, fuel, ctx);
}

/// Table of an arithmetic formula, for building behaviors and oracles.
template <class F>
FunctionTable tabulate(Arity arity, const Box& box, F&& formula) {
  FunctionTable table{arity, box, {}};
  for (const auto& p : box.points()) table.outcomes.push_back(EvalOutcome::of(formula(p)));
  return table;
}

}  // namespace zlw

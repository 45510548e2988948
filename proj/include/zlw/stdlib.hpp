#pragma once

// Arithmetic on positive integers written with the basic operators and
// elementary leaves only, and the standard library context built from them.

#include "zlw/build.hpp"
#include "zlw/context.hpp"

namespace zlw::stdlib {

using namespace zlw::build;

/// (x,y) -> x+y-1: h(x,1) = x, h(x,k+1) = h(x,k)+1.
inline Term add_minus_one() { return recursion(pr(1, 1), compose(pr(3, 3), suc())); }

/// (x,y) -> x+y: h(x,1) = x+1, h(x,k+1) = h(x,k)+1.
inline Term add() { return recursion(suc(), compose(pr(3, 3), suc())); }

/// (x,y) -> xy - y + 1: iterating add_minus_one with x fixed.
inline Term mul_analogue() {
  return recursion(pr(1, 1), compose(juxtapose({pr(3, 1), pr(3, 3)}), add_minus_one()));
}

/// (x,y) -> xy.
inline Term mul() { return recursion(pr(1, 1), compose(juxtapose({pr(3, 1), pr(3, 3)}), add())); }

/// (x,y) -> x^y.
inline Term pow() { return recursion(pr(1, 1), compose(juxtapose({pr(3, 1), pr(3, 3)}), mul())); }

inline Term twice(const Term& binary) { return compose(juxtapose({pr(1, 1), pr(1, 1)}), binary); }

/// x -> 2x.
inline Term doubling() { return twice(add()); }

/// x -> x^2.
inline Term square() { return twice(mul()); }

/// x -> 2^x: h(1) = 2, h(k+1) = 2 h(k).
inline Term pow2() { return recursion(compose(one(0), suc()), compose(pr(2, 2), doubling())); }

/// x -> x-1 (1 -> 1): h(1) = 1, h(k+1) = k.
inline Term pred() { return recursion(one(0), pr(2, 1)); }

/// Library order fixes the addresses: pow2=1, double=2, square=3, add=4,
/// mul=5, pow=6. Every entry is a self-contained program, so the set of
/// computable functions is unchanged; only description lengths shrink.
inline AdmissibleContext standard_context() {
  AdmissibleContext ctx;
  ctx.add_term(pow2(), "pow2");
  ctx.add_term(doubling(), "double");
  ctx.add_term(square(), "square");
  ctx.add_term(add(), "add");
  ctx.add_term(mul(), "mul");
  ctx.add_term(pow(), "pow");
  return ctx;
}

}  // namespace zlw::stdlib

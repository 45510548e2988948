#pragma once

// Combinators for writing programs by hand. Each returns a validated Term.

#include <initializer_list>
#include <vector>

#include "zlw/opgraph.hpp"

namespace zlw::build {

namespace detail {

inline Term combine(Label label, Arity arity, std::initializer_list<const Term*> kids) {
  Term t;
  auto root = t.push(label, BasicFunc{}, arity, static_cast<std::uint32_t>(kids.size()));
  std::uint32_t k = 0;
  for (const Term* kid : kids) zlw::detail::append_subtree(*kid, 0, t, t.nodes[root].first_kid + k++, true);
  if (auto v = validate(t)) throw ValidationError(*v);
  return t;
}

}  // namespace detail

inline Term leaf(BasicFunc f, Arity arity) {
  Term t;
  t.push(Label::Leaf, f, arity, 0);
  if (auto v = validate(t)) throw ValidationError(*v);
  return t;
}

inline Term suc() { return leaf(BasicFunc::suc(), {1, 1}); }
inline Term one(std::uint32_t m) { return leaf(BasicFunc::one(m), {m, 1}); }
inline Term pr(std::uint32_t m, std::uint32_t i) { return leaf(BasicFunc::proj(m, i), {m, 1}); }
inline Term lib(std::uint64_t address, Arity arity) { return leaf(BasicFunc::lib(address), arity); }
inline Term oracle(std::uint64_t id, Arity arity) { return leaf(BasicFunc::oracle(id), arity); }

/// g after f.
inline Term compose(const Term& f, const Term& g) {
  return detail::combine(Label::Gamma, {f.arity().m, g.arity().n}, {&f, &g});
}

/// Composes left to right: then(f, g, h) = h after g after f.
template <class... Rest>
Term then(const Term& f, const Term& g, const Rest&... rest) {
  if constexpr (sizeof...(rest) == 0) {
    return compose(f, g);
  } else {
    return then(compose(f, g), rest...);
  }
}

inline Term juxtapose(const std::vector<Term>& parts) {
  Term t;
  std::uint32_t n = 0;
  for (const auto& p : parts) n += p.arity().n;
  const std::uint32_t m = parts.empty() ? 0 : parts.front().arity().m;
  auto root = t.push(Label::Sigma, BasicFunc{}, {m, n}, static_cast<std::uint32_t>(parts.size()));
  for (std::uint32_t k = 0; k < parts.size(); ++k)
    zlw::detail::append_subtree(parts[k], 0, t, t.nodes[root].first_kid + k, true);
  if (auto v = validate(t)) throw ValidationError(*v);
  return t;
}

/// h(x,1) = base(x), h(x,k+1) = step(x,k,h(x,k)).
inline Term recursion(const Term& base, const Term& step) {
  return detail::combine(Label::Rho, {base.arity().m + 1, 1}, {&base, &step});
}

/// Least k with f(x,k) = 1.
inline Term minimize(const Term& f) {
  return detail::combine(Label::Mu, {f.arity().m == 0 ? 0 : f.arity().m - 1, 1}, {&f});
}

inline Term identity(const Term& f) { return detail::combine(Label::Iota, f.arity(), {&f}); }

}  // namespace zlw::build

#pragma once

// Random well-formed programs for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "zlw/build.hpp"

namespace zlw::proptest {

class RandomPrograms {
 public:
  explicit RandomPrograms(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return rng_() % n; }

  Arity arity() {
    const std::uint32_t m = static_cast<std::uint32_t>(below(4));
    const std::uint32_t n = below(4) == 0 ? static_cast<std::uint32_t>(below(3)) : 1;
    return {m, n};
  }

  Term term(Arity a, int depth) {
    using namespace zlw::build;
    if (a.n != 1) return wide(a, depth);
    if (depth <= 0 || below(3) == 0) return leaf(a);
    switch (below(6)) {
      case 0: {
        const auto k = static_cast<std::uint32_t>(below(3));
        return compose(term({a.m, k}, depth - 1), term({k, 1}, depth - 1));
      }
      case 1:
        if (a.m >= 1) return recursion(term({a.m - 1, 1}, depth - 1), term({a.m + 1, 1}, depth - 1));
        break;
      case 2: return minimize(term({a.m + 1, 1}, depth - 1));
      case 3: return identity(term(a, depth - 1));
      case 4: return juxtapose({term({a.m, 1}, depth - 1)});
      default: break;
    }
    return leaf(a);
  }

  Term program(int depth) { return term(arity(), depth); }

 private:
  Term leaf(Arity a) {
    using namespace zlw::build;
    const auto choice = below(8);
    if (a.m == 1 && choice < 2) return suc();
    if (a.m >= 1 && choice < 5) return pr(a.m, 1 + static_cast<std::uint32_t>(below(a.m)));
    if (choice == 7) return lib(1 + below(3), a);
    return one(a.m);
  }

  Term wide(Arity a, int depth) {
    using namespace zlw::build;
    if (a.n == 0 || depth <= 0) {
      if (a.n == 0) return lib(1 + below(3), a);
      std::vector<Term> parts;
      for (std::uint32_t j = 0; j < a.n; ++j) parts.push_back(leaf({a.m, 1}));
      return juxtapose(parts);
    }
    switch (below(3)) {
      case 0: {
        const auto k = static_cast<std::uint32_t>(below(3));
        return compose(term({a.m, k}, depth - 1), term({k, a.n}, depth - 1));
      }
      case 1: return identity(term(a, depth - 1));
      default: {
        std::vector<Term> parts;
        std::uint32_t left = a.n;
        while (left > 0) {
          const auto take = 1 + static_cast<std::uint32_t>(below(left));
          parts.push_back(term({a.m, take}, depth - 1));
          left -= take;
        }
        return juxtapose(parts);
      }
    }
  }

  std::mt19937_64 rng_;
};

}  // namespace zlw::proptest

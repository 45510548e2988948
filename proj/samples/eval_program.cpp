// Builds x + y - 1 by primitive recursion, prints it in the text format and
// as a bit code, then evaluates it and a library-backed power of two.

#include <iostream>

#include "zlw/codec.hpp"
#include "zlw/evaluator.hpp"
#include "zlw/stdlib.hpp"
#include "zlw/text_format.hpp"

int main() {
  using namespace zlw;
  using namespace zlw::build;

  // rho(pr(1,1), pr(3,3) ; suc): f(x,1) = x, f(x,y+1) = f(x,y) + 1.
  const Term add = recursion(pr(1, 1), compose(pr(3, 3), suc()));
  std::cout << serialize(to_program(add)) << '\n';
  std::cout << "code: " << encode(add).str() << " (" << encode(add).length() << " bits)\n";

  const auto r = eval(add, Value{2, 3}, Fuel{1000});
  std::cout << "add(2,3) = " << r.value.at(0) << " in " << r.steps << " steps\n";

  // lib 1 is pow2 in the standard context.
  const auto ctx = stdlib::standard_context();
  const Term two = compose(one(0), lib(1, {1, 1}));
  const auto p = eval(compose(two, lib(1, {1, 1})), Value{}, Fuel{1'000'000}, ctx);
  std::cout << "pow2(pow2(1)) = " << p.value.at(0) << '\n';

  // A search that never succeeds runs out of fuel instead of looping.
  const auto stuck = eval(minimize(suc()), Value{}, Fuel{50});
  std::cout << "mu(suc): " << kind_name(stuck.kind) << '\n';
}

// Truncated Levin mass over the standard context, a sampled corpus, and a
// power-law fit of its rank-frequency curve.

#include <cstdio>

#include "zlw/levin.hpp"
#include "zlw/stdlib.hpp"
#include "zlw/zipf.hpp"

int main() {
  using namespace zlw;

  const auto table = mass_table(stdlib::standard_context(), 24, Fuel{10000});
  std::printf("support %zu, total mass %.6f\n", table.entries.size(),
              static_cast<double>(table.total_numerator()) / static_cast<double>(1u << 24));
  for (const auto& [x, e] : table.top(8).entries)
    std::printf("  m(%llu) = %llu / 2^24, shortest program %u bits\n", static_cast<unsigned long long>(x),
                static_cast<unsigned long long>(e.numerator), e.min_bits);

  const auto rc = rank_frequency(corpus_from_counts(sample(table, 100000, 42)));
  std::printf("corpus: %zu distinct values\n", rc.size());
  for (auto m : {FitMethod::LeastSquares, FitMethod::MaximumLikelihood}) {
    const auto fit = fit_power_law(rc, m);
    std::printf("  %s exponent %.3f over ranks %llu..%llu\n", method_name(m), fit.exponent,
                static_cast<unsigned long long>(fit.r_min), static_cast<unsigned long long>(fit.r_max));
  }
}

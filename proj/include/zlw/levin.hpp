#pragma once

// Truncated Levin distribution over positive integers.
//
// m̂(x) sums 2^-|p| over constant programs p with |p| <= max_bits that print
// x within the fuel budget. Masses are stored exactly as numerators over
// 2^max_bits. A program of arity other than (0,1) prints no integer, and
// the K̂ series sum 1/K(x) diverges, so only prefix code lengths define
// masses.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "zlw/sweep.hpp"

namespace zlw {

class EmptyTable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct MassEntry {
  std::uint64_t numerator = 0;  // mass = numerator / 2^max_bits
  unsigned min_bits = 0;        // shortest printing program
  std::uint64_t programs = 0;   // programs printing the value
};

class TableFormatError : public std::runtime_error {
 public:
  TableFormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

struct MassTable {
  unsigned max_bits = 0;
  Fuel fuel{};
  std::map<std::uint64_t, MassEntry> entries;

  /// Mass as numerator over 2^max_bits; 0 outside the support.
  std::uint64_t numerator(std::uint64_t x) const {
    auto it = entries.find(x);
    return it == entries.end() ? 0 : it->second.numerator;
  }

  double mass(std::uint64_t x) const {
    return static_cast<double>(numerator(x)) / static_cast<double>(std::uint64_t{1} << max_bits);
  }

  /// Sum of numerators, exact.
  unsigned __int128 total_numerator() const {
    unsigned __int128 s = 0;
    for (const auto& [x, e] : entries) s += e.numerator;
    return s;
  }

  bool total_at_most_one() const { return total_numerator() <= (static_cast<unsigned __int128>(1) << max_bits); }

  /// Exact comparison m̂_this(x) <= m̂_other(x) for every x.
  bool entrywise_le(const MassTable& other) const {
    for (const auto& [x, e] : entries) {
      const unsigned __int128 a = static_cast<unsigned __int128>(e.numerator) << other.max_bits;
      const unsigned __int128 b = static_cast<unsigned __int128>(other.numerator(x)) << max_bits;
      if (a > b) return false;
    }
    return true;
  }

  /// Entries by decreasing mass, ties by increasing x.
  std::vector<std::pair<std::uint64_t, MassEntry>> ranked() const {
    std::vector<std::pair<std::uint64_t, MassEntry>> v(entries.begin(), entries.end());
    std::stable_sort(v.begin(), v.end(),
                     [](const auto& a, const auto& b) { return a.second.numerator > b.second.numerator; });
    return v;
  }

  /// Restriction to the `n` heaviest entries.
  MassTable top(std::size_t n) const {
    MassTable t{max_bits, fuel, {}};
    auto r = ranked();
    for (std::size_t i = 0; i < r.size() && i < n; ++i) t.entries.insert(r[i]);
    return t;
  }

  /// Restriction to entries whose key satisfies `keep`.
  template <class Pred>
  MassTable restrict(Pred keep) const {
    MassTable t{max_bits, fuel, {}};
    for (const auto& kv : entries)
      if (keep(kv.first)) t.entries.insert(kv);
    return t;
  }
};

inline MassTable mass_table(const ConstantSweep& sweep) {
  MassTable t{sweep.max_bits(), sweep.options().fuel, {}};
  for (const auto& [x, info] : sweep.values()) t.entries[x] = {info.mass, info.witness.bits, info.programs};
  return t;
}

inline MassTable mass_table(const AdmissibleContext& ctx, unsigned max_bits, const Fuel& fuel, unsigned workers = 1) {
  return mass_table(ConstantSweep(ctx, {max_bits, fuel, workers}));
}

inline constexpr const char* kMassHeader = "x\tnumerator\tlog2_denominator\tmass\tmin_bits\tprograms";

/// Plot-ready TSV, one row per value in increasing order. The mass column is
/// informative; numerator and log2_denominator are the exact value.
inline void write_mass_table(std::ostream& out, const MassTable& t) {
  out << kMassHeader << '\n';
  char mass[32];
  for (const auto& [x, e] : t.entries) {
    std::snprintf(mass, sizeof mass, "%.17g", t.mass(x));
    out << x << '\t' << e.numerator << '\t' << t.max_bits << '\t' << mass << '\t' << e.min_bits << '\t' << e.programs
        << '\n';
  }
}

/// Reads write_mass_table output. Fuel is not recorded in the file.
inline MassTable read_mass_table(std::istream& in) {
  MassTable t;
  std::string line;
  std::size_t n = 0;
  bool have_bits = false;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (n == 1) {
      if (line != kMassHeader) throw TableFormatError(n, "expected header '" + std::string(kMassHeader) + "'");
      continue;
    }
    if (line.empty()) continue;
    std::istringstream row(line);
    std::uint64_t x = 0, num = 0, programs = 0;
    unsigned bits = 0, min_bits = 0;
    std::string mass;
    if (!(row >> x >> num >> bits >> mass >> min_bits >> programs) || x == 0)
      throw TableFormatError(n, "expected six tab-separated fields with a positive x");
    if (bits > 62) throw TableFormatError(n, "log2_denominator above 62");
    if (have_bits && bits != t.max_bits) throw TableFormatError(n, "rows disagree on log2_denominator");
    have_bits = true;
    t.max_bits = bits;
    if (!t.entries.emplace(x, MassEntry{num, min_bits, programs}).second)
      throw TableFormatError(n, "value " + std::to_string(x) + " listed twice");
  }
  if (n == 0) throw TableFormatError(1, "empty file");
  return t;
}

/// Identifier of the sampling procedure, written into output metadata.
inline constexpr const char* kSamplerId = "mt19937_64/rejection-uniform/inverse-cdf-v1";

/// Uniform integer in [0, n) from 64-bit draws by rejection, identical on
/// every platform (unlike std::uniform_int_distribution).
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t limit = n * (UINT64_MAX / n);
  for (;;) {
    const std::uint64_t u = gen();
    if (u < limit) return u % n;
  }
}

/// n draws from the table renormalized over its support; returns counts
/// per integer.
inline std::map<std::uint64_t, std::uint64_t> sample(const MassTable& table, std::uint64_t n, std::uint64_t seed) {
  if (table.entries.empty()) throw EmptyTable("cannot sample from an empty mass table");
  if (n == 0) throw std::invalid_argument("sample size must be positive");
  std::vector<std::uint64_t> keys;
  std::vector<std::uint64_t> cumulative;
  std::uint64_t total = 0;
  for (const auto& [x, e] : table.entries) {
    if (e.numerator == 0) continue;
    total += e.numerator;
    keys.push_back(x);
    cumulative.push_back(total);
  }
  if (total == 0) throw EmptyTable("mass table has no positive entries");
  std::mt19937_64 gen(seed);
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t u = uniform_below(gen, total);
    const auto pos = std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
    ++counts[keys[static_cast<std::size_t>(pos)]];
  }
  return counts;
}

}  // namespace zlw

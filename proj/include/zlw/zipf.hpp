#pragma once

// Rank-frequency analysis of token corpora: ranking, power-law fits,
// deviation scores, and the numeral profile.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "zlw/levin.hpp"

namespace zlw {

class EmptyCorpus : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class RangeTooSmall : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class DegenerateCounts : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class NoNumeralsFound : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CorpusFormatError : public std::runtime_error {
 public:
  CorpusFormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

using Corpus = std::map<std::string, std::uint64_t>;

/// Reads `token<TAB>count` lines. Blank lines are skipped; anything else
/// that is not a token, one tab and a positive integer is an error.
/// Repeated tokens add up.
inline Corpus read_corpus(std::istream& in) {
  Corpus c;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw CorpusFormatError(n, "expected token<TAB>count");
    if (tab == 0) throw CorpusFormatError(n, "empty token");
    const std::string token = line.substr(0, tab);
    const std::string count = line.substr(tab + 1);
    if (count.empty() || count.find_first_not_of("0123456789") != std::string::npos)
      throw CorpusFormatError(n, "count '" + count + "' is not a positive integer");
    std::uint64_t v = 0;
    try {
      v = std::stoull(count);
    } catch (const std::out_of_range&) {
      throw CorpusFormatError(n, "count '" + count + "' is too large");
    }
    if (v == 0) throw CorpusFormatError(n, "count must be positive");
    c[token] += v;
  }
  return c;
}

inline Corpus read_corpus_string(const std::string& text) {
  std::istringstream in(text);
  return read_corpus(in);
}

inline void write_corpus(std::ostream& out, const Corpus& c) {
  for (const auto& [token, count] : c) out << token << '\t' << count << '\n';
}

/// Tokens are decimal integers.
inline Corpus corpus_from_counts(const std::map<std::uint64_t, std::uint64_t>& counts) {
  Corpus c;
  for (const auto& [x, n] : counts)
    if (n > 0) c[std::to_string(x)] = n;
  return c;
}

struct RankedToken {
  std::string token;
  std::uint64_t count;
  std::uint64_t rank;
};

struct RankedCorpus {
  std::vector<RankedToken> tokens;
  std::uint64_t total = 0;

  std::uint64_t size() const { return tokens.size(); }
};

/// Ranks by decreasing count; equal counts are ordered by token, bytewise.
inline RankedCorpus rank_frequency(const Corpus& corpus) {
  if (corpus.empty()) throw EmptyCorpus("corpus has no tokens");
  RankedCorpus r;
  for (const auto& [token, count] : corpus) {
    r.tokens.push_back({token, count, 0});
    r.total += count;
  }
  std::stable_sort(r.tokens.begin(), r.tokens.end(),
                   [](const RankedToken& a, const RankedToken& b) { return a.count > b.count; });
  for (std::size_t i = 0; i < r.tokens.size(); ++i) r.tokens[i].rank = i + 1;
  return r;
}

enum class FitMethod { LeastSquares, MaximumLikelihood };

inline const char* method_name(FitMethod m) { return m == FitMethod::LeastSquares ? "LS-loglog" : "discrete-MLE"; }

inline FitMethod parse_method(const std::string& s) {
  if (s == "ls" || s == "LS" || s == "LS-loglog") return FitMethod::LeastSquares;
  if (s == "mle" || s == "MLE" || s == "discrete-MLE") return FitMethod::MaximumLikelihood;
  throw std::invalid_argument("unknown fit method '" + s + "' (expected ls or mle)");
}

struct RankRange {
  std::uint64_t lo = 1;
  std::uint64_t hi = 0;  // 0: through the last rank
};

struct PowerLawFit {
  double exponent = 0;
  FitMethod method = FitMethod::LeastSquares;
  std::uint64_t r_min = 1;
  std::uint64_t r_max = 1;
  /// Fitted log count at rank 1: log c_r ~ log_scale - exponent * log r.
  double log_scale = 0;
  /// Kolmogorov-Smirnov distance between the empirical rank distribution
  /// and the fitted law over the range.
  double ks = 0;
};

namespace detail {

inline double ks_distance(const RankedCorpus& rc, std::uint64_t lo, std::uint64_t hi, double s) {
  double z = 0, n = 0;
  for (std::uint64_t r = lo; r <= hi; ++r) {
    z += std::pow(static_cast<double>(r), -s);
    n += static_cast<double>(rc.tokens[r - 1].count);
  }
  double emp = 0, model = 0, d = 0;
  for (std::uint64_t r = lo; r <= hi; ++r) {
    emp += static_cast<double>(rc.tokens[r - 1].count) / n;
    model += std::pow(static_cast<double>(r), -s) / z;
    d = std::max(d, std::abs(emp - model));
  }
  return d;
}

}  // namespace detail

/// Fits c_r ~ r^-s over a rank range. LS regresses log count on log rank.
/// MLE treats every occurrence as a draw of its rank from the truncated
/// discrete law P(r) = r^-s / sum_{lo..hi} q^-s and solves the score
/// equation by bisection.
inline PowerLawFit fit_power_law(const RankedCorpus& rc, FitMethod method, RankRange range = {}) {
  const std::uint64_t hi = range.hi == 0 ? rc.size() : range.hi;
  const std::uint64_t lo = range.lo;
  if (lo < 1 || hi > rc.size() || lo > hi || hi - lo + 1 < 10)
    throw RangeTooSmall("fit range must hold at least 10 ranks inside the corpus (corpus has " +
                        std::to_string(rc.size()) + ")");
  bool all_equal = true;
  for (std::uint64_t r = lo + 1; r <= hi; ++r) all_equal = all_equal && rc.tokens[r - 1].count == rc.tokens[lo - 1].count;
  if (all_equal) throw DegenerateCounts("all counts in the fit range are equal");

  PowerLawFit fit;
  fit.method = method;
  fit.r_min = lo;
  fit.r_max = hi;
  if (method == FitMethod::LeastSquares) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(hi - lo + 1);
    for (std::uint64_t r = lo; r <= hi; ++r) {
      const double x = std::log(static_cast<double>(r));
      const double y = std::log(static_cast<double>(rc.tokens[r - 1].count));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.exponent = -slope;
    fit.log_scale = (sy - slope * sx) / n;
  } else {
    double n = 0, sum_log = 0;
    for (std::uint64_t r = lo; r <= hi; ++r) {
      const double c = static_cast<double>(rc.tokens[r - 1].count);
      n += c;
      sum_log += c * std::log(static_cast<double>(r));
    }
    const double target = sum_log / n;
    // Expected log rank under exponent s; strictly decreasing in s.
    auto expected_log = [&](double s) {
      double z = 0, m = 0;
      for (std::uint64_t r = lo; r <= hi; ++r) {
        const double w = std::pow(static_cast<double>(r), -s);
        z += w;
        m += w * std::log(static_cast<double>(r));
      }
      return m / z;
    };
    auto score = [&](double s) { return expected_log(s) - target; };
    double a = -10, b = 20;
    if (score(a) <= 0) {
      fit.exponent = a;
    } else if (score(b) >= 0) {
      fit.exponent = b;
    } else {
      auto [x0, x1] = boost::math::tools::bisect(score, a, b, boost::math::tools::eps_tolerance<double>(50));
      fit.exponent = 0.5 * (x0 + x1);
    }
    double z = 0;
    for (std::uint64_t r = lo; r <= hi; ++r) z += std::pow(static_cast<double>(r), -fit.exponent);
    fit.log_scale = std::log(n / z);
  }
  fit.ks = detail::ks_distance(rc, lo, hi, fit.exponent);
  return fit;
}

struct ZipfDeviation {
  double max_abs = 0;
  double mean_abs = 0;
};

/// Absolute log residuals of the counts from the fitted law over the fit
/// range.
inline ZipfDeviation zipf_deviation(const RankedCorpus& rc, const PowerLawFit& fit) {
  ZipfDeviation d;
  if (fit.r_max > rc.size() || fit.r_min < 1 || fit.r_min > fit.r_max)
    throw std::invalid_argument("fit range lies outside the corpus");
  for (std::uint64_t r = fit.r_min; r <= fit.r_max; ++r) {
    const double predicted = fit.log_scale - fit.exponent * std::log(static_cast<double>(r));
    const double res = std::abs(std::log(static_cast<double>(rc.tokens[r - 1].count)) - predicted);
    d.max_abs = std::max(d.max_abs, res);
    d.mean_abs += res;
  }
  d.mean_abs /= static_cast<double>(fit.r_max - fit.r_min + 1);
  return d;
}

/// Kendall tau-b of two equally long samples.
inline double kendall_tau_b(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("samples differ in length");
  long double concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double da = a[i] - a[j], db = b[i] - b[j];
      if (da == 0 && db == 0) continue;
      if (da == 0) {
        ++ties_a;
      } else if (db == 0) {
        ++ties_b;
      } else if ((da > 0) == (db > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  const long double denom = std::sqrt((concordant + discordant + ties_a) * (concordant + discordant + ties_b));
  return denom == 0 ? 0.0 : static_cast<double>((concordant - discordant) / denom);
}

struct NumeralRow {
  std::string token;
  std::uint64_t value;
  std::uint64_t count;
  std::uint64_t rank;
  std::uint64_t mass_numerator;  // over 2^table.max_bits
  std::optional<unsigned> k_bits;
  bool peak;
};

struct NumeralReport {
  double peak_factor;
  std::vector<NumeralRow> rows;  // by integer value
  std::vector<std::uint64_t> peaks;
  /// Kendall tau-b between corpus count and simplicity (-K̂ bits) over
  /// numerals that have a K̂ value.
  std::optional<double> tau;
  std::size_t compared = 0;
};

/// Pairs each numeral token's corpus frequency with m̂ and K̂ bits. A numeral
/// n is a peak when its count is positive and at least `peak_factor` times
/// the counts of n-1 and n+1 (a numeral absent from the corpus counts 0).
inline NumeralReport numeral_profile(const RankedCorpus& rc, const std::map<std::string, std::uint64_t>& numerals,
                                     const MassTable& table, double peak_factor = 2.0) {
  NumeralReport rep;
  rep.peak_factor = peak_factor;
  std::map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> by_value;  // value -> (count, rank)
  std::map<std::uint64_t, std::string> token_of;
  for (const auto& t : rc.tokens) {
    auto it = numerals.find(t.token);
    if (it == numerals.end()) continue;
    auto& slot = by_value[it->second];
    slot.first += t.count;
    if (slot.second == 0 || t.rank < slot.second) slot.second = t.rank;
    token_of.try_emplace(it->second, t.token);
  }
  if (by_value.empty()) throw NoNumeralsFound("no corpus token is listed in the numeral map");
  auto count_of = [&](std::uint64_t v) -> std::uint64_t {
    auto it = by_value.find(v);
    return it == by_value.end() ? 0 : it->second.first;
  };
  std::vector<double> freq, simplicity;
  for (const auto& [v, cr] : by_value) {
    const auto [count, rank] = cr;
    const std::uint64_t left = v > 1 ? count_of(v - 1) : 0;
    const std::uint64_t right = count_of(v + 1);
    const double need = peak_factor * static_cast<double>(std::max(left, right));
    const bool peak = count > std::max(left, right) && static_cast<double>(count) >= need;
    NumeralRow row{token_of[v], v, count, rank, table.numerator(v), std::nullopt, peak};
    if (auto it = table.entries.find(v); it != table.entries.end()) {
      row.k_bits = it->second.min_bits;
      freq.push_back(static_cast<double>(count));
      simplicity.push_back(-static_cast<double>(it->second.min_bits));
    }
    if (peak) rep.peaks.push_back(v);
    rep.rows.push_back(std::move(row));
  }
  rep.compared = freq.size();
  if (freq.size() >= 2) rep.tau = kendall_tau_b(freq, simplicity);
  return rep;
}

}  // namespace zlw

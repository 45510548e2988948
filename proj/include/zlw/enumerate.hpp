#pragma once

// Shortlex enumeration of the code space.
//
// Codes of one exact length are produced by a depth-first walk of the
// decoder's choice tree, taking branches in codeword order, which yields
// them lexicographically. Lengths are visited in increasing order, so the
// concatenated stream is shortlex and its positions are the program ranks.

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "zlw/codec.hpp"
#include "zlw/parallel.hpp"

namespace zlw {

class RangeExceeded : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

namespace detail {

/// Depth-first generator of all codes with an exact length and a fixed
/// prefix. `visit(bits, term)` sees each complete code once, in
/// lexicographic order.
template <class Visit>
class CodeWalker {
 public:
  CodeWalker(unsigned length, std::span<const std::uint8_t> prefix, Visit& visit)
      : length_(length), prefix_(prefix), visit_(visit) {
    bits_.reserve(length + 8);
  }

  void run() {
    for (std::uint64_t vm = 1;; ++vm) {
      const unsigned lm = codec::int_length(vm);
      if (lm + 1 + 1 > length_) break;
      if (!push_int(vm)) continue;
      for (std::uint64_t vn = 1;; ++vn) {
        const unsigned ln = codec::int_length(vn);
        if (bits_.size() + ln > length_) break;
        const Arity root{static_cast<std::uint32_t>(vm - 1), static_cast<std::uint32_t>(codec::int_to_arity(vn))};
        if (bits_.size() + ln + codec::min_term_bits(root) > length_) continue;
        if (!push_int(vn)) continue;
        term_.nodes.clear();
        term_.kids.clear();
        push_task(root, -1);
        dfs();
        pop_task();
        pop_bits(ln);
      }
      pop_bits(lm);
    }
  }

 private:
  struct Task {
    Arity arity;
    std::int64_t slot;
  };

  bool push_bits(std::uint64_t v, unsigned len) {
    for (unsigned i = len; i-- > 0;) {
      const std::uint8_t b = (v >> i) & 1u;
      if (bits_.size() < prefix_.size() && prefix_[bits_.size()] != b) {
        pop_bits(len - 1 - i);
        return false;
      }
      bits_.push_back(b);
    }
    return true;
  }

  bool push_int(std::uint64_t v) {
    const unsigned l = 63u - static_cast<unsigned>(__builtin_clzll(v));
    const std::uint64_t ones = (l == 0) ? 0 : ((std::uint64_t{1} << l) - 1);
    if (!push_bits(ones, l)) return false;
    if (!push_bits(0, 1)) {
      pop_bits(l);
      return false;
    }
    if (!push_bits(v, l)) {
      pop_bits(l + 1);
      return false;
    }
    return true;
  }

  void pop_bits(unsigned len) { bits_.resize(bits_.size() - len); }

  void push_task(Arity a, std::int64_t slot) {
    tasks_.push_back({a, slot});
    pending_ += codec::min_term_bits(a);
  }
  void pop_task() {
    pending_ -= codec::min_term_bits(tasks_.back().arity);
    tasks_.pop_back();
  }

  bool fits(unsigned extra) const { return bits_.size() + extra + pending_ <= length_; }

  std::uint32_t place(const Task& t, Label label, BasicFunc leaf, std::uint32_t kids) {
    auto id = term_.push(label, leaf, t.arity, kids);
    if (t.slot >= 0) term_.kids[static_cast<std::size_t>(t.slot)] = id;
    return id;
  }

  void unplace(std::uint32_t id) {
    term_.kids.resize(term_.nodes[id].first_kid);
    term_.nodes.pop_back();
  }

  void leaf_then_dfs(const Task& t, BasicFunc leaf) {
    auto id = place(t, Label::Leaf, leaf, 0);
    dfs();
    unplace(id);
  }

  // Children are pushed in reverse so the first child is decoded first.
  void node_then_dfs(const Task& t, Label label, std::span<const Arity> kids) {
    auto id = place(t, label, {}, static_cast<std::uint32_t>(kids.size()));
    const std::uint32_t base = term_.nodes[id].first_kid;
    for (std::size_t k = kids.size(); k-- > 0;) push_task(kids[k], base + static_cast<std::int64_t>(k));
    if (bits_.size() + pending_ <= length_) dfs();
    for (std::size_t k = 0; k < kids.size(); ++k) pop_task();
    unplace(id);
  }

  void sigma_parts(const Task& t, std::uint32_t count, std::uint64_t remaining, std::vector<Arity>& parts) {
    if (parts.size() + 1 == count) {
      parts.push_back({t.arity.m, static_cast<std::uint32_t>(remaining)});
      node_then_dfs(t, Label::Sigma, parts);
      parts.pop_back();
      return;
    }
    for (std::uint64_t v = 1;; ++v) {
      const unsigned len = codec::int_length(v);
      if (!fits(len)) break;
      const std::uint64_t nj = codec::int_to_arity(v);
      if (nj > remaining) {
        if (v >= remaining + 2) break;
        continue;
      }
      if (!push_int(v)) continue;
      parts.push_back({t.arity.m, static_cast<std::uint32_t>(nj)});
      sigma_parts(t, count, remaining - nj, parts);
      parts.pop_back();
      pop_bits(len);
    }
  }

  void dfs() {
    if (tasks_.empty()) {
      if (bits_.size() == length_) visit_(std::span<const std::uint8_t>(bits_), static_cast<const Term&>(term_));
      return;
    }
    const Task t = tasks_.back();
    pop_task();
    const Arity a = t.arity;
    for (const auto& c : codec::alphabet(a)) {
      if (!fits(c.length)) continue;
      if (!push_bits(c.bits, c.length)) continue;
      switch (c.tag) {
        case codec::Tag::One: leaf_then_dfs(t, BasicFunc::one(a.m)); break;
        case codec::Tag::Suc: leaf_then_dfs(t, BasicFunc::suc()); break;
        case codec::Tag::Proj:
          if (a.m == 1) {
            leaf_then_dfs(t, BasicFunc::proj(1, 1));
            break;
          }
          for (std::uint32_t i = 1; i <= a.m; ++i) {
            const unsigned len = codec::int_length(i);
            if (!fits(len)) break;
            if (!push_int(i)) continue;
            leaf_then_dfs(t, BasicFunc::proj(a.m, i));
            pop_bits(len);
          }
          break;
        case codec::Tag::Lib:
        case codec::Tag::Oracle:
          for (std::uint64_t v = 1;; ++v) {
            const unsigned len = codec::int_length(v);
            if (!fits(len)) break;
            if (!push_int(v)) continue;
            leaf_then_dfs(t, c.tag == codec::Tag::Lib ? BasicFunc::lib(v) : BasicFunc::oracle(v));
            pop_bits(len);
          }
          break;
        case codec::Tag::Gamma:
          for (std::uint64_t v = 1;; ++v) {
            const unsigned len = codec::int_length(v);
            if (!fits(len)) break;
            const auto k = static_cast<std::uint32_t>(codec::int_to_arity(v));
            if (!push_int(v)) continue;
            const Arity kids[2] = {{a.m, k}, {k, a.n}};
            node_then_dfs(t, Label::Gamma, kids);
            pop_bits(len);
          }
          break;
        case codec::Tag::Sigma:
          for (std::uint64_t v = 1;; ++v) {
            const unsigned len = codec::int_length(v);
            if (!fits(len)) break;
            const auto count = static_cast<std::uint32_t>(codec::int_to_count(v));
            if (!push_int(v)) continue;
            std::vector<Arity> parts;
            parts.reserve(count);
            sigma_parts(t, count, a.n, parts);
            pop_bits(len);
          }
          break;
        case codec::Tag::Rho: {
          const Arity kids[2] = {{a.m - 1, 1}, {a.m + 1, 1}};
          node_then_dfs(t, Label::Rho, kids);
          break;
        }
        case codec::Tag::Mu: {
          const Arity kids[1] = {{a.m + 1, 1}};
          node_then_dfs(t, Label::Mu, kids);
          break;
        }
        case codec::Tag::Iota: {
          const Arity kids[1] = {a};
          node_then_dfs(t, Label::Iota, kids);
          break;
        }
      }
      pop_bits(c.length);
    }
    push_task(a, t.slot);
  }

  unsigned length_;
  std::span<const std::uint8_t> prefix_;
  Visit& visit_;
  std::vector<std::uint8_t> bits_;
  std::vector<Task> tasks_;
  unsigned pending_ = 0;
  Term term_;
};

}  // namespace detail

/// Visits every code of exactly `length` bits that starts with `prefix`, in
/// lexicographic order, as visit(bits, term).
template <class Visit>
void for_each_code(unsigned length, std::span<const std::uint8_t> prefix, Visit&& visit) {
  detail::CodeWalker<std::remove_reference_t<Visit>> walker(length, prefix, visit);
  walker.run();
}

/// Bit prefix shared by all codes of programs with the given root arity.
inline std::vector<std::uint8_t> root_prefix(Arity a) {
  codec::Writer w;
  w.integer(std::uint64_t{a.m} + 1);
  w.integer(codec::arity_to_int(a.n));
  return w.take().bits;
}

/// Work unit of a parallel sweep: one exact length and one prefix.
struct Band {
  unsigned length;
  std::vector<std::uint8_t> prefix;
};

/// Splits lengths 1..max_bits into bands under `base` prefix, extending the
/// prefix by up to `split_bits` so work divides evenly. Bands are listed in
/// shortlex order of their codes.
inline std::vector<Band> make_bands(unsigned max_bits, std::span<const std::uint8_t> base, unsigned split_bits = 6) {
  std::vector<Band> bands;
  for (unsigned len = 1; len <= max_bits; ++len) {
    if (len < base.size()) continue;
    const unsigned extra = std::min<unsigned>(split_bits, len - static_cast<unsigned>(base.size()));
    for (std::uint64_t p = 0; p < (std::uint64_t{1} << extra); ++p) {
      Band b{len, std::vector<std::uint8_t>(base.begin(), base.end())};
      for (unsigned i = extra; i-- > 0;) b.prefix.push_back((p >> i) & 1u);
      bands.push_back(std::move(b));
    }
  }
  return bands;
}

/// Number of codes of each length 0..max_bits, all root arities.
inline std::vector<std::uint64_t> code_census(unsigned max_bits, unsigned workers = 1) {
  const auto bands = make_bands(max_bits, {}, 4);
  std::vector<std::uint64_t> per_band(bands.size(), 0);
  parallel_for(bands.size(), workers, [&](std::size_t i) {
    for_each_code(bands[i].length, bands[i].prefix, [&](std::span<const std::uint8_t>, const Term&) { ++per_band[i]; });
  });
  std::vector<std::uint64_t> counts(max_bits + 1, 0);
  for (std::size_t i = 0; i < bands.size(); ++i) counts[bands[i].length] += per_band[i];
  return counts;
}

struct EnumeratedProgram {
  std::uint64_t rank;
  Term term;
  CodeWord code;
};

/// All programs with codes of at most `max_bits` bits, in shortlex order
/// with ranks 1, 2, 3, ...
inline std::vector<EnumeratedProgram> enumerate(unsigned max_bits, unsigned workers = 1) {
  const auto bands = make_bands(max_bits, {}, 4);
  std::vector<std::vector<EnumeratedProgram>> found(bands.size());
  parallel_for(bands.size(), workers, [&](std::size_t i) {
    for_each_code(bands[i].length, bands[i].prefix, [&](std::span<const std::uint8_t> bits, const Term& t) {
      found[i].push_back({0, t, CodeWord{{bits.begin(), bits.end()}}});
    });
  });
  std::vector<EnumeratedProgram> out;
  for (auto& f : found)
    for (auto& p : f) {
      p.rank = out.size() + 1;
      out.push_back(std::move(p));
    }
  return out;
}

/// The first `horizon` programs of the shortlex stream, with rank/unrank.
/// This is the structural numbering of the program world truncated to a
/// horizon.
class ProgramStream {
 public:
  explicit ProgramStream(std::uint64_t horizon, unsigned workers = 1, unsigned max_bits = 62) : horizon_(horizon) {
    if (horizon == 0) throw std::invalid_argument("horizon must be positive");
    for (unsigned len = 1; len <= max_bits && programs_.size() < horizon; ++len) {
      const auto bands = make_bands(len, {}, 4);
      std::vector<std::vector<std::pair<Term, CodeWord>>> found;
      // Only the bands of this exact length.
      std::vector<const Band*> mine;
      for (const auto& b : bands)
        if (b.length == len) mine.push_back(&b);
      found.resize(mine.size());
      parallel_for(mine.size(), workers, [&](std::size_t i) {
        for_each_code(len, mine[i]->prefix, [&](std::span<const std::uint8_t> bits, const Term& t) {
          found[i].emplace_back(t, CodeWord{{bits.begin(), bits.end()}});
        });
      });
      bool all_taken = true;
      for (auto& f : found)
        for (auto& [t, c] : f) {
          if (programs_.size() >= horizon) {
            all_taken = false;
            continue;
          }
          index_.emplace(c.str(), programs_.size() + 1);
          programs_.push_back(std::move(t));
          codes_.push_back(std::move(c));
        }
      if (all_taken) complete_length_ = len;
    }
  }

  std::uint64_t size() const { return programs_.size(); }
  std::uint64_t horizon() const { return horizon_; }

  /// Every code of at most this many bits is inside the stream.
  unsigned complete_length() const { return complete_length_; }

  const Term& unrank(std::uint64_t rank) const {
    if (rank == 0 || rank > programs_.size())
      throw RangeExceeded("rank " + std::to_string(rank) + " outside enumerated horizon " +
                          std::to_string(programs_.size()));
    return programs_[rank - 1];
  }

  const CodeWord& code(std::uint64_t rank) const {
    unrank(rank);
    return codes_[rank - 1];
  }

  std::uint64_t rank_of(const Term& t) const {
    auto c = encode(t);
    auto it = index_.find(c.str());
    if (it == index_.end())
      throw RangeExceeded("program with a " + std::to_string(c.length()) + "-bit code lies beyond the horizon");
    return it->second;
  }

  std::uint64_t rank_of(const Program& p) const { return rank_of(to_term(p)); }

 private:
  std::uint64_t horizon_;
  std::vector<Term> programs_;
  std::vector<CodeWord> codes_;
  std::unordered_map<std::string, std::uint64_t> index_;
  unsigned complete_length_ = 0;
};

}  // namespace zlw

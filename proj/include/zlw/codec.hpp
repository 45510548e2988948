#pragma once

// Prefix-free binary code for programs.
//
// A code is the root arity followed by the pre-order token stream of the
// program tree. Decoding is type-directed: the arity a subterm must have is
// known before its tag is read, so only tags that can produce that arity are
// in the alphabet, and leaf arities are never spelled out.
//
// Integers use a self-delimiting unary-length code: for v >= 1 with
// l = floor(log2 v), emit l ones, a zero, then the low l bits of v
// (most significant first). So 1 = "0", 2 = "100", 3 = "101", 4 = "11000".
//
//   code       := int(m+1) arity(n) term(m,n)
//   arity(k)   := int(1) for k=1, int(2) for k=0, int(k+1) otherwise
//   term(m,n)  := tag payload children
//
// Tag alphabets (complete prefix codes, listed in codeword order):
//   (0,1)          gamma 0      one 10      lib 110     mu 1110
//                  sigma 11110  iota 111110 oracle 111111
//   (1,1)          lib 0        suc 100     gamma 101   rho 1100   pr 1101
//                  one 11100    mu 11101    sigma 111100 iota 111101 oracle 11111
//   (m>=2,1)       pr 0         lib 100     gamma 101   one 1100   rho 1101
//                  mu 1110      sigma 111100 iota 111101 oracle 11111
//   (m,n), n!=1    sigma 0      gamma 10    lib 110     iota 1110  oracle 1111
//
// Payloads and children:
//   gamma   arity(k); children term(m,k), term(k,n)
//   sigma   count c as int(1) for c=2, int(2) for c=1, int(c) otherwise;
//           then arity(n_1) .. arity(n_{c-1}) with running sum <= n, and
//           n_c = n - sum; children term(m,n_1) .. term(m,n_c)
//   rho     children term(m-1,1), term(m+1,1)
//   mu      child term(m+1,1)
//   iota    child term(m,n)
//   pr      int(i) with 1 <= i <= m; omitted when m = 1
//   lib     int(address);  oracle  int(table id)
//   one, suc  nothing
//
// A bit string is therefore exactly one of: a complete code, a strict prefix
// of some complete code, or rejected. Rejection happens at the first bit
// after which every completion is invalid: a pr index above m, sigma parts
// summing above n, an arity of 2^32 or more, or an integer wider than 63 bits.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "zlw/opgraph.hpp"

namespace zlw {

struct CodeWord {
  std::vector<std::uint8_t> bits;  // one bit per element, 0 or 1

  std::size_t length() const { return bits.size(); }

  std::string str() const {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
  }

  static CodeWord from_string(std::string_view s) {
    CodeWord c;
    for (char ch : s) {
      if (ch != '0' && ch != '1') throw std::invalid_argument("code words are strings of 0 and 1");
      c.bits.push_back(ch == '1');
    }
    return c;
  }

  /// Shortlex: shorter first, then lexicographic.
  friend bool operator<(const CodeWord& a, const CodeWord& b) {
    if (a.bits.size() != b.bits.size()) return a.bits.size() < b.bits.size();
    return a.bits < b.bits;
  }
  friend bool operator==(const CodeWord&, const CodeWord&) = default;
};

namespace codec {

enum class Tag : std::uint8_t { Gamma, Sigma, Rho, Mu, Iota, One, Suc, Proj, Lib, Oracle };

struct TagCode {
  Tag tag;
  std::uint8_t length;
  std::uint8_t bits;  // right-aligned codeword
};

/// Tag alphabet for a term of the given arity, in codeword order.
inline std::span<const TagCode> alphabet(Arity a) {
  using enum Tag;
  static constexpr std::array<TagCode, 7> k01{{{Gamma, 1, 0b0},
                                               {One, 2, 0b10},
                                               {Lib, 3, 0b110},
                                               {Mu, 4, 0b1110},
                                               {Sigma, 5, 0b11110},
                                               {Iota, 6, 0b111110},
                                               {Oracle, 6, 0b111111}}};
  static constexpr std::array<TagCode, 10> k11{{{Lib, 1, 0b0},
                                                {Suc, 3, 0b100},
                                                {Gamma, 3, 0b101},
                                                {Rho, 4, 0b1100},
                                                {Proj, 4, 0b1101},
                                                {One, 5, 0b11100},
                                                {Mu, 5, 0b11101},
                                                {Sigma, 6, 0b111100},
                                                {Iota, 6, 0b111101},
                                                {Oracle, 5, 0b11111}}};
  static constexpr std::array<TagCode, 9> km1{{{Proj, 1, 0b0},
                                               {Lib, 3, 0b100},
                                               {Gamma, 3, 0b101},
                                               {One, 4, 0b1100},
                                               {Rho, 4, 0b1101},
                                               {Mu, 4, 0b1110},
                                               {Sigma, 6, 0b111100},
                                               {Iota, 6, 0b111101},
                                               {Oracle, 5, 0b11111}}};
  static constexpr std::array<TagCode, 5> kmn{{{Sigma, 1, 0b0},
                                               {Gamma, 2, 0b10},
                                               {Lib, 3, 0b110},
                                               {Iota, 4, 0b1110},
                                               {Oracle, 4, 0b1111}}};
  if (a.n != 1) return kmn;
  if (a.m == 0) return k01;
  if (a.m == 1) return k11;
  return km1;
}

inline std::optional<TagCode> tag_code(Arity a, Tag t) {
  for (const auto& c : alphabet(a))
    if (c.tag == t) return c;
  return std::nullopt;
}

inline Tag tag_of(const TermNode& n) {
  switch (n.label) {
    case Label::Gamma: return Tag::Gamma;
    case Label::Sigma: return Tag::Sigma;
    case Label::Rho: return Tag::Rho;
    case Label::Mu: return Tag::Mu;
    case Label::Iota: return Tag::Iota;
    case Label::Leaf: break;
  }
  switch (n.leaf.kind) {
    case BasicFunc::Kind::Suc: return Tag::Suc;
    case BasicFunc::Kind::One: return Tag::One;
    case BasicFunc::Kind::Proj: return Tag::Proj;
    case BasicFunc::Kind::LibRef: return Tag::Lib;
    case BasicFunc::Kind::OracleRef: return Tag::Oracle;
  }
  return Tag::Lib;
}

/// Bit length of int(v).
inline unsigned int_length(std::uint64_t v) {
  unsigned l = 63u - static_cast<unsigned>(__builtin_clzll(v));
  return 2 * l + 1;
}

// Arities are 32-bit; arity_to_int(2^32 - 1) = 2^32.
inline constexpr std::uint64_t kMaxArityInt = std::uint64_t{1} << 32;

inline std::uint64_t arity_to_int(std::uint32_t k) { return k == 1 ? 1 : k == 0 ? 2 : std::uint64_t{k} + 1; }
inline std::uint64_t int_to_arity(std::uint64_t v) { return v == 1 ? 1 : v == 2 ? 0 : v - 1; }
inline std::uint64_t count_to_int(std::uint32_t c) { return c == 2 ? 1 : c == 1 ? 2 : c; }
inline std::uint64_t int_to_count(std::uint64_t v) { return v == 1 ? 2 : v == 2 ? 1 : v; }

/// Shortest code of any term with this arity (always a leaf).
inline unsigned min_term_bits(Arity a) {
  unsigned best = ~0u;
  for (const auto& c : alphabet(a)) {
    unsigned len = 0;
    switch (c.tag) {
      case Tag::One:
      case Tag::Suc: len = c.length; break;
      case Tag::Proj: len = c.length + (a.m == 1 ? 0 : 1); break;
      case Tag::Lib:
      case Tag::Oracle: len = c.length + 1; break;
      default: continue;
    }
    best = std::min(best, len);
  }
  return best;
}

class Writer {
 public:
  void bit(bool b) { out_.bits.push_back(b); }
  void bits(std::uint64_t v, unsigned len) {
    for (unsigned i = len; i-- > 0;) bit((v >> i) & 1u);
  }
  void integer(std::uint64_t v) {
    unsigned l = 63u - static_cast<unsigned>(__builtin_clzll(v));
    for (unsigned i = 0; i < l; ++i) bit(true);
    bit(false);
    bits(v, l);
  }
  CodeWord take() { return std::move(out_); }

 private:
  CodeWord out_;
};

inline void encode_term(Writer& w, const Term& t, std::uint32_t i) {
  const TermNode& n = t.nodes[i];
  const auto tc = tag_code(n.arity, tag_of(n));
  if (!tc) throw std::invalid_argument("node " + std::to_string(i) + " cannot occur at arity " + to_string(n.arity));
  w.bits(tc->bits, tc->length);
  auto kids = t.children(n);
  switch (tc->tag) {
    case Tag::Gamma: w.integer(arity_to_int(t.nodes[kids[0]].arity.n)); break;
    case Tag::Sigma:
      w.integer(count_to_int(n.kid_count));
      for (std::uint32_t k = 0; k + 1 < n.kid_count; ++k) w.integer(arity_to_int(t.nodes[kids[k]].arity.n));
      break;
    case Tag::Proj:
      if (n.arity.m != 1) w.integer(n.leaf.i);
      break;
    case Tag::Lib:
    case Tag::Oracle: w.integer(n.leaf.address); break;
    default: break;
  }
  for (auto k : kids) encode_term(w, t, k);
}

}  // namespace codec

/// Code word of a valid term.
inline CodeWord encode(const Term& t) {
  if (auto v = validate(t)) throw ValidationError(*v);
  codec::Writer w;
  w.integer(std::uint64_t{t.arity().m} + 1);
  w.integer(codec::arity_to_int(t.arity().n));
  codec::encode_term(w, t, 0);
  return w.take();
}

inline CodeWord encode(const Program& p) { return encode(to_term(p)); }

class DecodeError : public std::runtime_error {
 public:
  enum class Kind { NotACode, TrailingBits };
  DecodeError(Kind kind, std::size_t position, const std::string& what)
      : std::runtime_error(what), kind_(kind), position_(position) {}
  Kind kind() const { return kind_; }
  std::size_t position() const { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

/// Classification of a finite bit string against the code.
struct DecodeResult {
  enum class Status { Complete, Prefix, Rejected };
  Status status = Status::Rejected;
  std::size_t consumed = 0;  // bits read before completion or rejection
  std::optional<Term> term;
};

namespace codec {

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bits) : bits_(bits) {}

  struct Exhausted {};
  struct Bad {};

  bool bit() {
    if (pos_ >= bits_.size()) throw Exhausted{};
    return bits_[pos_++] != 0;
  }

  /// Reads an integer that must not exceed `max`. Rejects at the first bit
  /// after which no completion can stay within the bound, so a string that
  /// is still open always extends to a code.
  std::uint64_t integer(std::uint64_t max = ~std::uint64_t{0} >> 1) {
    unsigned l = 0;
    while (bit()) {
      if (++l > 63 || (max >> l) == 0) throw Bad{};
    }
    std::uint64_t v = 1;
    for (unsigned i = 0; i < l; ++i) {
      v = (v << 1) | (bit() ? 1u : 0u);
      if ((v << (l - 1 - i)) > max) throw Bad{};
    }
    return v;
  }

  Tag tag(Arity a) {
    const auto table = alphabet(a);
    std::uint32_t acc = 0;
    for (unsigned len = 1; len <= 8; ++len) {
      acc = (acc << 1) | (bit() ? 1u : 0u);
      for (const auto& c : table)
        if (c.length == len && c.bits == acc) return c.tag;
    }
    throw Bad{};  // unreachable for complete alphabets
  }

  std::size_t position() const { return pos_; }

 private:
  std::span<const std::uint8_t> bits_;
  std::size_t pos_ = 0;
};

inline void decode_term(Reader& r, Term& t, Arity a, std::int64_t slot) {
  const Tag tag = r.tag(a);
  auto place = [&](Label label, BasicFunc leaf, std::uint32_t kids) {
    auto id = t.push(label, leaf, a, kids);
    if (slot >= 0) t.kids[static_cast<std::size_t>(slot)] = id;
    return t.nodes[id].first_kid;
  };
  switch (tag) {
    case Tag::One: place(Label::Leaf, BasicFunc::one(a.m), 0); return;
    case Tag::Suc: place(Label::Leaf, BasicFunc::suc(), 0); return;
    case Tag::Proj: {
      std::uint64_t i = a.m == 1 ? 1 : r.integer(a.m);
      if (i > a.m) throw Reader::Bad{};
      place(Label::Leaf, BasicFunc::proj(a.m, static_cast<std::uint32_t>(i)), 0);
      return;
    }
    case Tag::Lib: place(Label::Leaf, BasicFunc::lib(r.integer()), 0); return;
    case Tag::Oracle: place(Label::Leaf, BasicFunc::oracle(r.integer()), 0); return;
    case Tag::Gamma: {
      const std::uint64_t k = int_to_arity(r.integer(kMaxArityInt));
      auto base = place(Label::Gamma, {}, 2);
      decode_term(r, t, {a.m, static_cast<std::uint32_t>(k)}, base);
      decode_term(r, t, {static_cast<std::uint32_t>(k), a.n}, base + 1);
      return;
    }
    case Tag::Sigma: {
      const std::uint64_t c = int_to_count(r.integer(0xFFFFFFFFu));
      std::vector<std::uint32_t> parts;
      std::uint64_t sum = 0;
      for (std::uint64_t j = 0; j + 1 < c; ++j) {
        // Ints above max(2, a.n - sum + 1) name arities above what is left;
        // int 1 (arity 1) is complete when read and is checked afterwards.
        const std::uint64_t nj = int_to_arity(r.integer(std::max<std::uint64_t>(2, a.n - sum + 1)));
        if (nj > a.n - sum) throw Reader::Bad{};
        sum += nj;
        parts.push_back(static_cast<std::uint32_t>(nj));
      }
      parts.push_back(static_cast<std::uint32_t>(a.n - sum));
      auto base = place(Label::Sigma, {}, static_cast<std::uint32_t>(c));
      for (std::uint32_t j = 0; j < c; ++j) decode_term(r, t, {a.m, parts[j]}, base + j);
      return;
    }
    case Tag::Rho: {
      auto base = place(Label::Rho, {}, 2);
      decode_term(r, t, {a.m - 1, 1}, base);
      decode_term(r, t, {a.m + 1, 1}, base + 1);
      return;
    }
    case Tag::Mu: {
      auto base = place(Label::Mu, {}, 1);
      decode_term(r, t, {a.m + 1, 1}, base);
      return;
    }
    case Tag::Iota: {
      auto base = place(Label::Iota, {}, 1);
      decode_term(r, t, a, base);
      return;
    }
  }
}

}  // namespace codec

/// Reads one code from the front of `bits` without requiring it to end there.
inline DecodeResult decode_prefix(std::span<const std::uint8_t> bits) {
  codec::Reader r(bits);
  DecodeResult out;
  try {
    const std::uint64_t m1 = r.integer(codec::kMaxArityInt);
    const std::uint64_t n = codec::int_to_arity(r.integer(codec::kMaxArityInt));
    Term t;
    codec::decode_term(r, t, {static_cast<std::uint32_t>(m1 - 1), static_cast<std::uint32_t>(n)}, -1);
    out.status = DecodeResult::Status::Complete;
    out.term = std::move(t);
  } catch (const codec::Reader::Exhausted&) {
    out.status = DecodeResult::Status::Prefix;
  } catch (const codec::Reader::Bad&) {
    out.status = DecodeResult::Status::Rejected;
  }
  out.consumed = r.position();
  return out;
}

/// Inverse of encode. Throws DecodeError(NotACode) for strict prefixes and
/// rejected strings, DecodeError(TrailingBits) when bits follow a code.
inline Term decode(std::span<const std::uint8_t> bits) {
  auto res = decode_prefix(bits);
  switch (res.status) {
    case DecodeResult::Status::Complete:
      if (res.consumed != bits.size())
        throw DecodeError(DecodeError::Kind::TrailingBits, res.consumed,
                          "trailing bits after code end at " + std::to_string(res.consumed));
      return std::move(*res.term);
    case DecodeResult::Status::Prefix:
      throw DecodeError(DecodeError::Kind::NotACode, res.consumed, "bit string ends inside a code");
    case DecodeResult::Status::Rejected: break;
  }
  throw DecodeError(DecodeError::Kind::NotACode, res.consumed,
                    "not a code (rejected at bit " + std::to_string(res.consumed) + ")");
}

inline Term decode(const CodeWord& c) { return decode(std::span<const std::uint8_t>(c.bits)); }

}  // namespace zlw

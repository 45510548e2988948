#pragma once

// Text wire format for programs.
//
//   program  := "(" "program" node* graft* inputs outputs bind ")"
//   node     := "(" "node" ID label flags flags ")"        ; IDs are 1,2,3,...
//   label    := "gamma" | "sigma" | "rho" | "mu" | "iota" | "(" "leaf" basic ")"
//   basic    := "suc" | "(" "one" INT ")" | "(" "pr" INT INT ")"
//             | "(" "lib" INT ")" | "(" "oracle" INT ")"
//   flags    := "(" ( "(" INT INT ")" )* ")"               ; ordered (m n) labels
//   graft    := "(" "graft" ID FLAG ID FLAG ")"            ; output -> input, 1-based
//   inputs   := "(" "inputs" ( "(" ID FLAG ")" )* ")"      ; open inputs, in order
//   outputs  := "(" "outputs" ( "(" ID FLAG ")" )* ")"
//   bind     := "(" "bind" basic* ")"                      ; one leaf per open input
//
// Tokens are separated by arbitrary whitespace. `serialize` always emits the
// canonical form: leaves inlined, nodes in post-order, grafts sorted by
// target, one clause per line.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "zlw/opgraph.hpp"

namespace zlw {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Validation };

  ParseError(Kind kind, std::size_t position, std::string message, std::optional<Rule> rule = std::nullopt)
      : std::runtime_error(message), kind_(kind), position_(position), rule_(rule) {}

  Kind kind() const { return kind_; }
  std::size_t position() const { return position_; }
  std::optional<Rule> rule() const { return rule_; }

 private:
  Kind kind_;
  std::size_t position_;
  std::optional<Rule> rule_;
};

namespace detail {

inline void write_basic(std::ostream& os, const BasicFunc& f) {
  switch (f.kind) {
    case BasicFunc::Kind::Suc: os << "suc"; break;
    case BasicFunc::Kind::One: os << "(one " << f.m << ")"; break;
    case BasicFunc::Kind::Proj: os << "(pr " << f.m << " " << f.i << ")"; break;
    case BasicFunc::Kind::LibRef: os << "(lib " << f.address << ")"; break;
    case BasicFunc::Kind::OracleRef: os << "(oracle " << f.address << ")"; break;
  }
}

inline void write_flags(std::ostream& os, const std::vector<Arity>& flags) {
  os << "(";
  for (std::size_t i = 0; i < flags.size(); ++i) os << (i ? " " : "") << "(" << flags[i].m << " " << flags[i].n << ")";
  os << ")";
}

inline void write_graph(std::ostream& os, const Program& p) {
  const auto& g = p.graph;
  os << "(program\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& n = g.nodes[i];
    os << " (node " << i + 1 << " ";
    if (n.label == Label::Leaf) {
      os << "(leaf ";
      write_basic(os, n.leaf);
      os << ")";
    } else {
      os << label_name(n.label);
    }
    os << " ";
    write_flags(os, n.in_flags);
    os << " ";
    write_flags(os, n.out_flags);
    os << ")\n";
  }
  for (const auto& e : g.grafts)
    os << " (graft " << e.from.node + 1 << " " << e.from.flag + 1 << " " << e.to.node + 1 << " " << e.to.flag + 1
       << ")\n";
  auto refs = [&](const char* head, const std::vector<FlagRef>& v) {
    os << " (" << head;
    for (const auto& f : v) os << " (" << f.node + 1 << " " << f.flag + 1 << ")";
    os << ")\n";
  };
  refs("inputs", g.open_inputs);
  refs("outputs", g.open_outputs);
  os << " (bind";
  for (const auto& b : p.binding) {
    os << " ";
    write_basic(os, b);
  }
  os << ")\n)\n";
}

class Lexer {
 public:
  struct Token {
    enum class Type { Open, Close, Word, Int, End } type;
    std::string_view text;
    std::size_t pos;
    std::uint64_t value = 0;
  };

  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(std::size_t pos, const std::string& what) const {
    throw ParseError(ParseError::Kind::Syntax, pos, "syntax error at position " + std::to_string(pos) + ": " + what);
  }

  void open() {
    auto t = next();
    if (t.type != Token::Type::Open) fail(t.pos, "expected '('");
  }
  void close() {
    auto t = next();
    if (t.type != Token::Type::Close) fail(t.pos, "expected ')'");
  }
  void word(std::string_view w) {
    auto t = next();
    if (t.type != Token::Type::Word || t.text != w) fail(t.pos, "expected '" + std::string(w) + "'");
  }
  std::uint64_t integer() {
    auto t = next();
    if (t.type != Token::Type::Int) fail(t.pos, "expected integer");
    return t.value;
  }
  std::uint32_t small_integer() {
    auto pos = tok_.pos;
    auto v = integer();
    if (v > 0xFFFFFFFFu) fail(pos, "integer too large");
    return static_cast<std::uint32_t>(v);
  }
  std::size_t index(std::size_t limit, const char* what) {
    auto pos = tok_.pos;
    auto v = integer();
    if (v < 1 || v > limit) fail(pos, std::string(what) + " out of range");
    return static_cast<std::size_t>(v - 1);
  }
  bool at_open_word(std::string_view w) const { return tok_.type == Token::Type::Open && lookahead_word() == w; }

 private:
  std::string_view lookahead_word() const {
    std::size_t i = tok_.pos + 1;
    while (i < src_.size() && std::isspace(static_cast<unsigned char>(src_[i]))) ++i;
    std::size_t j = i;
    while (j < src_.size() && std::isalpha(static_cast<unsigned char>(src_[j]))) ++j;
    return src_.substr(i, j - i);
  }

  void advance() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    if (i_ >= src_.size()) {
      tok_ = {Token::Type::End, {}, i_};
      return;
    }
    const char c = src_[i_];
    if (c == '(' || c == ')') {
      tok_ = {c == '(' ? Token::Type::Open : Token::Type::Close, src_.substr(i_, 1), i_};
      ++i_;
      return;
    }
    std::size_t j = i_;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(src_.data() + i_, src_.data() + j, v);
      if (ec != std::errc()) fail(i_, "integer out of range");
      tok_ = {Token::Type::Int, src_.substr(i_, j - i_), i_, v};
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      while (j < src_.size() && std::isalpha(static_cast<unsigned char>(src_[j]))) ++j;
      tok_ = {Token::Type::Word, src_.substr(i_, j - i_), i_};
    } else {
      fail(i_, std::string("unexpected character '") + c + "'");
    }
    i_ = j;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  Token tok_{Token::Type::End, {}, 0};
};

inline BasicFunc read_basic(Lexer& lx) {
  const auto& t = lx.peek();
  if (t.type == Lexer::Token::Type::Word && t.text == "suc") {
    lx.next();
    return BasicFunc::suc();
  }
  auto start = t.pos;
  lx.open();
  auto head = lx.next();
  if (head.type != Lexer::Token::Type::Word) lx.fail(head.pos, "expected leaf name");
  BasicFunc f;
  if (head.text == "one") {
    f = BasicFunc::one(lx.small_integer());
  } else if (head.text == "pr") {
    auto m = lx.small_integer();
    auto i = lx.small_integer();
    f = BasicFunc::proj(m, i);
  } else if (head.text == "lib") {
    f = BasicFunc::lib(lx.integer());
  } else if (head.text == "oracle") {
    f = BasicFunc::oracle(lx.integer());
  } else {
    lx.fail(head.pos, "unknown leaf '" + std::string(head.text) + "'");
  }
  lx.close();
  if (!f.well_formed())
    throw ParseError(ParseError::Kind::Validation, start, "leaf parameters out of range", Rule::ArityMismatch);
  return f;
}

inline std::vector<Arity> read_flags(Lexer& lx) {
  std::vector<Arity> flags;
  lx.open();
  while (lx.peek().type == Lexer::Token::Type::Open) {
    lx.open();
    Arity a;
    a.m = lx.small_integer();
    a.n = lx.small_integer();
    lx.close();
    flags.push_back(a);
  }
  lx.close();
  return flags;
}

}  // namespace detail

/// Canonical text of a valid program.
inline std::string serialize(const Program& program) {
  std::ostringstream os;
  detail::write_graph(os, canonical(program));
  return os.str();
}

/// Canonical text on one line: line breaks and indentation become single
/// spaces. parse accepts it like the multi-line form.
inline std::string serialize_line(const Program& program) {
  const std::string text = serialize(program);
  std::string out;
  for (char c : text) {
    if (c == '\n' || c == ' ') {
      if (!out.empty() && out.back() != ' ') out += ' ';
    } else {
      out += c;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

/// Text of a program exactly as given (no canonicalization).
inline std::string serialize_raw(const Program& program) {
  std::ostringstream os;
  detail::write_graph(os, program);
  return os.str();
}

/// Parses and validates; throws ParseError with a byte position on failure.
inline Program parse(std::string_view text) {
  detail::Lexer lx(text);
  Program p;
  auto& g = p.graph;
  if (lx.peek().type == detail::Lexer::Token::Type::End) lx.fail(lx.peek().pos, "empty input");
  const auto start = lx.peek().pos;
  lx.open();
  lx.word("program");

  while (lx.at_open_word("node")) {
    lx.open();
    lx.word("node");
    auto id_pos = lx.peek().pos;
    if (lx.integer() != g.nodes.size() + 1) lx.fail(id_pos, "node ids must be 1,2,3,... in order");
    OpNode node;
    const auto& t = lx.peek();
    if (t.type == detail::Lexer::Token::Type::Open) {
      lx.open();
      lx.word("leaf");
      node.label = Label::Leaf;
      node.leaf = detail::read_basic(lx);
      lx.close();
    } else {
      auto w = lx.next();
      if (w.type != detail::Lexer::Token::Type::Word) lx.fail(w.pos, "expected label");
      if (w.text == "gamma") node.label = Label::Gamma;
      else if (w.text == "sigma") node.label = Label::Sigma;
      else if (w.text == "rho") node.label = Label::Rho;
      else if (w.text == "mu") node.label = Label::Mu;
      else if (w.text == "iota") node.label = Label::Iota;
      else lx.fail(w.pos, "unknown label '" + std::string(w.text) + "'");
    }
    node.in_flags = detail::read_flags(lx);
    node.out_flags = detail::read_flags(lx);
    lx.close();
    g.nodes.push_back(std::move(node));
  }
  const std::size_t count = g.nodes.size();
  auto flag_ref = [&](bool input) {
    FlagRef f;
    f.node = lx.index(count, "node id");
    const auto& n = g.nodes[f.node];
    f.flag = lx.index(input ? n.in_flags.size() : n.out_flags.size(), "flag index");
    return f;
  };
  while (lx.at_open_word("graft")) {
    lx.open();
    lx.word("graft");
    Graft e;
    e.from = flag_ref(false);
    e.to = flag_ref(true);
    lx.close();
    g.grafts.push_back(e);
  }
  auto ref_list = [&](const char* head, bool input, std::vector<FlagRef>& out) {
    lx.open();
    lx.word(head);
    while (lx.peek().type == detail::Lexer::Token::Type::Open) {
      lx.open();
      out.push_back(flag_ref(input));
      lx.close();
    }
    lx.close();
  };
  ref_list("inputs", true, g.open_inputs);
  ref_list("outputs", false, g.open_outputs);
  lx.open();
  lx.word("bind");
  while (lx.peek().type != detail::Lexer::Token::Type::Close) p.binding.push_back(detail::read_basic(lx));
  lx.close();
  lx.close();
  if (lx.peek().type != detail::Lexer::Token::Type::End) lx.fail(lx.peek().pos, "trailing input");

  if (auto v = validate(p))
    throw ParseError(ParseError::Kind::Validation, start,
                     std::string("validation error: ") + rule_name(v->rule) + " at node " +
                         std::to_string(v->node + 1) + ": " + v->detail,
                     v->rule);
  return p;
}

}  // namespace zlw

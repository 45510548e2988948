#pragma once

// Operator graphs over partial (m,n)-functions on positive integers.
//
// A graph is a set of corollas (one vertex per basic operator) whose output
// flags are grafted onto input flags of equal arity. Every basic operator has
// exactly one output, so a graph is a forest; a Program is the single-rooted
// case together with the basic functions bound to its open inputs.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zlw {

/// Argument count m and result count n of an (m,n)-function.
struct Arity {
  std::uint32_t m = 0;
  std::uint32_t n = 0;

  friend auto operator<=>(const Arity&, const Arity&) = default;
};

inline std::string to_string(Arity a) {
  return "(" + std::to_string(a.m) + "," + std::to_string(a.n) + ")";
}

/// Leaves of a program: the elementary functions plus library and oracle
/// references.
struct BasicFunc {
  enum class Kind : std::uint8_t { Suc, One, Proj, LibRef, OracleRef };

  Kind kind = Kind::Suc;
  std::uint32_t m = 0;        // One(m), Proj(m,i)
  std::uint32_t i = 0;        // Proj(m,i)
  std::uint64_t address = 0;  // LibRef address or OracleRef table id

  static BasicFunc suc() { return {Kind::Suc, 1, 0, 0}; }
  static BasicFunc one(std::uint32_t m) { return {Kind::One, m, 0, 0}; }
  static BasicFunc proj(std::uint32_t m, std::uint32_t i) { return {Kind::Proj, m, i, 0}; }
  static BasicFunc lib(std::uint64_t address) { return {Kind::LibRef, 0, 0, address}; }
  static BasicFunc oracle(std::uint64_t id) { return {Kind::OracleRef, 0, 0, id}; }

  /// Library and oracle leaves take whatever arity their flag declares.
  bool arity_is_free() const { return kind == Kind::LibRef || kind == Kind::OracleRef; }

  /// Fixed arity of elementary leaves; nullopt for library/oracle leaves.
  std::optional<Arity> natural_arity() const {
    switch (kind) {
      case Kind::Suc: return Arity{1, 1};
      case Kind::One: return Arity{m, 1};
      case Kind::Proj: return Arity{m, 1};
      default: return std::nullopt;
    }
  }

  /// Parameter sanity independent of any flag.
  bool well_formed() const {
    switch (kind) {
      case Kind::Suc: return true;
      case Kind::One: return true;
      case Kind::Proj: return i >= 1 && i <= m;
      case Kind::LibRef:
      case Kind::OracleRef: return address >= 1;
    }
    return false;
  }

  bool fits(Arity a) const {
    if (!well_formed()) return false;
    auto nat = natural_arity();
    return !nat || *nat == a;
  }

  friend bool operator==(const BasicFunc& a, const BasicFunc& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Kind::Suc: return true;
      case Kind::One: return a.m == b.m;
      case Kind::Proj: return a.m == b.m && a.i == b.i;
      default: return a.address == b.address;
    }
  }
};

/// Vertex labels. The declaration order is the canonical label rank.
enum class Label : std::uint8_t { Gamma, Sigma, Rho, Mu, Iota, Leaf };

inline const char* label_name(Label l) {
  switch (l) {
    case Label::Gamma: return "gamma";
    case Label::Sigma: return "sigma";
    case Label::Rho: return "rho";
    case Label::Mu: return "mu";
    case Label::Iota: return "iota";
    case Label::Leaf: return "leaf";
  }
  return "?";
}

struct OpNode {
  Label label = Label::Iota;
  BasicFunc leaf{};  // only for Label::Leaf
  std::vector<Arity> in_flags;
  std::vector<Arity> out_flags;

  friend bool operator==(const OpNode& a, const OpNode& b) {
    return a.label == b.label && (a.label != Label::Leaf || a.leaf == b.leaf) &&
           a.in_flags == b.in_flags && a.out_flags == b.out_flags;
  }
};

/// (node index, flag index), both 0-based.
struct FlagRef {
  std::size_t node = 0;
  std::size_t flag = 0;
  friend auto operator<=>(const FlagRef&, const FlagRef&) = default;
};

/// Output flag `from` grafted onto input flag `to`.
struct Graft {
  FlagRef from;
  FlagRef to;
  friend auto operator<=>(const Graft&, const Graft&) = default;
};

struct OpGraph {
  std::vector<OpNode> nodes;
  std::vector<Graft> grafts;
  std::vector<FlagRef> open_inputs;
  std::vector<FlagRef> open_outputs;

  friend bool operator==(const OpGraph&, const OpGraph&) = default;
};

/// The pair (graph, basic functions bound to its open inputs).
struct Program {
  OpGraph graph;
  std::vector<BasicFunc> binding;

  friend bool operator==(const Program&, const Program&) = default;
};

enum class Rule { ArityMismatch, CycleDetected, DanglingGraft };

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::ArityMismatch: return "ArityMismatch";
    case Rule::CycleDetected: return "CycleDetected";
    case Rule::DanglingGraft: return "DanglingGraft";
  }
  return "?";
}

struct Violation {
  Rule rule;
  std::size_t node = 0;  // 0-based
  std::size_t flag = 0;
  std::string detail;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(Violation v)
      : std::runtime_error(std::string(rule_name(v.rule)) + " at node " +
                           std::to_string(v.node + 1) + ": " + v.detail),
        violation_(std::move(v)) {}
  const Violation& violation() const { return violation_; }

 private:
  Violation violation_;
};

namespace detail {

inline std::optional<Violation> check_schema(const OpNode& node, std::size_t idx) {
  auto bad = [&](std::string why) {
    return Violation{Rule::ArityMismatch, idx, 0, std::move(why)};
  };
  const auto& in = node.in_flags;
  const auto& out = node.out_flags;
  if (out.size() != 1) return bad(std::string(label_name(node.label)) + " must have exactly one output");
  const Arity o = out[0];
  switch (node.label) {
    case Label::Gamma:
      if (in.size() != 2) return bad("gamma takes two inputs");
      if (in[0].n != in[1].m) return bad("gamma inner result count must equal outer argument count");
      if (o != Arity{in[0].m, in[1].n}) return bad("gamma output must be (m,q)");
      return std::nullopt;
    case Label::Sigma: {
      if (in.empty()) return bad("sigma takes at least one input");
      std::uint64_t total = 0;
      for (const auto& a : in) {
        if (a.m != o.m) return bad("sigma inputs must share the argument count of the output");
        total += a.n;
      }
      if (total != o.n) return bad("sigma output result count must be the sum of inputs");
      return std::nullopt;
    }
    case Label::Rho:
      if (in.size() != 2) return bad("rho takes two inputs");
      if (in[0].n != 1 || in[1].n != 1 || o.n != 1) return bad("rho works on (.,1)-functions");
      if (in[1].m != in[0].m + 2 || o.m != in[0].m + 1) return bad("rho signature is [(m,1),(m+2,1);(m+1,1)]");
      return std::nullopt;
    case Label::Mu:
      if (in.size() != 1) return bad("mu takes one input");
      if (in[0].n != 1 || o.n != 1 || in[0].m != o.m + 1) return bad("mu signature is [(n+1,1);(n,1)]");
      return std::nullopt;
    case Label::Iota:
      if (in.size() != 1 || in[0] != o) return bad("iota signature is [(m,n);(m,n)]");
      return std::nullopt;
    case Label::Leaf:
      if (!in.empty()) return bad("leaves have no inputs");
      if (!node.leaf.fits(o)) return bad("leaf parameters do not fit its output flag " + to_string(o));
      return std::nullopt;
  }
  return bad("unknown label");
}

}  // namespace detail

/// Well-formedness of a graph: corolla schemas, graft endpoints and labels,
/// open-flag bookkeeping, and acyclicity. Returns the first violated rule.
inline std::optional<Violation> validate(const OpGraph& g) {
  const std::size_t count = g.nodes.size();
  for (std::size_t i = 0; i < count; ++i) {
    if (auto v = detail::check_schema(g.nodes[i], i)) return v;
  }

  std::vector<std::vector<int>> in_used(count), out_used(count);
  for (std::size_t i = 0; i < count; ++i) {
    in_used[i].assign(g.nodes[i].in_flags.size(), 0);
    out_used[i].assign(g.nodes[i].out_flags.size(), 0);
  }
  std::vector<std::vector<std::size_t>> succ(count);
  for (const auto& e : g.grafts) {
    if (e.from.node >= count || e.from.flag >= g.nodes[e.from.node].out_flags.size())
      return Violation{Rule::DanglingGraft, e.from.node, e.from.flag, "graft source does not exist"};
    if (e.to.node >= count || e.to.flag >= g.nodes[e.to.node].in_flags.size())
      return Violation{Rule::DanglingGraft, e.to.node, e.to.flag, "graft target does not exist"};
    if (out_used[e.from.node][e.from.flag]++)
      return Violation{Rule::DanglingGraft, e.from.node, e.from.flag, "output flag grafted twice"};
    if (in_used[e.to.node][e.to.flag]++)
      return Violation{Rule::DanglingGraft, e.to.node, e.to.flag, "input flag grafted twice"};
    const Arity a = g.nodes[e.from.node].out_flags[e.from.flag];
    const Arity b = g.nodes[e.to.node].in_flags[e.to.flag];
    if (a != b)
      return Violation{Rule::ArityMismatch, e.to.node, e.to.flag,
                       "grafted labels differ: " + to_string(a) + " vs " + to_string(b)};
    succ[e.from.node].push_back(e.to.node);
  }

  // Kahn's algorithm; leftovers lie on a directed cycle.
  std::vector<std::size_t> indegree(count, 0);
  for (const auto& s : succ)
    for (auto t : s) ++indegree[t];
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < count; ++i)
    if (!indegree[i]) ready.push_back(i);
  std::size_t seen = 0;
  while (!ready.empty()) {
    auto v = ready.back();
    ready.pop_back();
    ++seen;
    for (auto t : succ[v])
      if (--indegree[t] == 0) ready.push_back(t);
  }
  if (seen != count) {
    for (std::size_t i = 0; i < count; ++i)
      if (indegree[i]) return Violation{Rule::CycleDetected, i, 0, "node lies on a directed cycle"};
  }
  auto check_open = [&](const std::vector<FlagRef>& open, std::vector<std::vector<int>>& used,
                        bool inputs) -> std::optional<Violation> {
    for (const auto& f : open) {
      if (f.node >= count || f.flag >= used[f.node].size())
        return Violation{Rule::DanglingGraft, f.node, f.flag, "open flag does not exist"};
      if (used[f.node][f.flag]++)
        return Violation{Rule::DanglingGraft, f.node, f.flag,
                         inputs ? "open input is grafted or listed twice" : "open output is grafted or listed twice"};
    }
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < used[i].size(); ++j)
        if (!used[i][j])
          return Violation{Rule::DanglingGraft, i, j,
                           inputs ? "input flag neither grafted nor open" : "output flag neither grafted nor open"};
    return std::nullopt;
  };
  if (auto v = check_open(g.open_inputs, in_used, true)) return v;
  if (auto v = check_open(g.open_outputs, out_used, false)) return v;

  return std::nullopt;
}

/// Program rules on top of graph rules: a single open output, and a binding
/// whose leaves fit the open input labels.
inline std::optional<Violation> validate(const Program& p) {
  if (auto v = validate(p.graph)) return v;
  if (p.graph.open_outputs.size() != 1) {
    std::size_t node = p.graph.open_outputs.empty() ? 0 : p.graph.open_outputs[1].node;
    return Violation{Rule::DanglingGraft, node, 0, "a program has exactly one open output"};
  }
  if (p.binding.size() != p.graph.open_inputs.size())
    return Violation{Rule::DanglingGraft, 0, 0,
                     "binding has " + std::to_string(p.binding.size()) + " entries for " +
                         std::to_string(p.graph.open_inputs.size()) + " open inputs"};
  for (std::size_t j = 0; j < p.binding.size(); ++j) {
    const auto& f = p.graph.open_inputs[j];
    const Arity a = p.graph.nodes[f.node].in_flags[f.flag];
    if (!p.binding[j].fits(a))
      return Violation{Rule::ArityMismatch, f.node, f.flag, "bound leaf does not fit input label " + to_string(a)};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Term: the tree view of a program, used by the evaluator and the codec.

struct TermNode {
  Label label = Label::Leaf;
  BasicFunc leaf{};
  Arity arity{};  // output arity
  std::uint32_t first_kid = 0;
  std::uint32_t kid_count = 0;
};

/// Flat pre-order tree; node 0 is the root. Children of a node are listed in
/// `kids[first_kid .. first_kid + kid_count)` in input-flag order.
struct Term {
  std::vector<TermNode> nodes;
  std::vector<std::uint32_t> kids;

  Arity arity() const { return nodes.front().arity; }
  std::size_t size() const { return nodes.size(); }
  std::span<const std::uint32_t> children(const TermNode& n) const {
    return {kids.data() + n.first_kid, n.kid_count};
  }

  /// Appends a node with `kid_count` child slots to be filled later.
  std::uint32_t push(Label label, BasicFunc leaf, Arity arity, std::uint32_t kid_count) {
    nodes.push_back({label, leaf, arity, static_cast<std::uint32_t>(kids.size()), kid_count});
    kids.resize(kids.size() + kid_count, 0);
    return static_cast<std::uint32_t>(nodes.size() - 1);
  }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.nodes.size() != b.nodes.size()) return false;
    return same(a, 0, b, 0);
  }

 private:
  static bool same(const Term& a, std::uint32_t i, const Term& b, std::uint32_t j) {
    const auto& x = a.nodes[i];
    const auto& y = b.nodes[j];
    if (x.label != y.label || x.arity != y.arity || x.kid_count != y.kid_count) return false;
    if (x.label == Label::Leaf && !(x.leaf == y.leaf)) return false;
    for (std::uint32_t k = 0; k < x.kid_count; ++k)
      if (!same(a, a.kids[x.first_kid + k], b, b.kids[y.first_kid + k])) return false;
    return true;
  }
};

namespace detail {

inline void append_subtree(const Term& src, std::uint32_t i, Term& dst, std::uint32_t slot, bool has_slot) {
  const auto& n = src.nodes[i];
  auto id = dst.push(n.label, n.leaf, n.arity, n.kid_count);
  if (has_slot) dst.kids[slot] = id;
  const auto base = dst.nodes[id].first_kid;
  for (std::uint32_t k = 0; k < n.kid_count; ++k) append_subtree(src, src.kids[n.first_kid + k], dst, base + k, true);
}

}  // namespace detail

/// Re-lays a term out in canonical pre-order with contiguous child slots.
inline Term normalized(const Term& t) {
  Term out;
  out.nodes.reserve(t.nodes.size());
  detail::append_subtree(t, 0, out, 0, false);
  return out;
}

/// Checks the corolla schema at every node of a term.
inline std::optional<Violation> validate(const Term& t) {
  if (t.nodes.empty()) return Violation{Rule::DanglingGraft, 0, 0, "empty term"};
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& n = t.nodes[i];
    OpNode node{n.label, n.leaf, {}, {n.arity}};
    for (auto k : t.children(n)) node.in_flags.push_back(t.nodes[k].arity);
    if (auto v = detail::check_schema(node, i)) return v;
  }
  return std::nullopt;
}

/// Tree view of a valid program; open inputs become inlined leaves.
inline Term to_term(const Program& p) {
  if (auto v = validate(p)) throw ValidationError(*v);
  const auto& g = p.graph;
  std::vector<std::vector<std::optional<std::size_t>>> source(g.nodes.size());
  std::vector<std::vector<std::optional<std::size_t>>> bound(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    source[i].assign(g.nodes[i].in_flags.size(), std::nullopt);
    bound[i].assign(g.nodes[i].in_flags.size(), std::nullopt);
  }
  for (const auto& e : g.grafts) source[e.to.node][e.to.flag] = e.from.node;
  for (std::size_t j = 0; j < g.open_inputs.size(); ++j) bound[g.open_inputs[j].node][g.open_inputs[j].flag] = j;

  Term t;
  t.nodes.reserve(g.nodes.size() + p.binding.size());
  // Explicit stack: (graph node, parent slot or -1).
  struct Item {
    std::size_t node;
    std::int64_t slot;
  };
  std::vector<Item> stack{{g.open_outputs[0].node, -1}};
  while (!stack.empty()) {
    auto [v, slot] = stack.back();
    stack.pop_back();
    const auto& n = g.nodes[v];
    auto id = t.push(n.label, n.leaf, n.out_flags[0], static_cast<std::uint32_t>(n.in_flags.size()));
    if (slot >= 0) t.kids[static_cast<std::size_t>(slot)] = id;
    const auto base = t.nodes[id].first_kid;
    for (std::size_t k = n.in_flags.size(); k-- > 0;) {
      if (source[v][k]) {
        stack.push_back({*source[v][k], static_cast<std::int64_t>(base + k)});
      } else {
        // Leaves are pushed directly; no further expansion needed.
        auto leaf = t.push(Label::Leaf, p.binding[*bound[v][k]], n.in_flags[k], 0);
        t.kids[base + k] = leaf;
      }
    }
  }
  return normalized(t);
}

/// Canonical graph form of a term: nodes in post-order (children before
/// parents, children in flag order), leaves inlined, empty binding.
inline Program to_program(const Term& t) {
  Program p;
  auto& g = p.graph;
  g.nodes.reserve(t.nodes.size());
  std::vector<std::size_t> graph_id(t.nodes.size());

  // Iterative post-order.
  std::vector<std::pair<std::uint32_t, bool>> stack{{0, false}};
  while (!stack.empty()) {
    auto [i, expanded] = stack.back();
    stack.pop_back();
    const auto& n = t.nodes[i];
    if (!expanded) {
      stack.push_back({i, true});
      for (std::uint32_t k = n.kid_count; k-- > 0;) stack.push_back({t.kids[n.first_kid + k], false});
      continue;
    }
    OpNode node{n.label, n.label == Label::Leaf ? n.leaf : BasicFunc{}, {}, {n.arity}};
    for (auto k : t.children(n)) node.in_flags.push_back(t.nodes[k].arity);
    graph_id[i] = g.nodes.size();
    for (std::uint32_t k = 0; k < n.kid_count; ++k)
      g.grafts.push_back({{graph_id[t.kids[n.first_kid + k]], 0}, {graph_id[i], k}});
    g.nodes.push_back(std::move(node));
  }
  std::sort(g.grafts.begin(), g.grafts.end(),
            [](const Graft& a, const Graft& b) { return std::tie(a.to, a.from) < std::tie(b.to, b.from); });
  g.open_outputs.push_back({graph_id[0], 0});
  return p;
}

/// Canonical representative of a program's isomorphism class.
inline Program canonical(const Program& p) { return to_program(to_term(p)); }

inline bool equivalent(const Program& a, const Program& b) { return to_term(a) == to_term(b); }

}  // namespace zlw

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "zlw/opgraph.hpp"

namespace zlw {

/// A finite partial (m,n)-function given by its graph. Points missing from
/// `entries` are outside the domain.
struct OracleTable {
  Arity arity{};
  std::map<std::vector<std::uint64_t>, std::vector<std::uint64_t>> entries;
};

/// What a LibRef address resolves to.
using LibraryEntry = std::variant<Term, OracleTable>;

/// Elementary functions (always present) plus an addressed library and a
/// registry of oracle tables. Library programs may only refer to library
/// entries at lower addresses, so resolution is well-founded.
class AdmissibleContext {
 public:
  AdmissibleContext() = default;

  static AdmissibleContext bare() { return {}; }

  std::uint64_t add_program(const Program& p, std::string name = {}) { return add_term(to_term(p), std::move(name)); }

  std::uint64_t add_term(Term t, std::string name = {}) {
    if (auto v = validate(t)) throw ValidationError(*v);
    const std::uint64_t address = library_.size() + 1;
    for (const auto& n : t.nodes) {
      if (n.label != Label::Leaf) continue;
      if (n.leaf.kind == BasicFunc::Kind::LibRef && n.leaf.address >= address)
        throw std::invalid_argument("library program at address " + std::to_string(address) +
                                    " refers to address " + std::to_string(n.leaf.address));
    }
    library_.emplace_back(std::move(t));
    names_.push_back(std::move(name));
    return address;
  }

  std::uint64_t add_table(OracleTable table, std::string name = {}) {
    library_.emplace_back(std::move(table));
    names_.push_back(std::move(name));
    return library_.size();
  }

  void register_oracle(std::uint64_t id, OracleTable table) {
    if (id == 0) throw std::invalid_argument("oracle ids start at 1");
    oracles_[id] = std::move(table);
  }

  const LibraryEntry* library(std::uint64_t address) const {
    if (address == 0 || address > library_.size()) return nullptr;
    return &library_[address - 1];
  }

  const OracleTable* oracle(std::uint64_t id) const {
    auto it = oracles_.find(id);
    return it == oracles_.end() ? nullptr : &it->second;
  }

  std::size_t library_size() const { return library_.size(); }
  const std::string& library_name(std::uint64_t address) const { return names_.at(address - 1); }
  std::size_t oracle_count() const { return oracles_.size(); }

 private:
  std::vector<LibraryEntry> library_;
  std::vector<std::string> names_;
  std::map<std::uint64_t, OracleTable> oracles_;
};

}  // namespace zlw

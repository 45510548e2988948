#pragma once

// One pass over every constant program, i.e. every code with root arity
// (0,1), up to a code length. The pass records, per output value, the
// shortlex-first witness and the dyadic mass sum of 2^-|p|. Both the
// complexity tables and the mass table are read off it.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "zlw/enumerate.hpp"
#include "zlw/evaluator.hpp"

namespace zlw {

struct SweepOptions {
  unsigned max_bits = 28;
  Fuel fuel{};
  unsigned workers = 1;
};

/// Position of a constant program: its code length and its 1-based index
/// among constant codes of that length.
struct SweepPosition {
  unsigned bits = 0;
  std::uint64_t index = 0;

  friend auto operator<=>(const SweepPosition&, const SweepPosition&) = default;
};

struct ConstantInfo {
  SweepPosition witness;
  CodeWord code;
  /// Mass in units of 2^-max_bits.
  std::uint64_t mass = 0;
  std::uint64_t programs = 0;
};

class ConstantSweep {
 public:
  ConstantSweep(const AdmissibleContext& ctx, SweepOptions opt) : opt_(opt) {
    if (opt.max_bits < 1 || opt.max_bits > 62) throw std::invalid_argument("max_bits must lie in 1..62");
    const auto base = root_prefix({0, 1});
    const auto bands = make_bands(opt.max_bits, base, 6);
    std::vector<Partial> parts(bands.size());
    parallel_for(bands.size(), opt.workers, [&](std::size_t i) { parts[i] = run_band(ctx, bands[i]); });

    per_length_.assign(opt.max_bits + 1, 0);
    for (std::size_t i = 0; i < bands.size(); ++i) {
      const unsigned len = bands[i].length;
      const std::uint64_t offset = per_length_[len];
      const std::uint64_t unit = std::uint64_t{1} << (opt.max_bits - len);
      for (auto& [x, local] : parts[i].values) {
        auto [it, fresh] = values_.try_emplace(x);
        auto& info = it->second;
        if (fresh) {
          info.witness = {len, offset + local.first_index};
          info.code = std::move(local.first_code);
        }
        info.mass += unit * local.count;
        info.programs += local.count;
      }
      if (parts[i].first_exhausted && !first_exhausted_)
        first_exhausted_ = SweepPosition{len, offset + *parts[i].first_exhausted};
      per_length_[len] += parts[i].total;
      defined_ += parts[i].defined;
      exhausted_ += parts[i].exhausted;
      undefined_ += parts[i].undefined;
    }
  }

  const SweepOptions& options() const { return opt_; }
  unsigned max_bits() const { return opt_.max_bits; }
  const std::map<std::uint64_t, ConstantInfo>& values() const { return values_; }

  const ConstantInfo* find(std::uint64_t x) const {
    auto it = values_.find(x);
    return it == values_.end() ? nullptr : &it->second;
  }

  /// Constant codes of each length 0..max_bits.
  const std::vector<std::uint64_t>& per_length() const { return per_length_; }
  std::optional<SweepPosition> first_exhausted() const { return first_exhausted_; }
  std::uint64_t defined_count() const { return defined_; }
  std::uint64_t exhausted_count() const { return exhausted_; }
  std::uint64_t undefined_count() const { return undefined_; }

 private:
  struct Local {
    std::uint64_t first_index = 0;
    CodeWord first_code;
    std::uint64_t count = 0;
  };
  struct Partial {
    std::map<std::uint64_t, Local> values;
    std::optional<std::uint64_t> first_exhausted;
    std::uint64_t total = 0, defined = 0, exhausted = 0, undefined = 0;
  };

  Partial run_band(const AdmissibleContext& ctx, const Band& band) const {
    Partial out;
    detail::Machine machine(ctx, opt_.fuel);
    for_each_code(band.length, band.prefix, [&](std::span<const std::uint8_t> bits, const Term& t) {
      ++out.total;
      std::uint64_t x = 0;
      switch (machine.run_scalar(t, {}, x)) {
        case detail::Machine::Status::Ok: {
          ++out.defined;
          auto& local = out.values[x];
          if (local.count++ == 0) {
            local.first_index = out.total;
            local.first_code.bits.assign(bits.begin(), bits.end());
          }
          break;
        }
        case detail::Machine::Status::Exhausted:
          ++out.exhausted;
          if (!out.first_exhausted) out.first_exhausted = out.total;
          break;
        case detail::Machine::Status::Undefined: ++out.undefined; break;
      }
    });
    return out;
  }

  SweepOptions opt_;
  std::map<std::uint64_t, ConstantInfo> values_;
  std::vector<std::uint64_t> per_length_;
  std::optional<SweepPosition> first_exhausted_;
  std::uint64_t defined_ = 0, exhausted_ = 0, undefined_ = 0;
};

}  // namespace zlw

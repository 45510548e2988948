// zlw: command-line front end.
//
// Every command is deterministic given its flags; --workers only changes
// speed. JSON outputs start with a metadata header, JSON-lines outputs with
// a metadata line. Exit codes: 0 ok, 2 parse/input error, 3 domain or arity
// error, 4 horizon exceeded, 1 anything else.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zlw/codec.hpp"
#include "zlw/complexity.hpp"
#include "zlw/enumerate.hpp"
#include "zlw/evaluator.hpp"
#include "zlw/levin.hpp"
#include "zlw/numbering.hpp"
#include "zlw/stdlib.hpp"
#include "zlw/text_format.hpp"
#include "zlw/version.hpp"
#include "zlw/zipf.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace zlw;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Global {
  unsigned workers = 1;
  bool json_errors = false;
  std::string context = "std";
};

AdmissibleContext make_context(const std::string& name) {
  if (name == "std") return stdlib::standard_context();
  if (name == "bare") return AdmissibleContext::bare();
  throw std::invalid_argument("unknown context '" + name + "' (expected std or bare)");
}

json meta(const std::string& command, const Global& g, json params) {
  json m;
  m["tool"] = "zlw";
  m["version"] = kVersion;
  m["command"] = command;
  m["context"] = g.context;
  m["params"] = std::move(params);
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

/// Writes to `path`, or to stdout when the path is empty.
void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  write(out);
}

void check_positive(std::uint64_t v, const char* name) {
  if (v == 0) throw std::invalid_argument(std::string(name) + " must be at least 1");
}

json complexity_json(std::uint64_t x, const std::optional<ComplexityValue>& v) {
  json row;
  row["x"] = x;
  if (v) {
    row["index_form"] = v->index_form;
    row["bits_form"] = v->bits_form;
    row["witness_rank"] = v->witness_rank;
    row["status"] = status_name(v->status);
  } else {
    row["index_form"] = nullptr;
    row["bits_form"] = nullptr;
    row["witness_rank"] = nullptr;
    row["status"] = "NotFoundWithinHorizon";
  }
  return row;
}

json rational_json(const Rational& r) { return json::array({r.numerator(), r.denominator()}); }

MassTable load_or_build_table(const std::string& path, const Global& g, unsigned max_bits, std::uint64_t fuel) {
  if (!path.empty()) {
    auto in = open_input(path);
    return read_mass_table(in);
  }
  return mass_table(make_context(g.context), max_bits, Fuel{fuel}, g.workers);
}

// ---- eval ----

struct EvalOpts {
  std::string file, inline_text;
  std::vector<std::uint64_t> args;
  std::uint64_t fuel = 10'000;
  std::uint64_t value_cap = Fuel{}.value_cap;
};

void cmd_eval(const EvalOpts& o, const Global& g) {
  if (o.file.empty() == o.inline_text.empty()) throw InputError("give exactly one of --file or --inline");
  check_positive(o.fuel, "--fuel");
  check_positive(o.value_cap, "--value-cap");
  const std::string text = o.file.empty() ? o.inline_text : read_file(o.file);
  const Program p = parse(text);
  const auto ctx = make_context(g.context);
  const auto r = eval(p, o.args, Fuel{o.fuel, o.value_cap}, ctx);
  json out;
  out["meta"] = meta("eval", g, {{"args", o.args}, {"fuel", o.fuel}, {"value_cap", o.value_cap}});
  out["arity"] = to_string(to_term(p).arity());
  out["code"] = encode(p).str();
  json outcome;
  outcome["kind"] = kind_name(r.kind);
  outcome["value"] = r.value;
  outcome["steps"] = r.steps;
  outcome["cause"] = r.cause == EvalOutcome::Cause::Budget     ? "budget"
                     : r.cause == EvalOutcome::Cause::ValueCap ? "value_cap"
                                                               : "none";
  out["outcome"] = outcome;
  std::cout << out.dump(2) << '\n';
}

// ---- enum ----

struct EnumOpts {
  unsigned max_bits = 28;
  std::uint64_t horizon = 100'000;
  std::string out;
};

void cmd_enum(const EnumOpts& o, const Global& g) {
  if (o.max_bits < 1 || o.max_bits > 62) throw std::invalid_argument("--max-bits must lie in 1..62");
  check_positive(o.horizon, "--horizon");
  const ProgramStream stream(o.horizon, g.workers, o.max_bits);
  emit(o.out, [&](std::ostream& os) {
    os << "rank\tbits\tcode\tarity\tprogram\n";
    for (std::uint64_t r = 1; r <= stream.size(); ++r) {
      const auto& t = stream.unrank(r);
      const auto& c = stream.code(r);
      os << r << '\t' << c.length() << '\t' << c.str() << '\t' << to_string(t.arity()) << '\t'
         << serialize_line(to_program(t)) << '\n';
    }
  });
}

// ---- k / kp ----

struct KOpts {
  std::optional<std::uint64_t> x;
  std::uint64_t from = 1, to = 2048;
  unsigned max_bits = 28;
  std::uint64_t fuel = 10'000;
  double eps = 0.1;
};

void cmd_k(const KOpts& o, const Global& g, bool prefix) {
  if (o.max_bits < 1 || o.max_bits > 62) throw std::invalid_argument("--max-bits must lie in 1..62");
  check_positive(o.fuel, "--fuel");
  const std::uint64_t lo = o.x ? *o.x : o.from, hi = o.x ? *o.x : o.to;
  check_positive(lo, "x");
  check_positive(hi, "--to");
  if (lo > hi) throw std::invalid_argument("empty x range");
  const auto table = ComplexityTable::build(make_context(g.context), {o.max_bits, Fuel{o.fuel}, g.workers});
  if (o.x && !table.khat(*o.x)) table.khat_or_throw(*o.x);

  json params{{"from", lo}, {"to", hi}, {"max_bits", o.max_bits}, {"fuel", o.fuel}};
  if (prefix) params["eps"] = o.eps;
  std::cout << json{{"meta", meta(prefix ? "kp" : "k", g, params)}}.dump() << '\n';
  for (std::uint64_t x = lo; x <= hi; ++x) {
    const auto v = prefix ? table.kphat(x) : table.khat(x);
    json row = complexity_json(x, v);
    if (prefix && v) {
      // K̂ against K̂P log^(1+eps) K̂P with K̂P = 2^bits; report only.
      const double b = v->bits_form;
      const double bound = std::ldexp(1.0, static_cast<int>(v->bits_form)) * std::pow(b, 1.0 + o.eps);
      row["kp_bound"] = bound;
      row["k_within_bound"] = static_cast<double>(table.khat(x)->index_form) <= bound;
    }
    std::cout << row.dump() << '\n';
  }
}

// ---- nr ----

struct NrOpts {
  std::string R = "squares";
  std::uint64_t horizon = 100'000;
  std::uint64_t k = 0, l = 0, n = 0;
  std::uint64_t value_bound = 1000;
};

json sequence_json(const RSequence& R) {
  json j;
  j["name"] = R.name;
  j["kind"] = R.kind == RSequence::Kind::Convergent ? "convergent" : "divergent";
  if (R.kind == RSequence::Kind::Convergent) j["c"] = rational_json(R.c);
  return j;
}

void cmd_nr(const std::string& action, const NrOpts& o, const Global& g) {
  const auto R = RSequence::by_name(o.R);
  check_positive(o.horizon, "--horizon");
  json out;
  if (action == "rank") {
    check_positive(o.k, "--k");
    check_positive(o.l, "--l");
    // rank(k,l) >= max(k,l): (1..k-1, l) and (1, 1..l-1) all come first.
    if (o.k > o.horizon || o.l > o.horizon)
      throw HorizonExceeded("pair lies beyond the horizon of " + std::to_string(o.horizon) + " ranks");
    const Rational v = Rational(static_cast<std::int64_t>(o.k)) * R.at(o.l);
    const auto bound = static_cast<std::uint64_t>(boost::rational_cast<std::int64_t>(v)) + 1;
    if (NRNumbering::count_members(R, bound - 1) > o.horizon)
      throw HorizonExceeded("pair lies beyond the horizon of " + std::to_string(o.horizon) + " ranks");
    const NRNumbering N(R, bound);
    out["meta"] = meta("nr rank", g, {{"R", R.name}, {"horizon", o.horizon}, {"k", o.k}, {"l", o.l}});
    out["sequence"] = sequence_json(R);
    out["k"] = o.k;
    out["l"] = o.l;
    out["value"] = rational_json(v);
    out["rank"] = N.rank(o.k, o.l);
  } else if (action == "unrank") {
    check_positive(o.n, "--n");
    if (o.n > o.horizon)
      throw HorizonExceeded("rank " + std::to_string(o.n) + " beyond the horizon of " + std::to_string(o.horizon));
    const auto N = NRNumbering::with_ranks(R, o.n);
    const auto [k, l] = N.unrank(o.n);
    out["meta"] = meta("nr unrank", g, {{"R", R.name}, {"horizon", o.horizon}, {"n", o.n}});
    out["sequence"] = sequence_json(R);
    out["n"] = o.n;
    out["k"] = k;
    out["l"] = l;
  } else {
    check_positive(o.value_bound, "--value-bound");
    if (NRNumbering::count_members(R, o.value_bound) > o.horizon)
      throw HorizonExceeded("value bound " + std::to_string(o.value_bound) + " holds more than " +
                            std::to_string(o.horizon) + " pairs");
    const auto seq = check_sequence(R, o.horizon);
    const NRNumbering N(R, o.value_bound);
    const auto rep = check_bounds(N);
    out["meta"] = meta("nr bounds", g, {{"R", R.name}, {"horizon", o.horizon}, {"value_bound", o.value_bound}});
    out["sequence"] = sequence_json(R);
    out["sequence_check"] = {{"ok", seq.ok}, {"checked", seq.checked}, {"detail", seq.detail}};
    out["bound"] = rep.bound;
    out["pairs_checked"] = rep.pairs_checked;
    out["holds"] = true;
    out["max_ratio"] = rational_json(rep.max_ratio);
    out["max_ratio_value"] = boost::rational_cast<double>(rep.max_ratio);
    out["argmax"] = {rep.argmax.first, rep.argmax.second};
  }
  std::cout << out.dump(2) << '\n';
}

// ---- levin / sample ----

struct LevinOpts {
  unsigned max_bits = 28;
  std::uint64_t fuel = 10'000;
  std::string out;
};

void cmd_levin(const LevinOpts& o, const Global& g) {
  if (o.max_bits < 1 || o.max_bits > 62) throw std::invalid_argument("--max-bits must lie in 1..62");
  check_positive(o.fuel, "--fuel");
  const auto t = mass_table(make_context(g.context), o.max_bits, Fuel{o.fuel}, g.workers);
  emit(o.out, [&](std::ostream& os) { write_mass_table(os, t); });
}

struct SampleOpts {
  std::string table, out;
  unsigned max_bits = 28;
  std::uint64_t fuel = 10'000;
  std::uint64_t n = 100'000;
  std::uint64_t seed = 42;
  std::optional<std::size_t> top;
};

void cmd_sample(const SampleOpts& o, const Global& g) {
  check_positive(o.n, "--n");
  auto t = load_or_build_table(o.table, g, o.max_bits, o.fuel);
  if (o.top) {
    check_positive(*o.top, "--top");
    t = t.top(*o.top);
  }
  const auto corpus = corpus_from_counts(sample(t, o.n, o.seed));
  if (o.out.empty()) {
    write_corpus(std::cout, corpus);
    return;
  }
  emit(o.out, [&](std::ostream& os) { write_corpus(os, corpus); });
  json params{{"n", o.n}, {"seed", o.seed}, {"sampler", kSamplerId}};
  if (o.top) params["top"] = *o.top;
  if (o.table.empty()) {
    params["max_bits"] = o.max_bits;
    params["fuel"] = o.fuel;
  } else {
    params["table"] = o.table;
  }
  json out;
  out["meta"] = meta("sample", g, params);
  out["support"] = t.entries.size();
  out["distinct"] = corpus.size();
  out["out"] = o.out;
  std::cout << out.dump(2) << '\n';
}

// ---- zipf ----

struct ZipfOpts {
  std::string corpus, method = "both", residuals;
  std::uint64_t from = 1;
  std::optional<std::uint64_t> to;
};

void cmd_zipf(const ZipfOpts& o, const Global& g) {
  auto in = open_input(o.corpus);
  const auto rc = rank_frequency(read_corpus(in));
  std::vector<FitMethod> methods;
  if (o.method == "both") {
    methods = {FitMethod::LeastSquares, FitMethod::MaximumLikelihood};
  } else {
    methods = {parse_method(o.method)};
  }
  std::vector<PowerLawFit> fits;
  check_positive(o.from, "--from");
  if (o.to) check_positive(*o.to, "--to");
  for (auto m : methods) fits.push_back(fit_power_law(rc, m, {o.from, o.to.value_or(0)}));

  json out;
  out["meta"] = meta("zipf", g, {{"corpus", o.corpus}, {"method", o.method}, {"from", o.from}, {"to", fits.front().r_max}});
  out["tokens"] = rc.size();
  out["total"] = rc.total;
  json arr = json::array();
  for (const auto& f : fits) {
    const auto d = zipf_deviation(rc, f);
    arr.push_back({{"method", method_name(f.method)},
                   {"exponent", f.exponent},
                   {"r_min", f.r_min},
                   {"r_max", f.r_max},
                   {"log_scale", f.log_scale},
                   {"ks", f.ks},
                   {"deviation", {{"max_abs", d.max_abs}, {"mean_abs", d.mean_abs}}}});
  }
  out["fits"] = arr;
  if (!o.residuals.empty()) {
    emit(o.residuals, [&](std::ostream& os) {
      os << "rank\ttoken\tcount";
      for (const auto& f : fits) os << "\tpredicted_" << method_name(f.method) << "\tresidual_" << method_name(f.method);
      os << '\n';
      char buf[64];
      for (std::uint64_t r = fits.front().r_min; r <= fits.front().r_max; ++r) {
        const auto& t = rc.tokens[r - 1];
        os << r << '\t' << t.token << '\t' << t.count;
        for (const auto& f : fits) {
          const double pred = f.log_scale - f.exponent * std::log(static_cast<double>(r));
          std::snprintf(buf, sizeof buf, "\t%.17g\t%.17g", pred, std::log(static_cast<double>(t.count)) - pred);
          os << buf;
        }
        os << '\n';
      }
    });
    out["residuals"] = o.residuals;
  }
  std::cout << out.dump(2) << '\n';
}

// ---- numerals ----

struct NumeralOpts {
  std::string corpus, map, table;
  unsigned max_bits = 28;
  std::uint64_t fuel = 10'000;
  double peak_factor = 2.0;
};

void cmd_numerals(const NumeralOpts& o, const Global& g) {
  auto cin_ = open_input(o.corpus);
  const auto rc = rank_frequency(read_corpus(cin_));
  auto min_ = open_input(o.map);
  const auto numerals = read_corpus(min_);  // token<TAB>integer has the corpus shape
  const auto t = load_or_build_table(o.table, g, o.max_bits, o.fuel);
  const auto rep = numeral_profile(rc, numerals, t, o.peak_factor);

  json params{{"corpus", o.corpus}, {"map", o.map}, {"peak_factor", o.peak_factor}};
  if (o.table.empty()) {
    params["max_bits"] = o.max_bits;
    params["fuel"] = o.fuel;
  } else {
    params["table"] = o.table;
  }
  json out;
  out["meta"] = meta("numerals", g, params);
  out["peak_factor"] = rep.peak_factor;
  out["peaks"] = rep.peaks;
  out["kendall_tau"] = rep.tau ? json(*rep.tau) : json(nullptr);
  out["compared"] = rep.compared;
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"token", r.token},
                    {"value", r.value},
                    {"count", r.count},
                    {"rank", r.rank},
                    {"mass_numerator", r.mass_numerator},
                    {"log2_denominator", t.max_bits},
                    {"k_bits", r.k_bits ? json(*r.k_bits) : json(nullptr)},
                    {"peak", r.peak}});
  out["rows"] = rows;
  std::cout << out.dump(2) << '\n';
}

// ---- errors ----

struct Failure {
  int code;
  std::string kind;
  std::string message;
  json extra = json::object();
};

Failure classify(std::exception_ptr ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const ParseError& e) {
    return {2, "ParseError", e.what(), {{"position", e.position()}}};
  } catch (const DecodeError& e) {
    return {2, "DecodeError", e.what(), {{"position", e.position()}}};
  } catch (const CorpusFormatError& e) {
    return {2, "CorpusFormatError", e.what(), {{"line", e.line}}};
  } catch (const TableFormatError& e) {
    return {2, "TableFormatError", e.what(), {{"line", e.line}}};
  } catch (const InputError& e) {
    return {2, "InputError", e.what()};
  } catch (const HorizonExceeded& e) {
    return {4, "HorizonExceeded", e.what()};
  } catch (const RangeExceeded& e) {
    return {4, "RangeExceeded", e.what()};
  } catch (const NotFoundWithinHorizon& e) {
    return {4, "NotFoundWithinHorizon", e.what()};
  } catch (const ArityError& e) {
    return {3, "ArityError", e.what()};
  } catch (const ValidationError& e) {
    return {3, "ValidationError", e.what()};
  } catch (const BoundViolated& e) {
    return {3, "BoundViolated", e.what(), {{"pair", {e.pair.first, e.pair.second}}}};
  } catch (const EmptyCorpus& e) {
    return {3, "EmptyCorpus", e.what()};
  } catch (const RangeTooSmall& e) {
    return {3, "RangeTooSmall", e.what()};
  } catch (const DegenerateCounts& e) {
    return {3, "DegenerateCounts", e.what()};
  } catch (const NoNumeralsFound& e) {
    return {3, "NoNumeralsFound", e.what()};
  } catch (const EmptyTable& e) {
    return {3, "EmptyTable", e.what()};
  } catch (const std::invalid_argument& e) {
    return {3, "InvalidArgument", e.what()};
  } catch (const std::exception& e) {
    return {1, "Error", e.what()};
  }
  return {1, "Error", "unknown error"};
}

int report(const Failure& f, bool as_json) {
  if (as_json) {
    json j{{"error", f.kind}, {"message", f.message}, {"exit_code", f.code}};
    for (auto& [k, v] : f.extra.items()) j[k] = v;
    std::cerr << j.dump() << '\n';
  } else {
    std::cerr << "zlw: " << f.kind << ": " << f.message << '\n';
  }
  return f.code;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  CLI::App app{"Programs over the operator language: evaluation, enumeration, complexity, Levin mass and Zipf fits."};
  app.set_version_flag("--version", std::string("zlw ") + kVersion);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  Global g;
  app.add_option("--workers", g.workers, "Worker threads; outputs do not depend on it")
      ->check(CLI::Range(1u, 256u));
  app.add_flag("--json-errors", g.json_errors, "Write diagnostics to stderr as JSON");
  app.add_option("--context", g.context, "Library context: std (pow2 double square add mul pow) or bare")
      ->check(CLI::IsMember({"std", "bare"}));

  std::function<void()> run;

  EvalOpts eo;
  auto* ev = app.add_subcommand("eval", "Evaluate a program on arguments");
  ev->add_option("--file", eo.file, "Program text file");
  ev->add_option("--inline", eo.inline_text, "Program text");
  ev->add_option("--args", eo.args, "Positive integer arguments");
  ev->add_option("--fuel", eo.fuel, "Step budget");
  ev->add_option("--value-cap", eo.value_cap, "Largest value a computation may produce");
  ev->callback([&] { run = [&] { cmd_eval(eo, g); }; });

  EnumOpts en;
  auto* enc = app.add_subcommand("enum", "Shortlex program table as TSV");
  enc->add_option("--max-bits", en.max_bits, "Longest code length");
  enc->add_option("--horizon", en.horizon, "Number of ranks");
  enc->add_option("--out", en.out, "Output file (default stdout)");
  enc->callback([&] { run = [&] { cmd_enum(en, g); }; });

  KOpts ko;
  auto add_k = [&](const char* name, const char* help, bool prefix) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("--x", ko.x, "Single integer (exit 4 when not found)");
    sc->add_option("--from", ko.from, "First integer of the range");
    sc->add_option("--to", ko.to, "Last integer of the range");
    sc->add_option("--max-bits", ko.max_bits, "Code length horizon");
    sc->add_option("--fuel", ko.fuel, "Step budget per program");
    if (prefix) sc->add_option("--eps", ko.eps, "Exponent slack in the K vs KP comparison");
    sc->callback([&, prefix] { run = [&, prefix] { cmd_k(ko, g, prefix); }; });
  };
  add_k("k", "K-hat of integers as JSON lines", false);
  add_k("kp", "K-hat-P of integers as JSON lines, with the K vs KP comparison", true);

  NrOpts no;
  std::string nr_action;
  auto* nr = app.add_subcommand("nr", "N_R pairing: rank, unrank, bounds");
  nr->add_option("--R", no.R, "Rate sequence: squares, linear or log-squared");
  nr->add_option("--horizon", no.horizon, "Largest rank handled");
  nr->require_subcommand(1);
  auto* nr_rank = nr->add_subcommand("rank", "Rank of the pair (k,l)");
  nr_rank->add_option("--k", no.k)->required();
  nr_rank->add_option("--l", no.l)->required();
  nr_rank->callback([&] { nr_action = "rank"; });
  auto* nr_unrank = nr->add_subcommand("unrank", "Pair at rank n");
  nr_unrank->add_option("--n", no.n)->required();
  nr_unrank->callback([&] { nr_action = "unrank"; });
  auto* nr_bounds = nr->add_subcommand("bounds", "Check the growth bound on all pairs up to a value");
  nr_bounds->add_option("--value-bound", no.value_bound, "Largest k*R_l checked");
  nr_bounds->callback([&] { nr_action = "bounds"; });
  nr->final_callback([&] { run = [&] { cmd_nr(nr_action, no, g); }; });

  LevinOpts lo;
  auto* lv = app.add_subcommand("levin", "Truncated Levin mass table as TSV");
  lv->add_option("--max-bits", lo.max_bits, "Code length horizon");
  lv->add_option("--fuel", lo.fuel, "Step budget per program");
  lv->add_option("--out", lo.out, "Output file (default stdout)");
  lv->callback([&] { run = [&] { cmd_levin(lo, g); }; });

  SampleOpts so;
  auto* sp = app.add_subcommand("sample", "Draw a corpus from a mass table");
  sp->add_option("--table", so.table, "Mass table TSV from 'levin' (default: build one)");
  sp->add_option("--max-bits", so.max_bits, "Code length horizon when building the table");
  sp->add_option("--fuel", so.fuel, "Step budget when building the table");
  sp->add_option("--n", so.n, "Number of draws");
  sp->add_option("--seed", so.seed, "Generator seed");
  sp->add_option("--top", so.top, "Keep only the heaviest entries (default: all)");
  sp->add_option("--out", so.out, "Corpus file; a JSON summary then goes to stdout");
  sp->callback([&] { run = [&] { cmd_sample(so, g); }; });

  ZipfOpts zo;
  auto* zp = app.add_subcommand("zipf", "Fit a power law to a rank-frequency corpus");
  zp->add_option("--corpus", zo.corpus, "Corpus TSV: token<TAB>count")->required();
  zp->add_option("--method", zo.method, "ls, mle or both")->check(CLI::IsMember({"ls", "mle", "both"}));
  zp->add_option("--from", zo.from, "First rank of the fit range");
  zp->add_option("--to", zo.to, "Last rank of the fit range (default: last)");
  zp->add_option("--residuals", zo.residuals, "Residual TSV output file");
  zp->callback([&] { run = [&] { cmd_zipf(zo, g); }; });

  NumeralOpts nu;
  auto* nm = app.add_subcommand("numerals", "Numeral frequencies against Levin mass and K-hat");
  nm->add_option("--corpus", nu.corpus, "Corpus TSV")->required();
  nm->add_option("--map", nu.map, "Numeral map TSV: token<TAB>integer")->required();
  nm->add_option("--table", nu.table, "Mass table TSV (default: build one)");
  nm->add_option("--max-bits", nu.max_bits, "Code length horizon when building the table");
  nm->add_option("--fuel", nu.fuel, "Step budget when building the table");
  nm->add_option("--peak-factor", nu.peak_factor, "Peak threshold against both neighbors");
  nm->callback([&] { run = [&] { cmd_numerals(nu, g); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report({2, "UsageError", e.what()}, g.json_errors);
  }

  try {
    run();
    std::cout.flush();
  } catch (...) {
    return report(classify(std::current_exception()), g.json_errors);
  }
  return 0;
}

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "geoinv/bindings.hpp"
#include "geoinv/io.hpp"

using namespace geoinv;
using io::Json;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

ScalarMode default_mode()
{
  if (const char* env = std::getenv("GEOINV_MODE"); env && *env) return parse_mode(env);
  return ScalarMode::Rational;
}

void write_text(const std::string& path, const std::string& text)
{
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
}

std::string fmt(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

void print_rows(const char* title, const std::vector<ResidualRow>& rows, const std::set<std::string>& excluded = {})
{
  if (rows.empty()) return;
  std::cerr << title << "\n";
  for (const auto& r : rows) {
    std::string status = r.pass ? "pass" : "FAIL";
    if (excluded.count(r.name)) status += " (excluded)";
    std::fprintf(stderr, "  %-28s %12s %12s  %s\n", r.name.c_str(), fmt(r.max_abs).c_str(), fmt(r.max_rel).c_str(),
                 status.c_str());
  }
}

struct GenArgs {
  int n = 3;
  std::uint64_t seed = 1;
  std::string mapping = "general";
  int s1 = 1, s2 = 1, s3 = 1;
  int p = 1;
  std::string mode;
  std::string out;
  bool free_aux = false;
  bool flags_given = false;
  bool p_given = false;
};

template <typename Scalar>
int run_gen(const GenArgs& a)
{
  const MappingKind kind = parse_mapping_kind(a.mapping);
  Flags flags{a.s1, a.s2, a.s3};
  for (int s : {a.s1, a.s2, a.s3})
    if (s != 0 && s != 1) throw InstanceError("flags must be 0 or 1");
  if (a.p_given && kind != MappingKind::Agm3) throw InstanceError("--p applies to agm3 mappings only");
  if (kind == MappingKind::Geodesic) {
    if (a.flags_given && flags != Flags{1, 0, 0}) throw InstanceError("geodesic mappings need s1=1, s2=0, s3=0");
    flags = Flags{1, 0, 0};
  }
  GenerateOptions opts;
  opts.free_auxiliaries = a.free_aux;
  MappingInstance<Scalar> inst;
  if (kind == MappingKind::Agm3) {
    if (a.flags_given && flags != agm_flags) throw InstanceError("agm3 mappings need s1=1, s2=0, s3=1");
    if (a.p != 1 && a.p != 2) throw InstanceError("--p must be 1 or 2");
    inst = generate_agm3<Scalar>(a.n, a.seed, a.p, opts);
  } else {
    inst = generate<Scalar>(a.n, a.seed, flags, kind, opts);
  }
  write_text(a.out, io::dump_instance(inst));
  return kPass;
}

struct CheckArgs {
  std::string file;
  double tol = Tolerance{}.rel;
  double abs_tol = Tolerance{}.abs;
  std::string report;
  std::vector<std::string> exclude;
  bool no_diagnostics = false;
  bool literal_p2 = false;
};

template <typename Scalar>
int run_check(const CheckArgs& a, const Json& file)
{
  const auto inst = io::instance_from_json<Scalar>(file);
  const CheckReport rep = check_instance(inst, Tolerance{a.tol, a.abs_tol}, !a.no_diagnostics);
  const std::set<std::string> excluded(a.exclude.begin(), a.exclude.end());
  for (const auto& name : excluded)
    if (std::none_of(rep.invariants.begin(), rep.invariants.end(), [&](const auto& r) { return r.name == name; }))
      throw Error("--exclude: no invariant named '" + name + "' in this report");
  bool pass = true;
  for (const auto& r : rep.consistency) pass = pass && r.pass;
  for (const auto& r : rep.invariants) pass = pass && (r.pass || excluded.count(r.name));

  Json j = io::report_json(rep);
  j["excluded"] = a.exclude;
  j["pass"] = pass;
  if (a.literal_p2) {
    if (!inst.agm || inst.agm->p != 2) throw NotApplicableError("--literal-p2 needs an agm3 instance of kind 2");
    // constraint with the typeset kind-2 derivative, reported only
    const auto& agm = *inst.agm;
    const Tensor<Scalar> r = agm_derivative(agm.vec, inst.L, AgmDerivative::Kind2Literal) - outer(agm.vec.value, agm.nu) -
                             agm.mu * delta<Scalar>(inst.dim);
    j["literal_p2"] = {{"max_abs", to_double(max_abs(r))}};
    std::cerr << "typeset kind-2 constraint residual: " << fmt(to_double(max_abs(r))) << " (not judged)\n";
  }
  write_text(a.report, j.dump(2) + "\n");

  std::cerr << "instance: N=" << rep.dim << " mapping=" << mapping_kind_name(rep.mapping) << " flags=(" << rep.flags.s1 << ","
            << rep.flags.s2 << "," << rep.flags.s3 << ") seed=" << rep.seed << " mode=" << mode_name(rep.mode) << "\n";
  std::fprintf(stderr, "  %-28s %12s %12s\n", "name", "max-abs", "max-rel");
  print_rows("consistency", rep.consistency);
  print_rows("invariants", rep.invariants, excluded);
  const auto bad = diagnostic_violations(rep, a.tol);
  if (!rep.diagnostics.empty()) {
    std::size_t differing = 0;
    for (const auto& d : rep.diagnostics) differing += d.differing_terms.empty() ? 0 : 1;
    std::cerr << "closed-form diagnostics: " << rep.diagnostics.size() << " grade classes, " << differing
              << " with typeset terms that differ, " << bad.size() << " unexplained\n";
  }
  std::cerr << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kPass : kFail;
}

struct IdentityArgs {
  int n = 4;
  std::uint64_t seed = 1;
  int count = 20;
  std::string mode;
  std::string report;
  double tol = Tolerance{}.rel;
};

template <typename Scalar>
int run_identities_cmd(const IdentityArgs& a)
{
  if (a.n < 3) throw InstanceError("identities need N >= 3");
  if (a.count < 1) throw InstanceError("--count must be positive");
  const auto rep = run_identities<Scalar>(a.n, a.seed, a.count, Tolerance{a.tol, Tolerance{}.abs});
  write_text(a.report, io::report_json(rep).dump(2) + "\n");
  std::cerr << "identities: N=" << rep.dim << " draws=" << rep.count << " seed=" << rep.seed << "\n";
  print_rows("blocking", rep.rows);
  print_rows("diagnostic (not judged)", rep.diagnostic);
  std::cerr << (rep.pass() ? "PASS" : "FAIL") << "\n";
  return rep.pass() ? kPass : kFail;
}

template <typename Scalar>
Json nested(const expr::Result<Scalar>& r, const std::vector<int>& order, std::vector<int>& idx, std::size_t depth)
{
  const int rank = r.tensor.rank();
  if (depth == order.size()) return io::to_json(r.tensor.at(std::span<const int>(idx.data(), static_cast<std::size_t>(rank))));
  Json arr = Json::array();
  for (int v = 0; v < r.tensor.dim(); ++v) {
    idx[static_cast<std::size_t>(order[depth])] = v;
    arr.push_back(nested(r, order, idx, depth + 1));
  }
  return arr;
}

struct EvalArgs {
  std::string file;
  std::string expression;
  std::string space = "source";
};

template <typename Scalar>
int run_eval(const EvalArgs& a, const Json& file)
{
  const auto inst = io::instance_from_json<Scalar>(file);
  const Side side = parse_side(a.space);
  const auto tree = expr::parse(a.expression);
  const auto bindings = instance_bindings(inst, side);
  const auto sf = side == Side::Source ? source_fields(inst) : target_fields(inst);
  const auto r = expr::evaluate(*tree, bindings, &sf.space, inst.dim);
  const auto order = expr::lexicographic_permutation(r);
  std::vector<int> idx(static_cast<std::size_t>(std::max(1, r.tensor.rank())), 0);
  std::cout << nested(r, order, idx, 0).dump() << "\n";
  std::string names = r.upper + r.lower;
  std::sort(names.begin(), names.end());
  std::cerr << "free indices: " << (names.empty() ? "none" : names) << " (upper " << (r.upper.empty() ? "-" : r.upper)
            << ", lower " << (r.lower.empty() ? "-" : r.lower) << ")\n";
  return kPass;
}

template <typename F>
int dispatch(ScalarMode mode, F&& f)
{
  return mode == ScalarMode::Rational ? f(Rational{}) : f(double{});
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Invariants of mappings between non-symmetric affine connection spaces"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a seeded random mapping instance");
  g->add_option("--n", gen.n, "dimension")->capture_default_str();
  g->add_option("--seed", gen.seed, "random seed")->capture_default_str();
  g->add_option("--mapping", gen.mapping, "general, geodesic or agm3")->capture_default_str();
  auto* o1 = g->add_option("--s1", gen.s1, "flag s1");
  auto* o2 = g->add_option("--s2", gen.s2, "flag s2");
  auto* o3 = g->add_option("--s3", gen.s3, "flag s3");
  auto* op = g->add_option("--p", gen.p, "kind of the almost geodesic mapping (1 or 2)");
  g->add_option("--mode", gen.mode, "rational or float (default: $GEOINV_MODE or rational)");
  g->add_option("-o,--output", gen.out, "output file (default stdout)");
  g->add_flag("--free-aux", gen.free_aux, "skip the closure conditions on the auxiliary fields");

  CheckArgs chk;
  auto* c = app.add_subcommand("check", "certify invariance on an instance file");
  c->add_option("file", chk.file, "instance file")->required();
  c->add_option("--tol", chk.tol, "relative tolerance in float mode")->capture_default_str();
  c->add_option("--abs-tol", chk.abs_tol, "absolute tolerance in float mode")->capture_default_str();
  c->add_option("--report", chk.report, "write the JSON report here instead of stdout");
  c->add_option("--exclude", chk.exclude, "invariant left out of the verdict (repeatable)");
  c->add_flag("--no-diagnostics", chk.no_diagnostics, "skip the closed-form term tables");
  c->add_flag("--literal-p2", chk.literal_p2, "also evaluate the kind-2 constraint exactly as typeset");

  IdentityArgs ids;
  auto* d = app.add_subcommand("identities", "run the single-space identity suite");
  d->add_option("--n", ids.n, "dimension")->capture_default_str();
  d->add_option("--seed", ids.seed, "first seed")->capture_default_str();
  d->add_option("--count", ids.count, "number of draws")->capture_default_str();
  d->add_option("--mode", ids.mode, "rational or float");
  d->add_option("--tol", ids.tol, "relative tolerance in float mode")->capture_default_str();
  d->add_option("--report", ids.report, "write the JSON report here instead of stdout");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "evaluate an index expression on an instance");
  e->add_option("file", ev.file, "instance file")->required();
  e->add_option("expression", ev.expression, "expression, e.g. \"alt(R{;ij}; i,j)\"")->required();
  e->add_option("--space", ev.space, "source or target")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kUsage;
  }

  try {
    if (*g) {
      gen.flags_given = o1->count() + o2->count() + o3->count() > 0;
      gen.p_given = op->count() > 0;
      const ScalarMode mode = gen.mode.empty() ? default_mode() : parse_mode(gen.mode);
      return dispatch(mode, [&](auto tag) { return run_gen<decltype(tag)>(gen); });
    }
    if (*c) {
      const Json file = io::read_json_file(chk.file);
      return dispatch(io::file_mode(file), [&](auto tag) { return run_check<decltype(tag)>(chk, file); });
    }
    if (*d) {
      const ScalarMode mode = ids.mode.empty() ? default_mode() : parse_mode(ids.mode);
      return dispatch(mode, [&](auto tag) { return run_identities_cmd<decltype(tag)>(ids); });
    }
    if (*e) {
      const Json file = io::read_json_file(ev.file);
      return dispatch(io::file_mode(file), [&](auto tag) { return run_eval<decltype(tag)>(ev, file); });
    }
  } catch (const ParseError& ex) {
    std::cerr << "parse error: " << ex.what() << "\n";
    return kUsage;
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

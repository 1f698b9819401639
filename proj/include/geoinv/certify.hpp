#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "geoinv/agm.hpp"

namespace geoinv {

struct Tolerance {
  double rel = 1e-9;
  double abs = 1e-12;
};

/// One line of a residual table: source vs target for invariants, or an
/// expression against zero for identities.
struct ResidualRow {
  std::string name;
  std::string tag;
  double max_abs = 0;
  double max_rel = 0;
  bool pass = true;
};

struct AgmDiagnosticRow {
  std::string side;
  std::string form;
  std::string grade;
  std::vector<std::string> terms;
  std::vector<std::string> differing_terms;
  double printed_residual = 0;
  double derived_residual = 0;
};

struct CheckReport {
  int dim = 0;
  ScalarMode mode = ScalarMode::Rational;
  MappingKind mapping = MappingKind::General;
  Flags flags;
  std::uint64_t seed = 0;
  std::vector<ResidualRow> consistency;
  std::vector<ResidualRow> invariants;
  std::vector<AgmDiagnosticRow> diagnostics;

  bool pass() const
  {
    auto ok = [](const ResidualRow& r) { return r.pass; };
    return std::all_of(consistency.begin(), consistency.end(), ok) && std::all_of(invariants.begin(), invariants.end(), ok);
  }
};

template <typename Scalar>
ResidualRow compare(std::string name, std::string tag, const Tensor<Scalar>& a, const Tensor<Scalar>& b, const Tolerance& tol)
{
  if (!a.same_shape(b)) throw ShapeError("compare: shape mismatch for " + name);
  ResidualRow row{std::move(name), std::move(tag)};
  const Scalar diff = max_abs(a - b);
  const Scalar scale = std::max(max_abs(a), max_abs(b));
  row.max_abs = to_double(diff);
  row.max_rel = is_zero(scale) ? 0.0 : to_double(diff / scale);
  if constexpr (is_exact_v<Scalar>) {
    row.pass = is_zero(diff);
  } else {
    row.pass = row.max_abs <= tol.abs || row.max_rel <= tol.rel;
  }
  return row;
}

template <typename Scalar>
ResidualRow zero_check(std::string name, std::string tag, const Tensor<Scalar>& t, const Tensor<Scalar>& scale_ref,
                       const Tolerance& tol)
{
  ResidualRow row{std::move(name), std::move(tag)};
  const Scalar diff = max_abs(t);
  const Scalar scale = max_abs(scale_ref);
  row.max_abs = to_double(diff);
  row.max_rel = is_zero(scale) ? 0.0 : to_double(diff / scale);
  if constexpr (is_exact_v<Scalar>) {
    row.pass = is_zero(diff);
  } else {
    row.pass = row.max_abs <= tol.abs || row.max_rel <= tol.rel;
  }
  return row;
}

/// Names of the invariants that every general mapping is checked for.
inline const std::vector<std::string>& core_invariant_names()
{
  static const std::vector<std::string> names{"rho-skew",     "skew-ricci",    "thomas-basic",   "thomas-factored",
                                              "thomas-third", "weyl-basic",    "weyl-factored",  "weyl-first-over",
                                              "weyl-fourth"};
  return names;
}

namespace detail {

template <typename Scalar>
struct SideObjects {
  SpaceFields<Scalar> fields;
  FactoredObjects<Scalar> objects;
};

template <typename Scalar>
SideObjects<Scalar> side_objects(SpaceFields<Scalar> sf, const Flags& fl)
{
  auto o = factored_objects(sf, fl);
  return {std::move(sf), std::move(o)};
}

/// Geodesic Weyl form with the covector rule for the trace derivative.
template <typename Scalar>
Tensor<Scalar> geodesic_weyl_covector(const ConnectionSpace<Scalar>& space)
{
  const int n = space.dim();
  const auto& th = space.theta().value;
  const Tensor<Scalar> dth = space.derivative(space.theta());
  const Scalar c = fraction<Scalar>(1, n + 1);
  const Scalar np1 = fraction<Scalar>(n + 1);
  return space.riemann() + tabulate<Scalar, 4>(n, 1, 3, [&](int i, int j, int m, int k) {
           Scalar acc(0);
           if (i == j) acc += c * (dth(m, k) - dth(k, m));
           if (i == m) acc -= c * c * (np1 * dth(j, k) + th(j) * th(k));
           if (i == k) acc += c * c * (np1 * dth(j, m) + th(j) * th(m));
           return acc;
         });
}

}  // namespace detail

/// Evaluates every applicable invariant in the source and in the target
/// space of the instance and compares them.
template <typename Scalar>
CheckReport check_instance(const MappingInstance<Scalar>& inst, const Tolerance& tol = {}, bool diagnostics = true)
{
  validate(inst);
  CheckReport rep;
  rep.dim = inst.dim;
  rep.mode = mode_of_v<Scalar>;
  rep.mapping = inst.kind;
  rep.flags = inst.flags;
  rep.seed = inst.seed;
  const Flags& fl = inst.flags;
  const int n = inst.dim;

  const auto src = detail::side_objects(source_fields(inst), fl);
  const auto tgt = detail::side_objects(target_fields(inst), fl);
  const auto& ss = src.fields.space;
  const auto& ts = tgt.fields.space;

  if (fl.s1 == 1) {
    // same quantity as psi_residual, from the objects already at hand
    const auto& so = src.objects;
    const auto& to = tgt.objects;
    const Tensor<Scalar> r = (inst.u_bar - inst.u).value -
                             fraction<Scalar>(1, n + 1) * ((ts.theta().value - ss.theta().value) - (to.tau.value - so.tau.value));
    rep.consistency.push_back(zero_check("psi-residual", "psi recovered from the trace of the rule", r, r, tol));
  }
  if (inst.agm) {
    const Tensor<Scalar> r = scalar_tensor<Scalar>(n, agm_constraint_residual(inst));
    rep.consistency.push_back(zero_check("agm-constraint", "phi constraint in the source space", r, r, tol));
    const auto fit = fit_agm_parameters(inst.agm->vec, ts, inst.agm->p);
    const Tensor<Scalar> f = scalar_tensor<Scalar>(n, fit.residual);
    rep.consistency.push_back(zero_check("agm-target-fit", "phi constraint fitted in the target space", f, f, tol));
    rep.consistency.push_back(
        compare("agm-equitorsion", "torsion of source and target", ss.tor().value, ts.tor().value, tol));
  }

  auto add = [&](std::string name, std::string tag, const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
    rep.invariants.push_back(compare(std::move(name), std::move(tag), a, b, tol));
  };
  add("thomas-basic", "Thomas type, symmetric part minus omega", thomas_basic(ss, src.objects.omega.value),
      thomas_basic(ts, tgt.objects.omega.value));
  add("thomas-third", "Thomas type, half-sum of both symmetric parts", thomas_third(ss, ts), thomas_third(ts, ss));
  add("thomas-factored", "Thomas type, factored form", thomas_factored(src.fields, fl), thomas_factored(tgt.fields, fl));
  add("weyl-basic", "Weyl type, curvature of omega", weyl_basic(ss, src.objects.omega), weyl_basic(ts, tgt.objects.omega));
  add("weyl-factored", "Weyl type, factored form", weyl_factored(src.objects), weyl_factored(tgt.objects));
  add("weyl-fourth", "fourth derived Weyl type", weyl_fourth(src.objects), weyl_fourth(tgt.objects));
  add("weyl-first-over", "first derived Weyl type over the factored form", weyl_first_over(src.objects),
      weyl_first_over(tgt.objects));
  add("skew-ricci", "alternated Ricci tensor", alternate(src.objects.ricci, 0, 1), alternate(tgt.objects.ricci, 0, 1));
  add("rho-skew", "alternated rho", alternate(src.objects.rho, 0, 1), alternate(tgt.objects.rho, 0, 1));
  if (n >= 3) {
    const auto ds = derived_invariants(xyz_of_weyl_factored(src.objects), src.objects.riemann, n);
    const auto dt = derived_invariants(xyz_of_weyl_factored(tgt.objects), tgt.objects.riemann, n);
    add("derived-w1", "first derived operator on the factored form", ds.w1, dt.w1);
    add("derived-w2", "second derived operator on the factored form", ds.w2, dt.w2);
    add("derived-w4", "fourth derived operator on the factored form", ds.w4, dt.w4);
  }
  if (fl.s1 == 0) {
    add("theta-tilde", "trace covector without the deformation trace", theta_tilde(src.fields, fl),
        theta_tilde(tgt.fields, fl));
    add("thomas-star", "Thomas type without the trace terms", thomas_star(src.fields, fl), thomas_star(tgt.fields, fl));
  }
  if (inst.kind == MappingKind::Geodesic) {
    add("geodesic-thomas", "geodesic Thomas projective form", geodesic_thomas(ss.sym().value), geodesic_thomas(ts.sym().value));
    add("geodesic-weyl", "geodesic Weyl form with the special derivative", geodesic_weyl(ss.sym()), geodesic_weyl(ts.sym()));
    add("geodesic-weyl-covector", "geodesic Weyl form with the covector rule", detail::geodesic_weyl_covector(ss),
        detail::geodesic_weyl_covector(ts));
    add("weyl-projective", "Weyl projective tensor", weyl_projective(ss.riemann(), ss.ricci_tensor()),
        weyl_projective(ts.riemann(), ts.ricci_tensor()));
  }
  std::sort(rep.invariants.begin(), rep.invariants.end(), [](const auto& a, const auto& b) { return a.name < b.name; });

  if (inst.agm && diagnostics) {
    for (int side = 0; side < 2; ++side) {
      const auto space = side == 0 ? agm_source_space(inst) : agm_target_space(inst);
      for (const auto& d : agm_diagnose(space)) {
        for (const auto& r : d.rows) {
          rep.diagnostics.push_back({side == 0 ? "source" : "target", d.form, grade_name(r.grade), r.terms,
                                     r.differing_terms, to_double(r.printed_residual), to_double(r.derived_residual)});
        }
      }
    }
  }
  return rep;
}

/// Rows of a diagnostic table that break the agreement rule: the derived
/// closed form must match every degree class, and the printed one must match
/// every class whose terms are printed as derived.
inline std::vector<const AgmDiagnosticRow*> diagnostic_violations(const CheckReport& rep, double tol)
{
  std::vector<const AgmDiagnosticRow*> out;
  for (const auto& r : rep.diagnostics) {
    const bool derived_ok = r.derived_residual <= tol;
    const bool printed_ok = !r.differing_terms.empty() || r.printed_residual <= tol;
    if (!derived_ok || !printed_ok) out.push_back(&r);
  }
  return out;
}

struct IdentityReport {
  int dim = 0;
  int count = 0;
  std::uint64_t seed = 0;
  std::vector<ResidualRow> rows;       // worst case over all draws, blocking
  std::vector<ResidualRow> diagnostic;  // worst case, reported only

  bool pass() const
  {
    return std::all_of(rows.begin(), rows.end(), [](const ResidualRow& r) { return r.pass; });
  }
};

namespace detail {

inline void merge_worst(std::vector<ResidualRow>& acc, ResidualRow row)
{
  for (auto& r : acc)
    if (r.name == row.name) {
      r.max_abs = std::max(r.max_abs, row.max_abs);
      r.max_rel = std::max(r.max_rel, row.max_rel);
      r.pass = r.pass && row.pass;
      return;
    }
  acc.push_back(std::move(row));
}

template <typename Scalar>
bool antisymmetric_last(const Tensor<Scalar>& w)
{
  return w == -swap_slots(w, 2, 3);
}

}  // namespace detail

/// Single-space identities on `count` random field bundles and almost
/// geodesic spaces, seeds seed, seed+1, ...
template <typename Scalar>
IdentityReport run_identities(int n, std::uint64_t seed, int count, const Tolerance& tol = {})
{
  IdentityReport rep;
  rep.dim = n;
  rep.count = count;
  rep.seed = seed;
  for (int k = 0; k < count; ++k) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
    const auto inst = generate<Scalar>(n, s, Flags{1, 1, 1});
    for (const auto& sf : {source_fields(inst), target_fields(inst)}) {
      const auto o = factored_objects(sf, inst.flags);
      const auto& R = o.riemann;
      detail::merge_worst(rep.rows, zero_check("trace-identity", "R^a_{aij} + R_[ij]",
                                               contract(R, 0, 0) + alternate(o.ricci, 0, 1), R, tol));
      detail::merge_worst(rep.rows, zero_check("curvature-antisymmetry", "R^i_{jmn} + R^i_{jnm}", R + swap_slots(R, 2, 3), R, tol));
      detail::merge_worst(rep.rows, zero_check("s-tilde-symmetry", "S~_[ij]", alternate(o.s_tilde, 0, 1), o.s_tilde, tol));
      detail::merge_worst(rep.rows, zero_check("a-first-trace", "A^a_{aij} + rho_[ij]",
                                               contract(o.a_tensor, 0, 0) + alternate(o.rho, 0, 1), o.a_tensor, tol));
      detail::merge_worst(rep.rows, zero_check("a-last-trace", "A^a_[ij]a - rho_[ij]",
                                               alternate(o.a_trace, 0, 1) - alternate(o.rho, 0, 1), o.a_tensor, tol));
      const std::vector<std::pair<std::string, Tensor<Scalar>>> weyls{
          {"weyl-basic", weyl_basic(sf.space, omega(sf, inst.flags))},
          {"weyl-factored", weyl_factored(o)},
          {"weyl-fourth", weyl_fourth(o)},
          {"weyl-first-over", weyl_first_over(o)}};
      for (const auto& [name, w] : weyls)
        detail::merge_worst(rep.rows, zero_check("antisymmetry-" + name, "W^i_{jmn} + W^i_{jnm}", w + swap_slots(w, 2, 3), w, tol));
      // Weyl object in closed form against the curvature of omega
      detail::merge_worst(rep.diagnostic,
                          zero_check("factored-vs-basic", "factored Weyl form minus the curvature of omega",
                                     weyl_factored(o) - weyl_basic(sf.space, omega(sf, inst.flags)), R, tol));
      if (n >= 3) {
        const auto d = derived_invariants(xyz_of_weyl_factored(o), R, n);
        detail::merge_worst(rep.diagnostic, zero_check("w1-vs-factored", "W1 of the factored decomposition minus the factored form",
                                                       d.w1 - weyl_factored(o), R, tol));
        detail::merge_worst(rep.diagnostic, zero_check("w2-vs-w1", "W2 minus W1", d.w2 - d.w1, R, tol));
        detail::merge_worst(rep.diagnostic,
                            zero_check("w4-vs-fourth", "W4 minus the fourth form", d.w4 - weyl_fourth(o), R, tol));
      }
    }
    for (int p : {1, 2}) {
      const auto agm = generate_agm3<Scalar>(n, s, p);
      for (int side = 0; side < 2; ++side) {
        const auto space = side == 0 ? agm_source_space(agm) : agm_target_space(agm);
        const auto o = factored_objects(realize(space), agm_flags);
        const auto dec = agm_decompose(space);
        detail::merge_worst(rep.rows, zero_check("agm-reconstruction", "A - (delta P + delta Q + N)",
                                                 o.a_tensor - reconstruct(dec), o.a_tensor, tol));
        detail::merge_worst(rep.rows, zero_check("agm-trace", "A^a_(ij)a + (N-1) Q_(ij) - N^a_(ij)a",
                                                 agm_trace_identity_residual(o.a_tensor, dec), o.a_tensor, tol));
        const auto printed = agm_decompose(space, true);
        detail::merge_worst(rep.diagnostic, zero_check("agm-reconstruction-printed", "reconstruction with the typeset quarter coefficients",
                                                       o.a_tensor - reconstruct(printed), o.a_tensor, tol));
        const auto c4 = corollary4_forms(dec, o);
        detail::merge_worst(rep.diagnostic, zero_check("pq-basic", "basic form through P, Q, N minus the factored form",
                                                       c4.basic - weyl_factored(o), o.riemann, tol));
        detail::merge_worst(rep.diagnostic, zero_check("pq-fourth", "fourth form through P, Q, N minus the fourth form",
                                                       c4.fourth - weyl_fourth(o), o.riemann, tol));
        detail::merge_worst(rep.diagnostic, zero_check("pq-first-over", "first-over form through P, Q, N minus the first-over form",
                                                       c4.first_over - weyl_first_over(o), o.riemann, tol));
      }
    }
  }
  return rep;
}

}  // namespace geoinv

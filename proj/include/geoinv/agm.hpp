#pragma once

#include <array>
#include <compare>
#include <map>
#include <string>
#include <vector>

#include "geoinv/invariants.hpp"

namespace geoinv {

/// Single-space data of an almost geodesic mapping of the third type. The
/// deformation object of the space is -1/2 sigma_{jk} phi^i.
template <typename Scalar>
struct AgmSpace {
  JetTensor<Scalar> lfull;
  JetTensor<Scalar> sigma;  // (0,2)
  Tensor<Scalar> vec;       // phi^i; its gradient follows from the constraint
  Tensor<Scalar> nu;
  Scalar mu{0};
  int p = 1;
};

template <typename Scalar>
AgmSpace<Scalar> agm_source_space(const MappingInstance<Scalar>& inst)
{
  if (!inst.agm) throw NotApplicableError("instance has no almost geodesic block");
  const auto& a = *inst.agm;
  return {inst.L, a.sigma, a.vec.value, a.nu, a.mu, a.p};
}

/// Target side: the deformation object is +1/2 sigma phi, i.e. sigma enters
/// with the opposite sign, and nu, mu are fitted in the image space.
template <typename Scalar>
AgmSpace<Scalar> agm_target_space(const MappingInstance<Scalar>& inst)
{
  if (!inst.agm) throw NotApplicableError("instance has no almost geodesic block");
  const auto& a = *inst.agm;
  const auto target = build_target_connection(inst);
  const auto fit = fit_agm_parameters(a.vec, target, a.p);
  if (!is_zero(fit.residual)) {
    if constexpr (is_exact_v<Scalar>)
      throw DegenerateError("target space does not satisfy the almost geodesic constraint");
  }
  return {target.full(), -a.sigma, a.vec.value, fit.nu, fit.mu, a.p};
}

/// Jet of phi with its gradient taken from the constraint of kind p.
template <typename Scalar>
JetTensor<Scalar> constrained_vector(const AgmSpace<Scalar>& s)
{
  const int n = s.vec.dim();
  const auto& L = s.lfull.value;
  Tensor<Scalar> g = tabulate<Scalar, 2>(n, 1, 1, [&](int i, int j) {
    Scalar v = s.nu(j) * s.vec(i) + (i == j ? s.mu : Scalar(0));
    for (int a = 0; a < n; ++a) v -= (s.p == 1 ? L(i, a, j) : L(i, j, a)) * s.vec(a);
    return v;
  });
  return {s.vec, std::move(g)};
}

/// Field bundle of the general transformation rule for this space.
template <typename Scalar>
SpaceFields<Scalar> realize(const AgmSpace<Scalar>& s)
{
  const int n = s.vec.dim();
  const auto phi = fraction<Scalar>(-1, 2) * jet_mul(constrained_vector(s), s.sigma);
  return {ConnectionSpace<Scalar>(s.lfull), zero_jet<Scalar>(n, 0, 1), zero_jet<Scalar>(n, 0, 1),
          zero_jet<Scalar>(n, 1, 1), phi};
}

inline constexpr Flags agm_flags{1, 0, 1};

/// Degree of a term in mu, nu, sigma and the torsion part of the connection.
struct Grade {
  int mu = 0;
  int nu = 0;
  int sigma = 0;
  int tor = 0;

  auto operator<=>(const Grade&) const = default;
};

std::string grade_name(const Grade& g);

template <typename Scalar>
struct AgmTerm {
  std::string label;
  Grade grade;
  Tensor<Scalar> printed;  // as typeset
  Tensor<Scalar> derived;  // coefficients re-derived from the general pipeline
};

template <typename Scalar>
struct AgmClosedForm {
  std::string name;
  std::vector<AgmTerm<Scalar>> terms;

  Tensor<Scalar> printed_sum() const { return sum(&AgmTerm<Scalar>::printed); }
  Tensor<Scalar> derived_sum() const { return sum(&AgmTerm<Scalar>::derived); }

 private:
  Tensor<Scalar> sum(Tensor<Scalar> AgmTerm<Scalar>::*which) const
  {
    Tensor<Scalar> out = terms.front().*which;
    for (std::size_t k = 1; k < terms.size(); ++k) out += terms[k].*which;
    return out;
  }
};

namespace detail {

/// The four pieces of the N tensor, without their coefficients: sigma
/// derivative, sigma sigma phi phi, nu and torsion.
template <typename Scalar>
std::array<Tensor<Scalar>, 4> n_parts(const AgmSpace<Scalar>& s, const ConnectionSpace<Scalar>& space,
                                      const Tensor<Scalar>& sd)
{
  using T = Tensor<Scalar>;
  const int n = s.vec.dim();
  const auto& sg = s.sigma.value;
  const auto& ph = s.vec;
  const auto& nu = s.nu;
  const auto& lt = space.tor().value;
  const Scalar sgn = s.p == 1 ? Scalar(-1) : Scalar(1);
  const T sphi = contract(outer(ph, sg), 0, 0);
  const T ltphi = contract(outer(lt, ph), 1, 0);
  const T n_sd = tabulate<Scalar, 4>(n, 1, 3, [&](int i, int j, int m, int l) { return (sd(j, m, l) - sd(j, l, m)) * ph(i); });
  const T n_ss = tabulate<Scalar, 4>(n, 1, 3, [&](int i, int j, int m, int l) {
    return (sg(j, m) * sphi(l) - sg(j, l) * sphi(m)) * ph(i);
  });
  const T n_nu = tabulate<Scalar, 4>(n, 1, 3, [&](int i, int j, int m, int l) { return (sg(j, m) * nu(l) - sg(j, l) * nu(m)) * ph(i); });
  const T n_tor = sgn * tabulate<Scalar, 4>(n, 1, 3, [&](int i, int j, int m, int l) {
    return sg(j, m) * ltphi(i, l) - sg(j, l) * ltphi(i, m);
  });
  return {n_sd, n_ss, n_nu, n_tor};
}

}  // namespace detail

/// The three closed-form invariants of the almost geodesic mapping, term by
/// term. Order: basic, fourth, first-over.
template <typename Scalar>
std::array<AgmClosedForm<Scalar>, 3> agm_closed_forms(const AgmSpace<Scalar>& s)
{
  using T = Tensor<Scalar>;
  const int n = s.vec.dim();
  const ConnectionSpace<Scalar> space(s.lfull);
  const auto& sg = s.sigma.value;
  const auto& ph = s.vec;
  const auto& nu = s.nu;
  const auto& lt = space.tor().value;
  const auto& th = space.theta().value;
  const T thd = space.derivative(space.theta());
  const T sd = covariant_derivative(s.sigma, space.sym().value);  // sigma_{jm|n}
  const T& R = space.riemann();
  const T& ric = space.ricci_tensor();
  const Scalar sgn = s.p == 1 ? Scalar(-1) : Scalar(1);
  const Scalar mu = s.mu;
  const Scalar c = fraction<Scalar>(1, n + 1);
  const Scalar k = fraction<Scalar>(1, n - 1);
  const Scalar q = fraction<Scalar>(1, 4);
  const Scalar h = fraction<Scalar>(1, 2);

  auto dot = [&](const T& a, const T& b) {
    Scalar acc(0);
    for (int i = 0; i < n; ++i) acc += a(i) * b(i);
    return acc;
  };
  const T sphi = contract(outer(ph, sg), 0, 0);  // sigma_{ja} phi^a
  const Scalar sphiphi = dot(sphi, ph);
  const T ltphi = contract(outer(lt, ph), 1, 0);  // Ltor^i_{an} phi^a, (1,1) in (i, n)
  const T sdphi = contract(outer(ph, sd), 0, 1);  // sigma_{ja|n} phi^a
  const T snu = outer(sphi, nu);
  const T sLt = tabulate<Scalar, 2>(n, 0, 2, [&](int j, int m) {
    Scalar acc(0);
    for (int a = 0; a < n; ++a) acc += sg(j, a) * ltphi(a, m);
    return acc;
  });
  Scalar ltr(0);  // Ltor^a_{ba} phi^b
  for (int a = 0; a < n; ++a) ltr += ltphi(a, a);

  const auto [n_sd, n_ss, n_nu, n_tor] = detail::n_parts(s, space, sd);
  const T tr_sd = tabulate<Scalar, 2>(n, 0, 2, [&](int j, int m) {
    Scalar acc(0);
    for (int a = 0; a < n; ++a) acc += (sd(j, m, a) - sd(j, a, m)) * ph(a);
    return acc;
  });
  const T tr_ss = sphiphi * sg - outer(sphi, sphi);
  const T tr_nu = dot(nu, ph) * sg - outer(sphi, nu);
  const T tr_tor = sgn * (ltr * sg - sLt);

  const Grade g0{}, gs{0, 0, 1, 0}, gss{0, 0, 2, 0}, gmu{1, 0, 1, 0}, gnu{0, 1, 1, 0}, gtor{0, 0, 1, 1};
  auto same = [](std::string label, Grade g, T t) { return AgmTerm<Scalar>{std::move(label), g, t, t}; };
  auto both = [](std::string label, Grade g, T printed, T derived) {
    return AgmTerm<Scalar>{std::move(label), g, std::move(printed), std::move(derived)};
  };
  auto n_terms = [&](std::vector<AgmTerm<Scalar>>& v) {
    v.push_back(both("N: sigma derivative", gs, q * n_sd, h * n_sd));
    v.push_back(same("N: sigma sigma phi phi", gss, q * n_ss));
    v.push_back(both("N: nu", gnu, q * n_nu, h * n_nu));
    v.push_back(both("N: torsion", gtor, q * n_tor, h * n_tor));
  };
  // printed: coefficient * delta_alt(unsymmetrized trace); derived: delta_alt of the half-sum
  auto trace_terms = [&](std::vector<AgmTerm<Scalar>>& v, Scalar printed_c, Scalar derived_c) {
    v.push_back(both("N trace: sigma derivative", gs, (printed_c * q) * delta_alt(tr_sd),
                     (derived_c * h) * delta_alt(sym_pair(tr_sd, 0, 1))));
    v.push_back(both("N trace: sigma sigma phi phi", gss, (printed_c * q) * delta_alt(tr_ss),
                     (derived_c * q) * delta_alt(sym_pair(tr_ss, 0, 1))));
    v.push_back(both("N trace: nu", gnu, (printed_c * q) * delta_alt(tr_nu), (derived_c * h) * delta_alt(sym_pair(tr_nu, 0, 1))));
    v.push_back(both("N trace: torsion", gtor, (printed_c * q) * delta_alt(tr_tor),
                     (derived_c * h) * delta_alt(sym_pair(tr_tor, 0, 1))));
  };
  auto rho_terms = [&](std::vector<AgmTerm<Scalar>>& v) {
    v.push_back(same("theta derivative", g0, -c * delta_alt(thd)));
    v.push_back(same("rho: sigma derivative", gs, (-c * h) * delta_alt(sdphi)));
    v.push_back(same("rho: nu", gnu, (-c * h) * delta_alt(snu)));
    v.push_back(same("rho: torsion", gtor, (-c * h * sgn) * delta_alt(sLt)));
  };
  const T dsig = delta_alt(sg);

  std::array<AgmClosedForm<Scalar>, 3> out;
  auto& basic = out[0];
  basic.name = "agm-basic";
  basic.terms.push_back(same("R", g0, R));
  basic.terms.push_back(both("mu sigma", gmu, (-fraction<Scalar>(n + 3, 4 * (n + 1)) * mu) * dsig,
                             (-fraction<Scalar>(n + 2, 2 * (n + 1)) * mu) * dsig));
  n_terms(basic.terms);
  rho_terms(basic.terms);
  basic.terms.push_back(same("S: theta phi sigma", gs, (c * h * dot(th, ph)) * dsig));
  basic.terms.push_back(same("S: sigma phi phi sigma", gss, (c * q * sphiphi) * dsig));
  basic.terms.push_back(same("S: theta theta", g0, -(c * c) * delta_alt(outer(th, th))));
  basic.terms.push_back(same("S: theta sigma phi", gs, -(c * c * h) * delta_alt(outer(th, sphi) + outer(sphi, th))));
  basic.terms.push_back(same("S: sigma phi sigma phi", gss, -(c * c * q) * delta_alt(outer(sphi, sphi))));

  auto& fourth = out[1];
  fourth.name = "agm-fourth";
  fourth.terms.push_back(same("R", g0, R));
  fourth.terms.push_back(both("Ricci", g0, k * delta_alt(ric), k * delta_alt(sym_pair(ric, 0, 1))));
  n_terms(fourth.terms);
  trace_terms(fourth.terms, k, k);

  auto& over = out[2];
  over.name = "agm-first-over";
  over.terms.push_back(same("R", g0, R));
  rho_terms(over.terms);
  const Scalar np1sq = fraction<Scalar>((n + 1) * (n + 1));
  over.terms.push_back(both("mu sigma", gmu, (-fraction<Scalar>((n + 2) * (n + 2), 4) / np1sq * mu) * dsig,
                            (-fraction<Scalar>(n * n + 4 * n + 1, 2) / np1sq * mu) * dsig));
  n_terms(over.terms);
  trace_terms(over.terms, -(c * c) * k, -(c * c));
  return out;
}

/// Generic-pipeline invariant matching each closed form.
template <typename Scalar>
std::array<Tensor<Scalar>, 3> agm_generic_invariants(const AgmSpace<Scalar>& s)
{
  const auto o = factored_objects(realize(s), agm_flags);
  return {weyl_factored(o), weyl_fourth(o), weyl_first_over(o)};
}

template <typename Scalar>
struct AgmClassRow {
  Grade grade;
  std::vector<std::string> terms;
  std::vector<std::string> differing_terms;  // printed coefficient differs from the derived one
  Scalar printed_residual{0};
  Scalar derived_residual{0};
};

template <typename Scalar>
struct AgmDiagnostic {
  std::string form;
  std::vector<AgmClassRow<Scalar>> rows;
  Scalar printed_total{0};  // max |printed closed form - generic|
  Scalar derived_total{0};
};

namespace detail {

template <typename Scalar>
AgmSpace<Scalar> scaled(const AgmSpace<Scalar>& s, const Grade& t)
{
  AgmSpace<Scalar> r = s;
  const auto parts = split(s.lfull);
  r.lfull = parts.sym + Scalar(t.tor) * parts.tor;
  r.sigma = Scalar(t.sigma) * s.sigma;
  r.nu = Scalar(t.nu) * s.nu;
  r.mu = Scalar(t.mu) * s.mu;
  return r;
}

}  // namespace detail

/// Splits each generic invariant into its homogeneous parts in (mu, nu,
/// sigma, torsion) and compares every part with the closed-form terms of
/// the same degree.
template <typename Scalar>
std::array<AgmDiagnostic<Scalar>, 3> agm_diagnose(const AgmSpace<Scalar>& s)
{
  using T = Tensor<Scalar>;
  // values on the grid mu, nu, tor in {0,1}, sigma in {0,1,2}
  std::map<Grade, std::array<T, 3>> grid;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int d = 0; d < 2; ++d)
        for (int sg = 0; sg < 3; ++sg) {
          const Grade g{a, b, sg, d};
          grid.emplace(g, agm_generic_invariants(detail::scaled(s, g)));
        }
  // coefficient extraction, one axis at a time
  auto binary = [](std::map<Grade, std::array<T, 3>>& m, int Grade::*axis) {
    for (auto& [g, v] : m) {
      if (g.*axis != 1) continue;
      Grade lo = g;
      lo.*axis = 0;
      for (int f = 0; f < 3; ++f) v[static_cast<std::size_t>(f)] -= m.at(lo)[static_cast<std::size_t>(f)];
    }
  };
  binary(grid, &Grade::mu);
  binary(grid, &Grade::nu);
  binary(grid, &Grade::tor);
  for (auto& [g, v] : grid) {
    if (g.sigma != 0) continue;
    Grade g1 = g, g2 = g;
    g1.sigma = 1;
    g2.sigma = 2;
    auto& v1 = grid.at(g1);
    auto& v2 = grid.at(g2);
    for (std::size_t f = 0; f < 3; ++f) {
      const T c2 = fraction<Scalar>(1, 2) * (v[f] - Scalar(2) * v1[f] + v2[f]);
      const T c1 = v1[f] - v[f] - c2;
      v1[f] = c1;
      v2[f] = c2;
    }
  }

  const auto forms = agm_closed_forms(s);
  const auto generic_full = agm_generic_invariants(s);
  std::array<AgmDiagnostic<Scalar>, 3> out;
  for (std::size_t f = 0; f < 3; ++f) {
    const auto& form = forms[f];
    auto& diag = out[f];
    diag.form = form.name;
    diag.printed_total = max_abs(form.printed_sum() - generic_full[f]);
    diag.derived_total = max_abs(form.derived_sum() - generic_full[f]);
    for (const auto& [g, v] : grid) {
      AgmClassRow<Scalar> row;
      row.grade = g;
      T printed = Scalar(0) * v[f];
      T derived = printed;
      for (const auto& term : form.terms) {
        if (term.grade != g) continue;
        row.terms.push_back(term.label);
        if (!(term.printed == term.derived)) row.differing_terms.push_back(term.label);
        printed += term.printed;
        derived += term.derived;
      }
      row.printed_residual = max_abs(printed - v[f]);
      row.derived_residual = max_abs(derived - v[f]);
      if (row.terms.empty() && is_zero(row.printed_residual)) continue;
      diag.rows.push_back(std::move(row));
    }
  }
  return out;
}

/// A^i_{jmn} = delta^i_j P_{[mn]} + delta^i_{[m} Q_{jn]} + N^i_{jmn}
template <typename Scalar>
struct AgmDecomposition {
  Tensor<Scalar> p;
  Tensor<Scalar> q;
  Tensor<Scalar> nten;
};

/// P = 0, Q = -1/2 mu sigma and N from the constrained derivative of phi.
/// `printed` selects the typeset quarter coefficients instead.
template <typename Scalar>
AgmDecomposition<Scalar> agm_decompose(const AgmSpace<Scalar>& s, bool printed = false)
{
  const int n = s.vec.dim();
  const ConnectionSpace<Scalar> space(s.lfull);
  const auto [n_sd, n_ss, n_nu, n_tor] = detail::n_parts(s, space, covariant_derivative(s.sigma, space.sym().value));
  const Scalar q = fraction<Scalar>(1, 4);
  const Scalar lin = printed ? q : fraction<Scalar>(1, 2);
  Tensor<Scalar> nten = lin * (n_sd + n_nu + n_tor) + q * n_ss;
  const Scalar qc = printed ? fraction<Scalar>(-1, 4) : fraction<Scalar>(-1, 2);
  return {Tensor<Scalar>(n, 0, 2), (qc * s.mu) * s.sigma.value, std::move(nten)};
}

template <typename Scalar>
Tensor<Scalar> reconstruct(const AgmDecomposition<Scalar>& d)
{
  return delta_first(alternate(d.p, 0, 1)) + delta_alt(d.q) + d.nten;
}

/// A^a_{(ij)a} + (N-1) Q_(ij) - N^a_{(ij)a}
template <typename Scalar>
Tensor<Scalar> agm_trace_identity_residual(const Tensor<Scalar>& a_tensor, const AgmDecomposition<Scalar>& d)
{
  const int n = a_tensor.dim();
  return sym_pair(contract(a_tensor, 0, 2), 0, 1) + fraction<Scalar>(n - 1) * sym_pair(d.q, 0, 1) -
         sym_pair(contract(d.nten, 0, 2), 0, 1);
}

template <typename Scalar>
struct Corollary4Forms {
  Tensor<Scalar> basic;
  Tensor<Scalar> fourth;
  Tensor<Scalar> first_over;
};

/// The three Weyl-type invariants rewritten through P, Q, N, as typeset.
template <typename Scalar>
Corollary4Forms<Scalar> corollary4_forms(const AgmDecomposition<Scalar>& d, const FactoredObjects<Scalar>& o)
{
  const int n = o.dim;
  const Scalar c = fraction<Scalar>(1, n + 1);
  const Scalar k = fraction<Scalar>(1, n - 1);
  const Tensor<Scalar> dp = delta_first(alternate(d.p, 0, 1));
  const Tensor<Scalar> ntr = sym_pair(contract(d.nten, 0, 2), 0, 1);
  const Tensor<Scalar> head = o.riemann - c * delta_alt(o.theta_cd - o.rho);
  Corollary4Forms<Scalar> f;
  f.basic = head - (c * c) * delta_alt(o.s_tilde) + dp + delta_alt(d.q) + d.nten;
  f.fourth = o.riemann + k * delta_alt(sym_pair(o.ricci, 0, 1)) + dp + d.nten + k * delta_alt(ntr);
  f.first_over = head + dp + delta_alt(d.q) + d.nten + (c * c) * delta_alt(sym_pair(d.q, 0, 1)) -
                 (c * c * k) * delta_alt(ntr);
  return f;
}

}  // namespace geoinv

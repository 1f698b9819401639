#pragma once

#include "geoinv/mapping.hpp"

namespace geoinv {

/// delta^i_{[m} Y_{jn]} = delta^i_m Y_{jn} - delta^i_n Y_{jm}; j stays inert.
template <typename Scalar>
Tensor<Scalar> delta_alt(const Tensor<Scalar>& y)
{
  if (y.upper() != 0 || y.lower() != 2) throw ShapeError("delta_alt: expected a (0,2) tensor");
  const int n = y.dim();
  return tabulate<Scalar, 4>(n, 1, 3, [&](int i, int j, int m, int k) {
    Scalar s(0);
    if (i == m) s += y(j, k);
    if (i == k) s -= y(j, m);
    return s;
  });
}

/// delta^i_j X_{mn}
template <typename Scalar>
Tensor<Scalar> delta_first(const Tensor<Scalar>& x)
{
  if (x.upper() != 0 || x.lower() != 2) throw ShapeError("delta_first: expected a (0,2) tensor");
  const int n = x.dim();
  return tabulate<Scalar, 4>(n, 1, 3, [&](int i, int j, int m, int k) { return i == j ? x(m, k) : Scalar(0); });
}

template <typename Scalar>
Tensor<Scalar> transpose2(const Tensor<Scalar>& t)
{
  return swap_slots(t, 0, 1);
}

/// Every single-space object the factored invariants are assembled from.
template <typename Scalar>
struct FactoredObjects {
  int dim = 0;
  Flags flags;
  Tensor<Scalar> riemann;
  Tensor<Scalar> ricci;
  JetTensor<Scalar> deformation;  // D^i_{jk}
  JetTensor<Scalar> tau;          // D^a_{ja}
  JetTensor<Scalar> big_theta;    // theta - tau
  JetTensor<Scalar> omega;
  Tensor<Scalar> theta_cd;        // theta_{j|n}
  Tensor<Scalar> rho;             // rho_{ij}
  Tensor<Scalar> s_tilde;         // S~_{ij}
  Tensor<Scalar> a_tensor;        // A^i_{jmn}
  Tensor<Scalar> a_trace;         // A^a_{ija}
};

/// Covariant derivatives of the auxiliary fields that the flags switch on.
template <typename Scalar>
struct FieldDerivatives {
  Tensor<Scalar> df;    // f^i_{j|k}
  Tensor<Scalar> ds;    // sigma_{j|k}
  Tensor<Scalar> dphi;  // phi^i_{jk|l}
};

template <typename Scalar>
FieldDerivatives<Scalar> field_derivatives(const SpaceFields<Scalar>& sf, const Flags& fl)
{
  FieldDerivatives<Scalar> d;
  if (fl.s2) {
    d.df = sf.space.derivative(sf.f);
    d.ds = sf.space.derivative(sf.sigma);
  }
  if (fl.s3) d.dphi = sf.space.derivative(sf.phi);
  return d;
}

/// rho_{ij} = s2(f^a_{i|j} s_a + f_{,j} s_i + f^a_i s_{a|j} + f s_{i|j}) + s3 phi^a_{ia|j}
template <typename Scalar>
Tensor<Scalar> rho(const SpaceFields<Scalar>& sf, const Flags& fl, const FieldDerivatives<Scalar>& fd)
{
  const int n = sf.dim();
  Tensor<Scalar> out(n, 0, 2);
  if (fl.s2) {
    const auto& df = fd.df;
    const auto& ds = fd.ds;
    const auto& f = sf.f.value;
    const auto& s = sf.sigma.value;
    Scalar tr(0);
    for (int a = 0; a < n; ++a) tr += f(a, a);
    out += tabulate<Scalar, 2>(n, 0, 2, [&](int i, int j) {
      Scalar acc(0);
      Scalar dtr(0);
      for (int a = 0; a < n; ++a) {
        acc += df(a, i, j) * s(a) + f(a, i) * ds(a, j);
        dtr += sf.f.grad(a, a, j);
      }
      return acc + dtr * s(i) + tr * ds(i, j);
    });
  }
  if (fl.s3) {
    const auto& dphi = fd.dphi;
    out += tabulate<Scalar, 2>(n, 0, 2, [&](int i, int j) {
      Scalar acc(0);
      for (int a = 0; a < n; ++a) acc += dphi(a, i, a, j);
      return acc;
    });
  }
  return out;
}

template <typename Scalar>
Tensor<Scalar> rho(const SpaceFields<Scalar>& sf, const Flags& fl)
{
  return rho(sf, fl, field_derivatives(sf, fl));
}

/// S~_{ij} = (N+1) Theta_a D^a_{ij} + Theta_i Theta_j, Theta = theta - tau.
template <typename Scalar>
Tensor<Scalar> s_tilde(const Tensor<Scalar>& d, const Tensor<Scalar>& th)
{
  const int n = d.dim();
  const Scalar np1 = fraction<Scalar>(n + 1);
  return tabulate<Scalar, 2>(n, 0, 2, [&](int i, int j) {
    Scalar acc(0);
    for (int a = 0; a < n; ++a) acc += th(a) * d(a, i, j);
    return np1 * acc + th(i) * th(j);
  });
}

template <typename Scalar>
Tensor<Scalar> s_tilde(const SpaceFields<Scalar>& sf, const Flags& fl)
{
  const auto d = deformation_part(sf, fl);
  return s_tilde(d.value, (sf.space.theta() - jet_contract(d, 0, 1)).value);
}

/// A^i_{jmn}: the part of the Weyl object built from the deformation fields,
/// written out term by term from f, sigma and phi.
template <typename Scalar>
Tensor<Scalar> a_tensor(const SpaceFields<Scalar>& sf, const Flags& fl, const FieldDerivatives<Scalar>& fd,
                        const Tensor<Scalar>& d)
{
  const int n = sf.dim();
  Tensor<Scalar> out(n, 1, 3);
  if (fl.s2) {
    const auto& df = fd.df;
    const auto& ds = fd.ds;
    const auto& f = sf.f.value;
    const auto& s = sf.sigma.value;
    // -(f^i_{[m|n]} s_j - f^i_{j|[m} s_{n]} + f^i_j s_{[m|n]} + f^i_{[m} s_{j|n]})
    out -= tabulate<Scalar, 4>(n, 1, 3, [&](int i, int j, int m, int k) {
      return (df(i, m, k) - df(i, k, m)) * s(j) - (df(i, j, m) * s(k) - df(i, j, k) * s(m)) +
             f(i, j) * (ds(m, k) - ds(k, m)) + (f(i, m) * ds(j, k) - f(i, k) * ds(j, m));
    });
  }
  if (fl.s3) {
    const auto& dphi = fd.dphi;
    out -= tabulate<Scalar, 4>(n, 1, 3, [&](int i, int j, int m, int k) { return dphi(i, j, m, k) - dphi(i, j, k, m); });
  }
  out += tabulate<Scalar, 4>(n, 1, 3, [&](int i, int j, int m, int k) {
    Scalar acc(0);
    for (int a = 0; a < n; ++a) acc += d(a, j, m) * d(i, a, k) - d(a, j, k) * d(i, a, m);
    return acc;
  });
  return out;
}

template <typename Scalar>
Tensor<Scalar> a_tensor(const SpaceFields<Scalar>& sf, const Flags& fl)
{
  return a_tensor(sf, fl, field_derivatives(sf, fl), deformation_part(sf, fl).value);
}

template <typename Scalar>
FactoredObjects<Scalar> factored_objects(const SpaceFields<Scalar>& sf, const Flags& fl)
{
  FactoredObjects<Scalar> o;
  o.dim = sf.dim();
  o.flags = fl;
  o.riemann = sf.space.riemann();
  o.ricci = sf.space.ricci_tensor();
  o.deformation = deformation_part(sf, fl);
  o.tau = jet_contract(o.deformation, 0, 1);
  o.big_theta = sf.space.theta() - o.tau;
  o.omega = o.deformation + fraction<Scalar>(1, o.dim + 1) * detail::delta_pair(o.big_theta);
  o.theta_cd = sf.space.derivative(sf.space.theta());
  const auto fd = field_derivatives(sf, fl);
  o.rho = rho(sf, fl, fd);
  o.s_tilde = s_tilde(o.deformation.value, o.big_theta.value);
  o.a_tensor = a_tensor(sf, fl, fd, o.deformation.value);
  o.a_trace = contract(o.a_tensor, 0, 2);
  return o;
}

// Thomas type -----------------------------------------------------------

/// Lsym - omega
template <typename Scalar>
Tensor<Scalar> thomas_basic(const ConnectionSpace<Scalar>& space, const Tensor<Scalar>& omega_value)
{
  return space.sym().value - omega_value;
}

/// Half-sum of the two symmetric connections; a pair-level object.
template <typename Scalar>
Tensor<Scalar> thomas_third(const ConnectionSpace<Scalar>& source, const ConnectionSpace<Scalar>& target)
{
  return fraction<Scalar>(1, 2) * (target.sym().value + source.sym().value);
}

/// L^i_{jk} - D^i_{jk} - (delta^i_j Theta_k + delta^i_k Theta_j)/(N+1), with
/// the traces written out entry by entry.
template <typename Scalar>
Tensor<Scalar> thomas_factored(const SpaceFields<Scalar>& sf, const Flags& fl)
{
  const int n = sf.dim();
  const auto& L = sf.space.sym().value;
  const auto& f = sf.f.value;
  const auto& s = sf.sigma.value;
  const auto& phi = sf.phi.value;
  Scalar ftr(0);
  for (int a = 0; a < n; ++a) ftr += f(a, a);
  auto bracket = [&](int k) {
    Scalar acc(0);
    for (int a = 0; a < n; ++a) {
      acc += L(a, k, a);
      if (fl.s2) acc -= f(a, k) * s(a);
      if (fl.s3) acc -= phi(a, k, a);
    }
    if (fl.s2) acc -= ftr * s(k);
    return acc;
  };
  std::vector<Scalar> br;
  for (int k = 0; k < n; ++k) br.push_back(bracket(k));
  const Scalar c = fraction<Scalar>(1, n + 1);
  return tabulate<Scalar, 3>(n, 1, 2, [&](int i, int j, int k) {
    Scalar v = L(i, j, k);
    if (fl.s2) v -= f(i, j) * s(k) + f(i, k) * s(j);
    if (fl.s3) v -= phi(i, j, k);
    Scalar tr(0);
    if (i == j) tr += br[static_cast<std::size_t>(k)];
    if (i == k) tr += br[static_cast<std::size_t>(j)];
    return v - c * tr;
  });
}

/// theta~_i = theta_i - tau_i
template <typename Scalar>
Tensor<Scalar> theta_tilde(const SpaceFields<Scalar>& sf, const Flags& fl)
{
  return (sf.space.theta() - deformation_trace(sf, fl)).value;
}

/// Lsym - D
template <typename Scalar>
Tensor<Scalar> thomas_star(const SpaceFields<Scalar>& sf, const Flags& fl)
{
  return sf.space.sym().value - deformation_part(sf, fl).value;
}

// Weyl type -------------------------------------------------------------

/// R - omega^i_{jm|n} + omega^i_{jn|m} + omega^a_{jm} omega^i_{an} - omega^a_{jn} omega^i_{am}
template <typename Scalar>
Tensor<Scalar> weyl_basic(const ConnectionSpace<Scalar>& space, const JetTensor<Scalar>& om)
{
  const int n = space.dim();
  const auto dom = space.derivative(om);
  const auto& w = om.value;
  return space.riemann() + tabulate<Scalar, 4>(n, 1, 3, [&](int i, int j, int m, int k) {
           Scalar acc = dom(i, j, k, m) - dom(i, j, m, k);
           for (int a = 0; a < n; ++a) acc += w(a, j, m) * w(i, a, k) - w(a, j, k) * w(i, a, m);
           return acc;
         });
}

/// R + A - (delta^i_{[m} theta_{j|n]} - delta^i_{[m} rho_{jn]})/(N+1) - delta^i_{[m} S~_{jn]}/(N+1)^2
template <typename Scalar>
Tensor<Scalar> weyl_factored(const FactoredObjects<Scalar>& o)
{
  const Scalar c = fraction<Scalar>(1, o.dim + 1);
  return o.riemann + o.a_tensor - c * delta_alt(o.theta_cd - o.rho) - (c * c) * delta_alt(o.s_tilde);
}

template <typename Scalar>
Tensor<Scalar> weyl_factored(const SpaceFields<Scalar>& sf, const Flags& fl)
{
  return weyl_factored(factored_objects(sf, fl));
}

/// Inputs of the derived-invariant operator: W = R + delta^i_j X_{[mn]} +
/// delta^i_{[m} Y_{jn]} + Z.
template <typename Scalar>
struct XYZDecomposition {
  Tensor<Scalar> x;  // (0,2)
  Tensor<Scalar> y;  // (0,2)
  Tensor<Scalar> z;  // (1,3), antisymmetric in its last two slots
};

template <typename Scalar>
Tensor<Scalar> assemble(const XYZDecomposition<Scalar>& d, const Tensor<Scalar>& riemann)
{
  return riemann + delta_first(alternate(d.x, 0, 1)) + delta_alt(d.y) + d.z;
}

template <typename Scalar>
struct DerivedInvariants {
  Tensor<Scalar> w1;
  Tensor<Scalar> w2;
  Tensor<Scalar> w4;
};

template <typename Scalar>
DerivedInvariants<Scalar> derived_invariants(const XYZDecomposition<Scalar>& d, const Tensor<Scalar>& riemann, int n)
{
  if (d.z.upper() != 1 || d.z.lower() != 3) throw DecompositionError("Z must have valence (1,3)");
  if (!(d.z == -swap_slots(d.z, 2, 3))) throw DecompositionError("Z must be antisymmetric in its last two indices");
  if (n < 3) throw DecompositionError("derived invariants divide by N - 1 and by N; need N >= 3");
  const Scalar inv_n = fraction<Scalar>(1, n);
  const Scalar inv_nm1 = fraction<Scalar>(1, n - 1);
  const Scalar half = fraction<Scalar>(1, 2);
  const Tensor<Scalar> y_alt = alternate(d.y, 0, 1);
  const Tensor<Scalar> z_first = contract(d.z, 0, 0);  // Z^a_{amn}
  const Tensor<Scalar> z_last = contract(d.z, 0, 2);   // Z^a_{mna}
  const Tensor<Scalar> common = delta_alt(d.y) + d.z;

  DerivedInvariants<Scalar> out;
  out.w1 = riemann - inv_n * delta_first(y_alt + z_first) + common;
  out.w2 = riemann - half * delta_first(fraction<Scalar>(n - 1) * y_alt - alternate(z_last, 0, 1)) + common;
  const Tensor<Scalar> ric_sym = sym_pair(ricci(riemann), 0, 1);
  out.w4 = riemann + inv_nm1 * delta_alt(ric_sym) + delta_first(alternate(d.x, 0, 1)) + d.z -
           inv_nm1 * (delta_alt(d.x) - delta_alt(transpose2(d.x))) + inv_nm1 * delta_alt(z_last);
  return out;
}

/// R + delta^i_{[m} R_(jn)]/(N-1) + A + delta^i_{[m} A^a_(jn)a]/(N-1), with
/// (..) the half-sum.
template <typename Scalar>
Tensor<Scalar> weyl_fourth(const FactoredObjects<Scalar>& o)
{
  const Scalar k = fraction<Scalar>(1, o.dim - 1);
  return o.riemann + k * delta_alt(sym_pair(o.ricci, 0, 1)) + o.a_tensor + k * delta_alt(sym_pair(o.a_trace, 0, 1));
}

/// R - ((N+1)(delta^i_{[m} theta_{j|n]} - delta^i_{[m} rho_{jn]}) + delta^i_{[m} A^a_(jn)a]) / (N+1)^2 + A
template <typename Scalar>
Tensor<Scalar> weyl_first_over(const FactoredObjects<Scalar>& o)
{
  const Scalar c = fraction<Scalar>(1, o.dim + 1);
  return o.riemann - c * delta_alt(o.theta_cd - o.rho) - (c * c) * delta_alt(sym_pair(o.a_trace, 0, 1)) + o.a_tensor;
}

/// Decompositions read off the factored invariants.
template <typename Scalar>
XYZDecomposition<Scalar> xyz_of_weyl_factored(const FactoredObjects<Scalar>& o)
{
  const int n = o.dim;
  const Scalar c = fraction<Scalar>(1, n + 1);
  Tensor<Scalar> y = -(c * c) * (fraction<Scalar>(n + 1) * (o.theta_cd - o.rho) + o.s_tilde);
  return {Tensor<Scalar>(n, 0, 2), std::move(y), o.a_tensor};
}

/// Same Y as above, written with separate 1/(N+1) and 1/(N+1)^2 terms.
template <typename Scalar>
XYZDecomposition<Scalar> xyz_of_first(const FactoredObjects<Scalar>& o)
{
  const int n = o.dim;
  const Scalar c = fraction<Scalar>(1, n + 1);
  Tensor<Scalar> y = -c * o.theta_cd + c * o.rho - (c * c) * o.s_tilde;
  return {Tensor<Scalar>(n, 0, 2), std::move(y), o.a_tensor};
}

template <typename Scalar>
XYZDecomposition<Scalar> xyz_of_fourth(const FactoredObjects<Scalar>& o)
{
  const int n = o.dim;
  const Scalar k = fraction<Scalar>(1, n - 1);
  Tensor<Scalar> y = k * sym_pair(o.ricci, 0, 1) + k * sym_pair(o.a_trace, 0, 1);
  return {Tensor<Scalar>(n, 0, 2), std::move(y), o.a_tensor};
}

template <typename Scalar>
XYZDecomposition<Scalar> xyz_of_first_over(const FactoredObjects<Scalar>& o)
{
  const int n = o.dim;
  const Scalar c = fraction<Scalar>(1, n + 1);
  Tensor<Scalar> y = -c * o.theta_cd + c * o.rho - (c * c) * sym_pair(o.a_trace, 0, 1);
  return {Tensor<Scalar>(n, 0, 2), std::move(y), o.a_tensor};
}

// Geodesic case ---------------------------------------------------------

/// Lsym - (delta^i_j theta_k + delta^i_k theta_j)/(N+1)
template <typename Scalar>
Tensor<Scalar> geodesic_thomas(const Tensor<Scalar>& lsym)
{
  const int n = lsym.dim();
  const Tensor<Scalar> th = contract(lsym, 0, 1);
  const Scalar c = fraction<Scalar>(1, n + 1);
  return tabulate<Scalar, 3>(n, 1, 2, [&](int i, int j, int k) {
    Scalar tr(0);
    if (i == j) tr += th(k);
    if (i == k) tr += th(j);
    return lsym(i, j, k) - c * tr;
  });
}

/// Geodesic Weyl-type form whose trace derivatives are contractions of the
/// special connection derivative.
template <typename Scalar>
Tensor<Scalar> geodesic_weyl(const JetTensor<Scalar>& lsym)
{
  const int n = lsym.dim();
  const Tensor<Scalar> r = curvature(lsym);
  const Tensor<Scalar> th = contract(lsym.value, 0, 1);
  const Tensor<Scalar> dth = contract(special_connection_derivative(lsym), 0, 1);  // L^a_{ja|n}
  const Scalar c = fraction<Scalar>(1, n + 1);
  const Scalar np1 = fraction<Scalar>(n + 1);
  return r + tabulate<Scalar, 4>(n, 1, 3, [&](int i, int j, int m, int k) {
           Scalar acc(0);
           if (i == j) acc += c * (dth(m, k) - dth(k, m));
           if (i == m) acc -= c * c * (np1 * dth(j, k) + th(j) * th(k));
           if (i == k) acc += c * c * (np1 * dth(j, m) + th(j) * th(m));
           return acc;
         });
}

/// R + delta^i_j R_{[mn]}/(N+1) + N delta^i_{[m} R_{jn]}/(N^2-1) + delta^i_{[m} R_{n]j}/(N^2-1)
template <typename Scalar>
Tensor<Scalar> weyl_projective(const Tensor<Scalar>& riemann, const Tensor<Scalar>& ric)
{
  const int n = riemann.dim();
  const Scalar c = fraction<Scalar>(1, n + 1);
  const Scalar d = fraction<Scalar>(1, n * n - 1);
  return riemann + c * delta_first(alternate(ric, 0, 1)) + (fraction<Scalar>(n) * d) * delta_alt(ric) +
         d * delta_alt(transpose2(ric));
}

}  // namespace geoinv

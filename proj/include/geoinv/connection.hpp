#pragma once

#include <utility>

#include "geoinv/jet.hpp"

namespace geoinv {

/// Symmetric and antisymmetric (torsion) halves of a connection jet.
template <typename Scalar>
struct ConnectionSplit {
  JetTensor<Scalar> sym;
  JetTensor<Scalar> tor;
};

template <typename Scalar>
void require_connection_shape(const Tensor<Scalar>& l, const char* what)
{
  if (l.upper() != 1 || l.lower() != 2) throw ShapeError(what);
}

template <typename Scalar>
ConnectionSplit<Scalar> split(const JetTensor<Scalar>& lfull)
{
  require_connection_shape(lfull.value, "split: connection must have valence (1,2)");
  const Scalar half = fraction<Scalar>(1, 2);
  return {jet_sym_pair(lfull, 1, 2), half * jet_alternate(lfull, 1, 2)};
}

/// R^i_{jmn} = L^i_{jm,n} - L^i_{jn,m} + L^a_{jm} L^i_{an} - L^a_{jn} L^i_{am}
template <typename Scalar>
Tensor<Scalar> curvature(const JetTensor<Scalar>& lsym)
{
  require_connection_shape(lsym.value, "curvature: connection must have valence (1,2)");
  const int n = lsym.dim();
  const auto& L = lsym.value;
  const auto& dL = lsym.grad;
  return tabulate<Scalar, 4>(n, 1, 3, [&](int i, int j, int m, int k) {
    Scalar s = dL(i, j, m, k) - dL(i, j, k, m);
    for (int a = 0; a < n; ++a) s += L(a, j, m) * L(i, a, k) - L(a, j, k) * L(i, a, m);
    return s;
  });
}

/// R_{jm} = R^a_{jma}: first upper slot against the last lower slot.
template <typename Scalar>
Tensor<Scalar> ricci(const Tensor<Scalar>& riemann)
{
  if (riemann.upper() != 1 || riemann.lower() != 3) throw ShapeError("ricci: curvature must have valence (1,3)");
  return contract(riemann, 0, 2);
}

/// R_{[ij]} = R_{ij} - R_{ji}
template <typename Scalar>
Tensor<Scalar> skew_ricci(const Tensor<Scalar>& riemann)
{
  return alternate(ricci(riemann), 0, 1);
}

/// L^i_{jm,n} + L^i_{an} L^a_{jm} - L^a_{jn} L^i_{am} + L^a_{mn} L^i_{ja}
///
/// Note the plus sign on the last product. This is not the tensorial
/// covariant derivative of L; it is only used by the geodesic Weyl form.
template <typename Scalar>
Tensor<Scalar> special_connection_derivative(const JetTensor<Scalar>& lsym)
{
  require_connection_shape(lsym.value, "special_connection_derivative: connection must have valence (1,2)");
  const int n = lsym.dim();
  const auto& L = lsym.value;
  const auto& dL = lsym.grad;
  return tabulate<Scalar, 4>(n, 1, 3, [&](int i, int j, int m, int k) {
    Scalar s = dL(i, j, m, k);
    for (int a = 0; a < n; ++a)
      s += L(i, a, k) * L(a, j, m) - L(a, j, k) * L(i, a, m) + L(a, m, k) * L(i, j, a);
    return s;
  });
}

/// theta_j = L^a_{ja} as a jet.
template <typename Scalar>
JetTensor<Scalar> connection_trace(const JetTensor<Scalar>& lsym)
{
  return jet_contract(lsym, 0, 1);
}

/// theta_{j|n} = theta_{j,n} - L^a_{jn} theta_a
template <typename Scalar>
Tensor<Scalar> trace_cov_derivative(const JetTensor<Scalar>& lsym)
{
  return covariant_derivative(connection_trace(lsym), lsym.value);
}

/// A non-symmetric affine connection at a point with its derived objects.
/// Everything is computed once at construction.
template <typename Scalar>
class ConnectionSpace {
 public:
  ConnectionSpace() = default;

  explicit ConnectionSpace(JetTensor<Scalar> lfull) : lfull_(std::move(lfull))
  {
    require_connection_shape(lfull_.value, "connection must have valence (1,2)");
    auto parts = split(lfull_);
    lsym_ = std::move(parts.sym);
    ltor_ = std::move(parts.tor);
    theta_ = connection_trace(lsym_);
    riemann_ = curvature(lsym_);
    ricci_ = ricci(riemann_);
    skew_ricci_ = alternate(ricci_, 0, 1);
  }

  int dim() const { return lfull_.dim(); }
  const JetTensor<Scalar>& full() const { return lfull_; }
  const JetTensor<Scalar>& sym() const { return lsym_; }
  const JetTensor<Scalar>& tor() const { return ltor_; }
  const JetTensor<Scalar>& theta() const { return theta_; }
  const Tensor<Scalar>& riemann() const { return riemann_; }
  const Tensor<Scalar>& ricci_tensor() const { return ricci_; }
  const Tensor<Scalar>& skew_ricci_tensor() const { return skew_ricci_; }

  /// Covariant derivative of a field jet with respect to the symmetric part.
  Tensor<Scalar> derivative(const JetTensor<Scalar>& t) const { return covariant_derivative(t, lsym_.value); }

 private:
  JetTensor<Scalar> lfull_;
  JetTensor<Scalar> lsym_;
  JetTensor<Scalar> ltor_;
  JetTensor<Scalar> theta_;
  Tensor<Scalar> riemann_;
  Tensor<Scalar> ricci_;
  Tensor<Scalar> skew_ricci_;
};

}  // namespace geoinv

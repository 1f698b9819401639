#pragma once

#include <vector>

#include "geoinv/tensor.hpp"

namespace geoinv {

/// Value of a tensor field at a point together with its first partial
/// derivatives. grad carries one extra trailing lower slot k holding the
/// derivative along x^k, so grad's flat offset is value_offset * N + k.
template <typename Scalar>
struct JetTensor {
  Tensor<Scalar> value;
  Tensor<Scalar> grad;

  JetTensor() = default;
  JetTensor(Tensor<Scalar> v, Tensor<Scalar> g) : value(std::move(v)), grad(std::move(g))
  {
    if (value.dim() != grad.dim() || grad.upper() != value.upper() || grad.lower() != value.lower() + 1)
      throw ShapeError("jet: gradient valence must extend the value by one lower slot");
  }

  int dim() const { return value.dim(); }
  int upper() const { return value.upper(); }
  int lower() const { return value.lower(); }

  bool operator==(const JetTensor& other) const = default;
};

template <typename Scalar>
JetTensor<Scalar> constant_jet(Tensor<Scalar> value)
{
  Tensor<Scalar> grad(value.dim(), value.upper(), value.lower() + 1);
  return {std::move(value), std::move(grad)};
}

template <typename Scalar>
JetTensor<Scalar> zero_jet(int dim, int upper, int lower)
{
  return constant_jet(Tensor<Scalar>(dim, upper, lower));
}

template <typename Scalar>
JetTensor<Scalar> operator+(const JetTensor<Scalar>& a, const JetTensor<Scalar>& b)
{
  return {a.value + b.value, a.grad + b.grad};
}

template <typename Scalar>
JetTensor<Scalar> operator-(const JetTensor<Scalar>& a, const JetTensor<Scalar>& b)
{
  return {a.value - b.value, a.grad - b.grad};
}

template <typename Scalar>
JetTensor<Scalar> operator-(const JetTensor<Scalar>& a)
{
  return {-a.value, -a.grad};
}

template <typename Scalar>
JetTensor<Scalar> operator*(const Scalar& s, const JetTensor<Scalar>& a)
{
  return {s * a.value, s * a.grad};
}

template <typename Scalar>
JetTensor<Scalar> jet_add(const JetTensor<Scalar>& a, const JetTensor<Scalar>& b)
{
  return a + b;
}

template <typename Scalar>
JetTensor<Scalar> jet_scale(const JetTensor<Scalar>& a, const Scalar& s)
{
  return s * a;
}

/// Leibniz product: outer product of values, gradients by the product rule.
template <typename Scalar>
JetTensor<Scalar> jet_mul(const JetTensor<Scalar>& a, const JetTensor<Scalar>& b)
{
  if (a.dim() != b.dim()) throw ShapeError("jet_mul: dimension mismatch");
  const int n = a.dim();
  Tensor<Scalar> value(n, a.upper() + b.upper(), a.lower() + b.lower());
  Tensor<Scalar> grad(n, value.upper(), value.lower() + 1);
  const Eigen::Index a_up = Tensor<Scalar>::ipow(n, a.upper());
  const Eigen::Index a_lo = Tensor<Scalar>::ipow(n, a.lower());
  const Eigen::Index b_up = Tensor<Scalar>::ipow(n, b.upper());
  const Eigen::Index b_lo = Tensor<Scalar>::ipow(n, b.lower());
  for (Eigen::Index au = 0; au < a_up; ++au)
    for (Eigen::Index bu = 0; bu < b_up; ++bu)
      for (Eigen::Index al = 0; al < a_lo; ++al)
        for (Eigen::Index bl = 0; bl < b_lo; ++bl) {
          const Eigen::Index af = au * a_lo + al;
          const Eigen::Index bf = bu * b_lo + bl;
          const Eigen::Index of = ((au * b_up + bu) * a_lo + al) * b_lo + bl;
          const Scalar& av = a.value[af];
          const Scalar& bv = b.value[bf];
          value[of] = av * bv;
          for (int k = 0; k < n; ++k)
            grad[of * n + k] = a.grad[af * n + k] * bv + av * b.grad[bf * n + k];
        }
  return {std::move(value), std::move(grad)};
}

template <typename Scalar>
JetTensor<Scalar> jet_contract(const JetTensor<Scalar>& t, int upper_ord, int lower_ord)
{
  return {contract(t.value, upper_ord, lower_ord), contract(t.grad, upper_ord, lower_ord)};
}

template <typename Scalar>
JetTensor<Scalar> jet_permute(const JetTensor<Scalar>& t, std::span<const int> perm)
{
  std::vector<int> gperm(perm.begin(), perm.end());
  gperm.push_back(t.value.rank());
  return {permute(t.value, perm), permute(t.grad, std::span<const int>(gperm))};
}

template <typename Scalar>
JetTensor<Scalar> jet_swap(const JetTensor<Scalar>& t, int a, int b)
{
  return {swap_slots(t.value, a, b), swap_slots(t.grad, a, b)};
}

template <typename Scalar>
JetTensor<Scalar> jet_alternate(const JetTensor<Scalar>& t, int a, int b)
{
  return {alternate(t.value, a, b), alternate(t.grad, a, b)};
}

template <typename Scalar>
JetTensor<Scalar> jet_sym_pair(const JetTensor<Scalar>& t, int a, int b, SymFactor factor = SymFactor::Half)
{
  return {sym_pair(t.value, a, b, factor), sym_pair(t.grad, a, b, factor)};
}

/// Covariant derivative with respect to a symmetric connection: the partial
/// derivative, plus L^{i}_{a k} t^{..a..} for each upper slot, minus
/// L^{a}_{j k} t_{..a..} for each lower slot. The derivative index is the
/// new trailing lower slot.
template <typename Scalar>
Tensor<Scalar> covariant_derivative(const JetTensor<Scalar>& t, const Tensor<Scalar>& lsym)
{
  const int n = t.dim();
  if (lsym.dim() != n || lsym.upper() != 1 || lsym.lower() != 2)
    throw ShapeError("covariant_derivative: connection must be a (1,2) tensor of the same dimension");
  const int r = t.value.rank();
  const int p = t.value.upper();
  Tensor<Scalar> out = t.grad;
  std::vector<Eigen::Index> stride(static_cast<std::size_t>(r));
  for (int s = 0; s < r; ++s) stride[static_cast<std::size_t>(s)] = t.value.stride(s);
  detail::for_each_index(n, r, [&](Eigen::Index flat, std::span<const int> idx) {
    for (int k = 0; k < n; ++k) {
      Scalar acc(0);
      for (int s = 0; s < r; ++s) {
        const int is = idx[static_cast<std::size_t>(s)];
        const Eigen::Index base = flat - is * stride[static_cast<std::size_t>(s)];
        for (int a = 0; a < n; ++a) {
          const Scalar& tv = t.value[base + a * stride[static_cast<std::size_t>(s)]];
          if (is_zero(tv)) continue;
          if (s < p)
            acc += lsym(is, a, k) * tv;
          else
            acc -= lsym(a, is, k) * tv;
        }
      }
      out[flat * n + k] += acc;
    }
  });
  return out;
}

}  // namespace geoinv

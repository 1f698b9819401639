#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "geoinv/errors.hpp"
#include "geoinv/scalar.hpp"

namespace geoinv {

/// Dense tensor with `upper` contravariant and `lower` covariant slots over
/// dimension `dim`. Entries are stored row-major in written index order,
/// upper slots first, so T^{ij}_{k} lives at ((i*N)+j)*N+k.
template <typename Scalar>
class Tensor {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Tensor() = default;

  Tensor(int dim, int upper, int lower) : dim_(dim), upper_(upper), lower_(lower)
  {
    if (dim < 1) throw ShapeError("tensor dimension must be positive");
    if (upper < 0 || lower < 0) throw ShapeError("negative valence");
    data_ = Vector::Zero(static_cast<Eigen::Index>(ipow(dim, upper + lower)));
  }

  Tensor(int dim, int upper, int lower, Vector data) : Tensor(dim, upper, lower)
  {
    if (data.size() != data_.size()) throw ShapeError("data length does not match valence");
    data_ = std::move(data);
  }

  int dim() const { return dim_; }
  int upper() const { return upper_; }
  int lower() const { return lower_; }
  int rank() const { return upper_ + lower_; }
  Eigen::Index size() const { return data_.size(); }

  const Vector& data() const { return data_; }
  Vector& data() { return data_; }

  Scalar& operator[](Eigen::Index flat) { return data_[flat]; }
  const Scalar& operator[](Eigen::Index flat) const { return data_[flat]; }

  template <typename... I>
  Scalar& operator()(I... idx)
  {
    return data_[offset(idx...)];
  }
  template <typename... I>
  const Scalar& operator()(I... idx) const
  {
    return data_[offset(idx...)];
  }

  Scalar& at(std::span<const int> idx) { return data_[offset_of(idx)]; }
  const Scalar& at(std::span<const int> idx) const { return data_[offset_of(idx)]; }

  template <typename... I>
  Eigen::Index offset(I... idx) const
  {
    Eigen::Index flat = 0;
    ((flat = flat * dim_ + static_cast<Eigen::Index>(idx)), ...);
    return flat;
  }

  Eigen::Index offset_of(std::span<const int> idx) const
  {
    Eigen::Index flat = 0;
    for (int i : idx) flat = flat * dim_ + i;
    return flat;
  }

  /// Stride of slot `s` in the flat layout.
  Eigen::Index stride(int s) const { return ipow(dim_, rank() - 1 - s); }

  bool same_shape(const Tensor& other) const
  {
    return dim_ == other.dim_ && upper_ == other.upper_ && lower_ == other.lower_;
  }

  bool is_upper_slot(int s) const { return s >= 0 && s < upper_; }
  bool is_lower_slot(int s) const { return s >= upper_ && s < rank(); }

  bool operator==(const Tensor& other) const
  {
    return same_shape(other) && data_ == other.data_;
  }

  static Eigen::Index ipow(int base, int exp)
  {
    Eigen::Index r = 1;
    for (int k = 0; k < exp; ++k) r *= base;
    return r;
  }

 private:
  int dim_ = 0;
  int upper_ = 0;
  int lower_ = 0;
  Vector data_;
};

namespace detail {

/// Calls f(idx) for every multi-index of the given rank in flat order.
template <typename F>
void for_each_index(int dim, int rank, F&& f)
{
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  const Eigen::Index total = Tensor<double>::ipow(dim, rank);
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    f(flat, std::span<const int>(idx));
    for (int s = rank - 1; s >= 0; --s) {
      if (++idx[static_cast<std::size_t>(s)] < dim) break;
      idx[static_cast<std::size_t>(s)] = 0;
    }
  }
}

template <std::size_t... K, typename F>
decltype(auto) apply_span(std::index_sequence<K...>, std::span<const int> idx, F& f)
{
  return f(idx[K]...);
}

inline void require_same_shape(bool ok, const char* what)
{
  if (!ok) throw ShapeError(what);
}

}  // namespace detail

/// Builds a tensor by evaluating f(i, j, ...) at every entry; f takes
/// exactly `Rank` integer arguments.
template <typename Scalar, int Rank, typename F>
Tensor<Scalar> tabulate(int dim, int upper, int lower, F&& f)
{
  static_assert(Rank >= 0);
  if (upper + lower != Rank) throw ShapeError("tabulate rank does not match valence");
  Tensor<Scalar> out(dim, upper, lower);
  detail::for_each_index(dim, Rank, [&](Eigen::Index flat, std::span<const int> idx) {
    out[flat] = detail::apply_span(std::make_index_sequence<Rank>{}, idx, f);
  });
  return out;
}

template <typename Scalar>
Tensor<Scalar> scalar_tensor(int dim, const Scalar& value)
{
  Tensor<Scalar> t(dim, 0, 0);
  t[0] = value;
  return t;
}

/// Kronecker delta as a (1,1) tensor.
template <typename Scalar>
Tensor<Scalar> delta(int dim)
{
  Tensor<Scalar> t(dim, 1, 1);
  for (int i = 0; i < dim; ++i) t(i, i) = Scalar(1);
  return t;
}

template <typename Scalar>
Tensor<Scalar> operator+(const Tensor<Scalar>& a, const Tensor<Scalar>& b)
{
  detail::require_same_shape(a.same_shape(b), "add: shape mismatch");
  return Tensor<Scalar>(a.dim(), a.upper(), a.lower(), a.data() + b.data());
}

template <typename Scalar>
Tensor<Scalar> operator-(const Tensor<Scalar>& a, const Tensor<Scalar>& b)
{
  detail::require_same_shape(a.same_shape(b), "sub: shape mismatch");
  return Tensor<Scalar>(a.dim(), a.upper(), a.lower(), a.data() - b.data());
}

template <typename Scalar>
Tensor<Scalar> operator-(const Tensor<Scalar>& a)
{
  return Tensor<Scalar>(a.dim(), a.upper(), a.lower(), -a.data());
}

template <typename Scalar>
Tensor<Scalar> operator*(const Scalar& s, const Tensor<Scalar>& a)
{
  return Tensor<Scalar>(a.dim(), a.upper(), a.lower(), a.data() * s);
}

template <typename Scalar>
Tensor<Scalar> scale(const Tensor<Scalar>& a, const Scalar& s)
{
  return s * a;
}

template <typename Scalar>
Tensor<Scalar>& operator+=(Tensor<Scalar>& a, const Tensor<Scalar>& b)
{
  detail::require_same_shape(a.same_shape(b), "add: shape mismatch");
  a.data() += b.data();
  return a;
}

template <typename Scalar>
Tensor<Scalar>& operator-=(Tensor<Scalar>& a, const Tensor<Scalar>& b)
{
  detail::require_same_shape(a.same_shape(b), "sub: shape mismatch");
  a.data() -= b.data();
  return a;
}

/// Outer product. Result slots: uppers of a, uppers of b, lowers of a,
/// lowers of b.
template <typename Scalar>
Tensor<Scalar> outer(const Tensor<Scalar>& a, const Tensor<Scalar>& b)
{
  if (a.dim() != b.dim()) throw ShapeError("outer: dimension mismatch");
  const int n = a.dim();
  Tensor<Scalar> out(n, a.upper() + b.upper(), a.lower() + b.lower());
  const Eigen::Index a_lo = Tensor<Scalar>::ipow(n, a.lower());
  const Eigen::Index b_up = Tensor<Scalar>::ipow(n, b.upper());
  const Eigen::Index b_lo = Tensor<Scalar>::ipow(n, b.lower());
  const Eigen::Index a_up = Tensor<Scalar>::ipow(n, a.upper());
  for (Eigen::Index au = 0; au < a_up; ++au)
    for (Eigen::Index bu = 0; bu < b_up; ++bu)
      for (Eigen::Index al = 0; al < a_lo; ++al) {
        const Scalar& av = a[au * a_lo + al];
        if (is_zero(av)) continue;
        for (Eigen::Index bl = 0; bl < b_lo; ++bl) {
          const Eigen::Index flat = ((au * b_up + bu) * a_lo + al) * b_lo + bl;
          out[flat] = av * b[bu * b_lo + bl];
        }
      }
  return out;
}

/// Moves slot positions: result slot k takes input slot perm[k]. The
/// permutation must keep every upper slot among the uppers.
template <typename Scalar>
Tensor<Scalar> permute(const Tensor<Scalar>& t, std::span<const int> perm)
{
  const int r = t.rank();
  if (static_cast<int>(perm.size()) != r) throw ShapeError("permute: wrong permutation length");
  for (int k = 0; k < r; ++k) {
    if (perm[k] < 0 || perm[k] >= r) throw ShapeError("permute: slot out of range");
    if (t.is_upper_slot(k) != t.is_upper_slot(perm[k])) throw ShapeError("permute: mixes slot kinds");
  }
  Tensor<Scalar> out(t.dim(), t.upper(), t.lower());
  std::vector<Eigen::Index> src_stride(static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k) src_stride[static_cast<std::size_t>(k)] = t.stride(perm[k]);
  detail::for_each_index(t.dim(), r, [&](Eigen::Index flat, std::span<const int> idx) {
    Eigen::Index src = 0;
    for (int k = 0; k < r; ++k) src += idx[static_cast<std::size_t>(k)] * src_stride[static_cast<std::size_t>(k)];
    out[flat] = t[src];
  });
  return out;
}

/// Exchanges two slots of the same kind.
template <typename Scalar>
Tensor<Scalar> swap_slots(const Tensor<Scalar>& t, int a, int b)
{
  if (t.is_upper_slot(a) != t.is_upper_slot(b) || a < 0 || b < 0 || a >= t.rank() || b >= t.rank())
    throw AlternationError("swap_slots: slots must be of the same kind");
  std::vector<int> perm(static_cast<std::size_t>(t.rank()));
  for (int k = 0; k < t.rank(); ++k) perm[static_cast<std::size_t>(k)] = k;
  std::swap(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
  return permute(t, perm);
}

/// Alternation without the factor one half: t[..a..b..] - t[..b..a..].
template <typename Scalar>
Tensor<Scalar> alternate(const Tensor<Scalar>& t, int a, int b)
{
  if (a == b || a < 0 || b < 0 || a >= t.rank() || b >= t.rank() ||
      t.is_upper_slot(a) != t.is_upper_slot(b))
    throw AlternationError("alternate: slots must be distinct and of the same kind");
  return t - swap_slots(t, a, b);
}

enum class SymFactor { Half, None };

/// Half-sum symmetrization over two slots; SymFactor::None drops the half.
template <typename Scalar>
Tensor<Scalar> sym_pair(const Tensor<Scalar>& t, int a, int b, SymFactor factor = SymFactor::Half)
{
  if (a == b || a < 0 || b < 0 || a >= t.rank() || b >= t.rank() ||
      t.is_upper_slot(a) != t.is_upper_slot(b))
    throw AlternationError("sym_pair: slots must be distinct and of the same kind");
  Tensor<Scalar> s = t + swap_slots(t, a, b);
  if (factor == SymFactor::Half) s = fraction<Scalar>(1, 2) * s;
  return s;
}

/// Contracts the `upper_ord`-th upper slot with the `lower_ord`-th lower
/// slot (ordinals counted within each kind).
template <typename Scalar>
Tensor<Scalar> contract(const Tensor<Scalar>& t, int upper_ord, int lower_ord)
{
  if (upper_ord < 0 || upper_ord >= t.upper() || lower_ord < 0 || lower_ord >= t.lower())
    throw ContractError("contract: slot out of range or of the wrong kind");
  const int n = t.dim();
  const int r = t.rank();
  const int su = upper_ord;
  const int sl = t.upper() + lower_ord;
  Tensor<Scalar> out(n, t.upper() - 1, t.lower() - 1);
  std::vector<Eigen::Index> src_stride;
  for (int k = 0; k < r; ++k)
    if (k != su && k != sl) src_stride.push_back(t.stride(k));
  const Eigen::Index diag = t.stride(su) + t.stride(sl);
  detail::for_each_index(n, r - 2, [&](Eigen::Index flat, std::span<const int> idx) {
    Eigen::Index base = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) base += idx[k] * src_stride[k];
    Scalar sum(0);
    for (int a = 0; a < n; ++a) sum += t[base + a * diag];
    out[flat] = sum;
  });
  return out;
}

template <typename Scalar>
Scalar max_abs(const Tensor<Scalar>& t)
{
  Scalar m(0);
  for (Eigen::Index k = 0; k < t.size(); ++k) {
    Scalar a = abs_value(t[k]);
    if (a > m) m = a;
  }
  return m;
}

template <typename Scalar>
bool is_zero(const Tensor<Scalar>& t)
{
  for (Eigen::Index k = 0; k < t.size(); ++k)
    if (!is_zero(t[k])) return false;
  return true;
}

}  // namespace geoinv

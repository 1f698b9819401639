#pragma once

#include <cstdint>
#include <random>

#include "geoinv/jet.hpp"

namespace geoinv {

/// Deterministic draws that do not depend on the standard library's
/// distribution implementations, so instances are identical everywhere.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed ^ 0x9e3779b97f4a7c15ULL) {}

  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi)
  {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  /// Uniform double in [-1, 1].
  double unit()
  {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
  }

  /// Rational k/16 in [-1, 1] or a double in [-1, 1].
  template <typename Scalar>
  Scalar draw()
  {
    if constexpr (is_exact_v<Scalar>) {
      return fraction<Scalar>(integer(-16, 16), 16);
    } else {
      return static_cast<Scalar>(unit());
    }
  }

  template <typename Scalar>
  Tensor<Scalar> tensor(int dim, int upper, int lower)
  {
    Tensor<Scalar> t(dim, upper, lower);
    for (Eigen::Index k = 0; k < t.size(); ++k) t[k] = draw<Scalar>();
    return t;
  }

  template <typename Scalar>
  JetTensor<Scalar> jet(int dim, int upper, int lower)
  {
    auto value = tensor<Scalar>(dim, upper, lower);
    auto grad = tensor<Scalar>(dim, upper, lower + 1);
    return {std::move(value), std::move(grad)};
  }

  /// Jet symmetrized over two slots of the value (and of the gradient).
  template <typename Scalar>
  JetTensor<Scalar> symmetric_jet(int dim, int upper, int lower, int a, int b)
  {
    return jet_sym_pair(jet<Scalar>(dim, upper, lower), a, b);
  }

  template <typename Scalar>
  JetTensor<Scalar> antisymmetric_jet(int dim, int upper, int lower, int a, int b)
  {
    return fraction<Scalar>(1, 2) * jet_alternate(jet<Scalar>(dim, upper, lower), a, b);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace geoinv

#include <catch_amalgamated.hpp>

#include "geoinv/connection.hpp"
#include "geoinv/random.hpp"
#include "support/poly.hpp"

using namespace geoinv;
using R = Rational;

namespace {

std::vector<int> unflatten(Eigen::Index flat, int n, int rank)
{
  std::vector<int> idx(static_cast<std::size_t>(rank));
  for (int k = rank - 1; k >= 0; --k) {
    idx[static_cast<std::size_t>(k)] = static_cast<int>(flat % n);
    flat /= n;
  }
  return idx;
}

}  // namespace

TEST_CASE("layout is row-major with uppers first")
{
  Tensor<R> t(3, 1, 2);
  t(2, 0, 1) = R(5);
  CHECK(t[2 * 9 + 0 * 3 + 1] == R(5));
  CHECK(t.size() == 27);
  CHECK(t.is_upper_slot(0));
  CHECK(t.is_lower_slot(2));
}

TEST_CASE("outer product against loops")
{
  Sampler rng(3);
  const int n = 3;
  auto a = rng.tensor<R>(n, 1, 1);
  auto b = rng.tensor<R>(n, 1, 2);
  auto o = outer(a, b);
  REQUIRE(o.upper() == 2);
  REQUIRE(o.lower() == 3);
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < n; ++p)
      for (int j = 0; j < n; ++j)
        for (int q = 0; q < n; ++q)
          for (int r = 0; r < n; ++r) CHECK(o(i, p, j, q, r) == a(i, j) * b(p, q, r));
}

TEST_CASE("permute moves slots and keeps kinds apart")
{
  Sampler rng(4);
  auto t = rng.tensor<R>(3, 1, 3);
  const std::vector<int> perm{0, 3, 1, 2};
  auto p = permute(t, std::span<const int>(perm));
  for (Eigen::Index f = 0; f < p.size(); ++f) {
    auto idx = unflatten(f, 3, 4);
    std::vector<int> src(4);
    for (int k = 0; k < 4; ++k) src[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = idx[static_cast<std::size_t>(k)];
    CHECK(p[f] == t.at(std::span<const int>(src)));
  }
  const std::vector<int> bad{1, 0, 2, 3};
  CHECK_THROWS_AS(permute(t, std::span<const int>(bad)), ShapeError);
}

TEST_CASE("contraction, alternation and symmetrization against loops")
{
  Sampler rng(5);
  const int n = 4;
  auto t = rng.tensor<R>(n, 1, 3);
  auto c = contract(t, 0, 2);
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m) {
      R s(0);
      for (int a = 0; a < n; ++a) s += t(a, j, m, a);
      CHECK(c(j, m) == s);
    }
  auto alt = alternate(t, 2, 3);
  auto sym = sym_pair(t, 2, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) {
          CHECK(alt(i, j, m, k) == t(i, j, m, k) - t(i, j, k, m));
          CHECK(sym(i, j, m, k) == (t(i, j, m, k) + t(i, j, k, m)) / 2);
        }
  CHECK_THROWS_AS(alternate(t, 0, 1), AlternationError);
  CHECK_THROWS_AS(contract(t, 1, 0), ContractError);
  CHECK_THROWS_AS(contract(t, 0, 3), ContractError);
}

TEST_CASE("shape mismatches throw")
{
  Tensor<R> a(3, 1, 1), b(3, 0, 2), c(4, 1, 1);
  CHECK_THROWS_AS(a + b, ShapeError);
  CHECK_THROWS_AS(a + c, ShapeError);
  CHECK_THROWS_AS(outer(a, c), ShapeError);
}

TEST_CASE("delta and scalar tensors")
{
  auto d = delta<R>(5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(d(i, j) == R(i == j ? 1 : 0));
  CHECK(contract(d, 0, 0)[0] == R(5));
  CHECK(scalar_tensor<R>(3, R(2)).rank() == 0);
}

TEST_CASE("jet Leibniz rule matches symbolic differentiation of polynomial fields")
{
  const int n = 3;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Sampler rng(seed);
    const auto x = oracle::random_point(n, rng);
    const auto pa = oracle::random_field(n, 1, 1, rng);
    const auto pb = oracle::random_field(n, 0, 2, rng);
    const auto prod = oracle::outer(pa, pb);
    const auto ja = pa.jet(x);
    const auto jb = pb.jet(x);
    CHECK(jet_mul(ja, jb) == prod.jet(x));
    // contraction commutes with differentiation
    CHECK(jet_contract(jet_mul(ja, jb), 0, 0) == jet_contract(prod.jet(x), 0, 0));
    const std::vector<int> perm{0, 1, 3, 2};
    CHECK(jet_permute(prod.jet(x), std::span<const int>(perm)).value == permute(prod.jet(x).value, std::span<const int>(perm)));
  }
}

TEST_CASE("covariant derivative matches the polynomial oracle")
{
  const int n = 3;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    Sampler rng(seed);
    const auto x = oracle::random_point(n, rng);
    const auto l = oracle::random_connection(n, rng);
    const auto t = oracle::random_field(n, 1, 2, rng);
    const auto want = oracle::covariant(t, l).jet(x).value;
    CHECK(covariant_derivative(t.jet(x), l.jet(x).value) == want);
  }
}

TEST_CASE("curvature satisfies the Ricci identity of the polynomial oracle")
{
  // v^i_{|m|n} - v^i_{|n|m} = R^i_{amn} v^a
  const int n = 3;
  for (std::uint64_t seed = 200; seed < 220; ++seed) {
    Sampler rng(seed);
    const auto x = oracle::random_point(n, rng);
    const auto l = oracle::random_connection(n, rng);
    const auto v = oracle::random_field(n, 1, 0, rng);
    const auto second = oracle::covariant(oracle::covariant(v, l), l).jet(x).value;
    const auto riemann = curvature(l.jet(x));
    const auto vx = v.jet(x).value;
    for (int i = 0; i < n; ++i)
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) {
          R rhs(0);
          for (int a = 0; a < n; ++a) rhs += riemann(i, a, m, k) * vx(a);
          CHECK(second(i, m, k) - second(i, k, m) == rhs);
        }
  }
}

TEST_CASE("float jets agree with rational jets to rounding")
{
  Sampler rng(9);
  auto a = rng.jet<R>(3, 1, 1);
  auto to_f = [](const Tensor<R>& t) {
    Tensor<double> out(t.dim(), t.upper(), t.lower());
    for (Eigen::Index k = 0; k < t.size(); ++k) out[k] = to_double(t[k]);
    return out;
  };
  JetTensor<double> b{to_f(a.value), to_f(a.grad)};
  auto pa = jet_mul(a, a);
  auto pb = jet_mul(b, b);
  for (Eigen::Index k = 0; k < pa.grad.size(); ++k) CHECK(std::abs(to_double(pa.grad[k]) - pb.grad[k]) < 1e-9);
}

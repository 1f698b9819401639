#include <catch_amalgamated.hpp>

#include "geoinv/mapping.hpp"

using namespace geoinv;
using R = Rational;

namespace {

std::vector<Flags> all_flags()
{
  std::vector<Flags> out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) out.push_back({a, b, c});
  return out;
}

}  // namespace

TEST_CASE("connection split and trace")
{
  Sampler rng(1);
  ConnectionSpace<R> sp(rng.jet<R>(4, 1, 2));
  CHECK(sp.sym() + sp.tor() == sp.full());
  CHECK(sp.sym().value == swap_slots(sp.sym().value, 1, 2));
  CHECK(sp.tor().value == -swap_slots(sp.tor().value, 1, 2));
  CHECK(sp.sym().grad == swap_slots(sp.sym().grad, 1, 2));
  for (int j = 0; j < 4; ++j) {
    R s(0);
    for (int a = 0; a < 4; ++a) s += sp.sym().value(a, j, a);
    CHECK(sp.theta().value(j) == s);
  }
}

TEST_CASE("curvature symmetries of a symmetric connection")
{
  for (int n : {2, 3, 4}) {
    Sampler rng(static_cast<std::uint64_t>(n));
    ConnectionSpace<R> sp(rng.jet<R>(n, 1, 2));
    const auto& r = sp.riemann();
    CHECK(r == -swap_slots(r, 2, 3));
    // first Bianchi identity R^i_{jmn} + R^i_{mnj} + R^i_{njm} = 0
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m)
          for (int k = 0; k < n; ++k) CHECK(r(i, j, m, k) + r(i, m, k, j) + r(i, k, j, m) == R(0));
    CHECK(sp.ricci_tensor() == contract(r, 0, 2));
  }
}

TEST_CASE("target connection follows the transformation rule entrywise")
{
  const int n = 3;
  for (const Flags& fl : all_flags()) {
    const auto inst = generate<R>(n, 11, fl);
    const auto lbar = build_target_connection(inst).full().value;
    const auto psi = (inst.u_bar - inst.u).value;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          R want = inst.L.value(i, j, k) + inst.xi.value(i, j, k);
          if (fl.s1) want += (i == j ? psi(k) : R(0)) + (i == k ? psi(j) : R(0));
          if (fl.s2) {
            want += inst.f_bar.value(i, j) * inst.sigma_bar.value(k) + inst.f_bar.value(i, k) * inst.sigma_bar.value(j);
            want -= inst.f.value(i, j) * inst.sigma.value(k) + inst.f.value(i, k) * inst.sigma.value(j);
          }
          if (fl.s3) want += inst.phi_bar.value(i, j, k) - inst.phi.value(i, j, k);
          CHECK(lbar(i, j, k) == want);
        }
  }
}

TEST_CASE("generated instances are valid, closed and reproducible")
{
  for (const Flags& fl : all_flags()) {
    const auto a = generate<R>(4, 3, fl);
    const auto b = generate<R>(4, 3, fl);
    REQUIRE_NOTHROW(validate(a));
    CHECK(a.L == b.L);
    CHECK(a.phi_bar == b.phi_bar);
    CHECK(a.sigma_bar == b.sigma_bar);
    CHECK(curl(a.u_bar - a.u) == Tensor<R>(4, 0, 2));
    const auto src = source_fields(a);
    const auto tgt = target_fields(a);
    CHECK(curl(deformation_trace(src, fl)) == curl(deformation_trace(tgt, fl)));
    if (fl.s1) CHECK(is_zero(psi_residual(a)));
  }
  CHECK_FALSE(generate<R>(3, 1, Flags{1, 1, 1}).L == generate<R>(3, 2, Flags{1, 1, 1}).L);
}

TEST_CASE("geodesic generation forces the flags and drops the torsion change")
{
  const auto g = generate<R>(3, 5, Flags{1, 1, 1}, MappingKind::Geodesic);
  CHECK(g.flags == Flags{1, 0, 0});
  CHECK(is_zero(g.xi.value));
  CHECK(source_fields(g).space.tor() == target_fields(g).space.tor());
}

TEST_CASE("validation rejects malformed instances")
{
  auto inst = generate<R>(3, 2, Flags{1, 1, 1});
  auto bad = inst;
  bad.phi.value(0, 0, 1) += R(1);
  CHECK_THROWS_AS(validate(bad), InstanceError);
  bad = inst;
  bad.xi.value(1, 0, 0) = R(1);
  CHECK_THROWS_AS(validate(bad), InstanceError);
  bad = inst;
  bad.flags.s2 = 2;
  CHECK_THROWS_AS(validate(bad), InstanceError);
  bad = inst;
  bad.u = Sampler(1).jet<R>(4, 0, 1);
  CHECK_THROWS_AS(validate(bad), InstanceError);
  CHECK_THROWS_AS(generate<R>(1, 0, Flags{}), InstanceError);
}

TEST_CASE("almost geodesic instances satisfy their constraint on both sides")
{
  for (int p : {1, 2})
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto inst = generate_agm3<R>(3, seed, p);
      CHECK(inst.flags == Flags{1, 0, 1});
      CHECK(agm_constraint_residual(inst) == R(0));
      const auto fit = fit_agm_parameters(inst.agm->vec, target_fields(inst).space, p);
      CHECK(fit.residual == R(0));
      CHECK(source_fields(inst).space.tor() == target_fields(inst).space.tor());
    }
}

TEST_CASE("the printed kind-2 derivative differs from the corrected one")
{
  const auto inst = generate_agm3<R>(3, 4, 2);
  const auto a = agm_derivative(inst.agm->vec, inst.L, AgmDerivative::Kind2);
  const auto b = agm_derivative(inst.agm->vec, inst.L, AgmDerivative::Kind2Literal);
  CHECK_FALSE(a == b);
}

TEST_CASE("float generation mirrors the rational pipeline")
{
  const auto inst = generate<double>(4, 8, Flags{1, 1, 1});
  REQUIRE_NOTHROW(validate(inst));
  CHECK(max_abs(psi_residual(inst)) < 1e-12);
}

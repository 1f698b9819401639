#include <catch_amalgamated.hpp>

#include "geoinv/certify.hpp"

using namespace geoinv;
using R = Rational;

TEST_CASE("realized fields follow the third-type deformation")
{
  const auto inst = generate_agm3<R>(3, 2, 1);
  const auto s = agm_source_space(inst);
  const auto sf = realize(s);
  CHECK(sf.phi == inst.phi);
  CHECK(constrained_vector(s) == inst.agm->vec);
  const auto t = agm_target_space(inst);
  CHECK(realize(t).phi == inst.phi_bar);
}

TEST_CASE("derived closed forms match the generic pipeline class by class")
{
  for (int p : {1, 2})
    for (int n : {3, 4})
      for (std::uint64_t seed = 0; seed < 2; ++seed) {
        const auto inst = generate_agm3<R>(n, seed, p);
        for (const auto& space : {agm_source_space(inst), agm_target_space(inst)}) {
          for (const auto& d : agm_diagnose(space)) {
            INFO(d.form << " p=" << p << " n=" << n);
            CHECK(d.derived_total == R(0));
            for (const auto& row : d.rows) {
              CHECK(row.derived_residual == R(0));
              if (row.differing_terms.empty()) CHECK(row.printed_residual == R(0));
            }
          }
        }
      }
}

TEST_CASE("typeset coefficients leave residuals only where terms differ")
{
  const auto inst = generate_agm3<R>(3, 1, 1);
  const auto diag = agm_diagnose(agm_source_space(inst));
  int differing_classes = 0;
  for (const auto& d : diag)
    for (const auto& row : d.rows) differing_classes += row.differing_terms.empty() ? 0 : 1;
  CHECK(differing_classes > 0);
  CHECK(diag[0].printed_total != R(0));
}

TEST_CASE("decomposition of A reconstructs it and satisfies the trace identity")
{
  for (int p : {1, 2}) {
    const auto inst = generate_agm3<R>(4, 3, p);
    for (const auto& space : {agm_source_space(inst), agm_target_space(inst)}) {
      const auto o = factored_objects(realize(space), agm_flags);
      const auto dec = agm_decompose(space);
      CHECK(reconstruct(dec) == o.a_tensor);
      CHECK(is_zero(agm_trace_identity_residual(o.a_tensor, dec)));
      CHECK(is_zero(dec.p));
      CHECK_FALSE(reconstruct(agm_decompose(space, true)) == o.a_tensor);
      const auto c4 = corollary4_forms(dec, o);
      CHECK(c4.basic == weyl_factored(o));
      CHECK(c4.fourth == weyl_fourth(o));
    }
  }
}

TEST_CASE("target parameters refit exactly")
{
  const auto inst = generate_agm3<R>(3, 5, 2);
  const auto s = agm_source_space(inst);
  const auto t = agm_target_space(inst);
  CHECK(t.p == s.p);
  CHECK(t.sigma.value == -s.sigma.value);
  CHECK(agm_constraint_residual(inst) == R(0));
}

TEST_CASE("grade names")
{
  CHECK(grade_name(Grade{}) == "1");
  CHECK(grade_name(Grade{1, 0, 1, 0}) == "mu sigma");
  CHECK(grade_name(Grade{0, 0, 2, 0}) == "sigma^2");
}

#pragma once

// Published formulas typed as index expressions next to the library routine
// that computes the same object.

#include <functional>
#include <string>
#include <vector>

#include "geoinv/bindings.hpp"

namespace corpus {

using namespace geoinv;

struct Formula {
  std::string name;
  std::string source;
  std::function<Tensor<Rational>(const SpaceFields<Rational>&, const FactoredObjects<Rational>&)> expected;
};

inline std::string frac(long num, long den) { return "(" + std::to_string(num) + "/" + std::to_string(den) + ")"; }

inline std::vector<Formula> formulas(int n)
{
  using T = Tensor<Rational>;
  using SF = SpaceFields<Rational>;
  using FO = FactoredObjects<Rational>;
  const std::string c = frac(1, n + 1);
  const std::string c2 = frac(1, (n + 1) * (n + 1));
  const std::string k = frac(1, n - 1);
  return {
      {"ricci", "R{a;ija}", [](const SF& sf, const FO&) { return sf.space.ricci_tensor(); }},
      {"skew ricci", "alt(R{;ij}; i,j)", [](const SF& sf, const FO&) { return alternate(sf.space.ricci_tensor(), 0, 1); }},
      {"trace identity", "R{a;aij} + alt(R{;ij}; i,j)", [n](const SF&, const FO&) { return T(n, 0, 2); }},
      {"thomas basic", "Lsym{i;jk} - omega{i;jk}",
       [](const SF& sf, const FO& o) { return thomas_basic(sf.space, o.omega.value); }},
      {"omega", "D{i;jk} + " + c + "*(d{i;j}*Theta{;k} + d{i;k}*Theta{;j})", [](const SF&, const FO& o) { return o.omega.value; }},
      {"geodesic thomas", "Lsym{i;jk} - " + c + "*(d{i;j}*Lsym{a;ka} + d{i;k}*Lsym{a;ja})",
       [](const SF& sf, const FO&) { return geodesic_thomas(sf.space.sym().value); }},
      {"delta bracket", "alt(d{i;m}*rho{;jn}; m,n)", [](const SF&, const FO& o) { return delta_alt(o.rho); }},
      {"weyl basic",
       "R{i;jmn} - cd(omega{i;jm}; n) + cd(omega{i;jn}; m) + omega{a;jm}*omega{i;an} - omega{a;jn}*omega{i;am}",
       [](const SF& sf, const FO& o) { return weyl_basic(sf.space, o.omega); }},
      {"weyl factored",
       "R{i;jmn} + A{i;jmn} - " + c + "*alt(d{i;m}*(cd(theta{;j}; n) - rho{;jn}); m,n) - " + c2 + "*alt(d{i;m}*S{;jn}; m,n)",
       [](const SF&, const FO& o) { return weyl_factored(o); }},
      {"weyl fourth",
       "R{i;jmn} + " + k + "*alt(d{i;m}*sym(Ricci{;jn}; j,n); m,n) + A{i;jmn} + " + k +
           "*alt(d{i;m}*sym(A{a;jna}; j,n); m,n)",
       [](const SF&, const FO& o) { return weyl_fourth(o); }},
      {"weyl projective",
       "R{i;jmn} + " + c + "*d{i;j}*alt(Ricci{;mn}; m,n) + " + frac(n, n * n - 1) + "*alt(d{i;m}*Ricci{;jn}; m,n) + " +
           frac(1, n * n - 1) + "*alt(d{i;m}*Ricci{;nj}; m,n)",
       [](const SF& sf, const FO&) { return weyl_projective(sf.space.riemann(), sf.space.ricci_tensor()); }},
      {"A first trace", "A{a;aij} + alt(rho{;ij}; i,j)", [n](const SF&, const FO&) { return T(n, 0, 2); }},
  };
}

}  // namespace corpus

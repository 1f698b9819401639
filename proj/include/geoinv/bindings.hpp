#pragma once

#include "geoinv/certify.hpp"
#include "geoinv/index_expr.hpp"

namespace geoinv {

enum class Side { Source, Target };

inline Side parse_side(std::string_view name)
{
  if (name == "source") return Side::Source;
  if (name == "target") return Side::Target;
  throw Error("unknown space '" + std::string(name) + "' (expected source or target)");
}

/// Names available to expressions for one side of an instance. Fields and
/// connection parts carry first derivatives; curvature objects do not.
template <typename Scalar>
expr::Bindings<Scalar> instance_bindings(const MappingInstance<Scalar>& inst, Side side)
{
  const auto sf = side == Side::Source ? source_fields(inst) : target_fields(inst);
  const auto o = factored_objects(sf, inst.flags);
  const auto& sp = sf.space;
  expr::Bindings<Scalar> b;
  expr::bind(b, "L", sp.full());
  expr::bind(b, "Lsym", sp.sym());
  expr::bind(b, "Ltor", sp.tor());
  expr::bind(b, "theta", sp.theta());
  expr::bind(b, "u", sf.u);
  expr::bind(b, "sigma", sf.sigma);
  expr::bind(b, "f", sf.f);
  expr::bind(b, "phi", sf.phi);
  expr::bind(b, "D", o.deformation);
  expr::bind(b, "tau", o.tau);
  expr::bind(b, "Theta", o.big_theta);
  expr::bind(b, "omega", o.omega);
  expr::bind(b, "R", o.riemann);
  expr::bind(b, "R", o.ricci);
  expr::bind(b, "Ricci", o.ricci);
  expr::bind(b, "rho", o.rho);
  expr::bind(b, "S", o.s_tilde);
  expr::bind(b, "A", o.a_tensor);
  if (inst.agm) {
    expr::bind(b, "agm_sigma", inst.agm->sigma);
    expr::bind(b, "agm_vector", inst.agm->vec);
  }
  return b;
}

}  // namespace geoinv

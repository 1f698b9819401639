#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "geoinv/connection.hpp"
#include "geoinv/linsolve.hpp"
#include "geoinv/random.hpp"

namespace geoinv {

/// Switches for the three deformation summands of the transformation rule.
struct Flags {
  int s1 = 1;
  int s2 = 1;
  int s3 = 1;

  bool operator==(const Flags&) const = default;
};

enum class MappingKind { General, Geodesic, Agm3 };

MappingKind parse_mapping_kind(std::string_view name);
std::string_view mapping_kind_name(MappingKind kind);

/// Kind p of the almost geodesic constraint, or the printed p = 2 form that
/// drops the phi factor from the connection term.
enum class AgmDerivative { Kind1, Kind2, Kind2Literal };

/// Fields attached to one side of the mapping.
template <typename Scalar>
struct SpaceFields {
  ConnectionSpace<Scalar> space;
  JetTensor<Scalar> u;      // (0,1)
  JetTensor<Scalar> sigma;  // (0,1)
  JetTensor<Scalar> f;      // (1,1) affinor
  JetTensor<Scalar> phi;    // (1,2), symmetric in the lower pair

  int dim() const { return space.dim(); }
};

/// Data of an almost geodesic mapping of the third type.
template <typename Scalar>
struct AgmBlock {
  int p = 1;
  JetTensor<Scalar> sigma;  // (0,2), symmetric
  JetTensor<Scalar> vec;    // (1,0); its gradient obeys the constraint
  Tensor<Scalar> nu;        // (0,1)
  Scalar mu{0};
};

template <typename Scalar>
struct MappingInstance {
  int dim = 3;
  Flags flags;
  MappingKind kind = MappingKind::General;
  std::uint64_t seed = 0;

  JetTensor<Scalar> L;  // full, non-symmetric connection of the source space
  JetTensor<Scalar> u, sigma, f, phi;
  JetTensor<Scalar> u_bar, sigma_bar, f_bar, phi_bar;
  JetTensor<Scalar> xi;  // (1,2), antisymmetric in the lower pair
  std::optional<AgmBlock<Scalar>> agm;
};

namespace detail {

template <typename Scalar>
bool symmetric_in(const JetTensor<Scalar>& t, int a, int b)
{
  return t.value == swap_slots(t.value, a, b) && t.grad == swap_slots(t.grad, a, b);
}

template <typename Scalar>
bool antisymmetric_in(const JetTensor<Scalar>& t, int a, int b)
{
  return t.value == -swap_slots(t.value, a, b) && t.grad == -swap_slots(t.grad, a, b);
}

template <typename Scalar>
void require_valence(const JetTensor<Scalar>& t, int dim, int upper, int lower, const char* name)
{
  if (t.dim() != dim || t.upper() != upper || t.lower() != lower)
    throw InstanceError(std::string("field ") + name + " has the wrong valence or dimension");
}

/// s(f^i_j sigma_k + f^i_k sigma_j)
template <typename Scalar>
JetTensor<Scalar> affinor_term(const JetTensor<Scalar>& f, const JetTensor<Scalar>& sigma)
{
  auto fs = jet_mul(f, sigma);
  return fs + jet_swap(fs, 1, 2);
}

/// delta^i_j v_k + delta^i_k v_j
template <typename Scalar>
JetTensor<Scalar> delta_pair(const JetTensor<Scalar>& v)
{
  auto dv = jet_mul(constant_jet(delta<Scalar>(v.dim())), v);
  return dv + jet_swap(dv, 1, 2);
}

}  // namespace detail

/// Checks valences, lower-pair symmetries and the dimension bound.
template <typename Scalar>
void validate(const MappingInstance<Scalar>& inst)
{
  const int n = inst.dim;
  if (n < 2) throw InstanceError("dimension must be at least 2");
  for (int s : {inst.flags.s1, inst.flags.s2, inst.flags.s3})
    if (s != 0 && s != 1) throw InstanceError("flags must be 0 or 1");
  detail::require_valence(inst.L, n, 1, 2, "L");
  detail::require_valence(inst.xi, n, 1, 2, "xi");
  for (auto* t : {&inst.u, &inst.u_bar, &inst.sigma, &inst.sigma_bar})
    detail::require_valence(*t, n, 0, 1, "u/sigma");
  detail::require_valence(inst.f, n, 1, 1, "f");
  detail::require_valence(inst.f_bar, n, 1, 1, "f_bar");
  detail::require_valence(inst.phi, n, 1, 2, "phi");
  detail::require_valence(inst.phi_bar, n, 1, 2, "phi_bar");
  if (!detail::symmetric_in(inst.phi, 1, 2)) throw InstanceError("phi must be symmetric in its lower pair");
  if (!detail::symmetric_in(inst.phi_bar, 1, 2)) throw InstanceError("phi_bar must be symmetric in its lower pair");
  if (!detail::antisymmetric_in(inst.xi, 1, 2)) throw InstanceError("xi must be antisymmetric in its lower pair");
  if (inst.agm) {
    const auto& agm = *inst.agm;
    if (agm.p != 1 && agm.p != 2) throw InstanceError("agm kind p must be 1 or 2");
    detail::require_valence(agm.sigma, n, 0, 2, "agm sigma");
    detail::require_valence(agm.vec, n, 1, 0, "agm vector");
    if (agm.nu.dim() != n || agm.nu.upper() != 0 || agm.nu.lower() != 1)
      throw InstanceError("agm nu must be a covector");
    if (!detail::symmetric_in(agm.sigma, 0, 1)) throw InstanceError("agm sigma must be symmetric");
  }
}

/// Image connection under the transformation rule; gradients follow by jet
/// algebra.
template <typename Scalar>
ConnectionSpace<Scalar> build_target_connection(const MappingInstance<Scalar>& inst)
{
  validate(inst);
  const auto& fl = inst.flags;
  JetTensor<Scalar> lbar = inst.L + inst.xi;
  if (fl.s1) lbar = lbar + detail::delta_pair(inst.u_bar - inst.u);
  if (fl.s2) lbar = lbar + detail::affinor_term(inst.f_bar, inst.sigma_bar) - detail::affinor_term(inst.f, inst.sigma);
  if (fl.s3) lbar = lbar + inst.phi_bar - inst.phi;
  return ConnectionSpace<Scalar>(std::move(lbar));
}

template <typename Scalar>
SpaceFields<Scalar> source_fields(const MappingInstance<Scalar>& inst)
{
  validate(inst);
  return {ConnectionSpace<Scalar>(inst.L), inst.u, inst.sigma, inst.f, inst.phi};
}

template <typename Scalar>
SpaceFields<Scalar> target_fields(const MappingInstance<Scalar>& inst)
{
  return {build_target_connection(inst), inst.u_bar, inst.sigma_bar, inst.f_bar, inst.phi_bar};
}

/// s2(f^i_j sigma_k + f^i_k sigma_j) + s3 phi^i_{jk}
template <typename Scalar>
JetTensor<Scalar> deformation_part(const SpaceFields<Scalar>& sf, const Flags& fl)
{
  JetTensor<Scalar> d = zero_jet<Scalar>(sf.dim(), 1, 2);
  if (fl.s2) d = d + detail::affinor_term(sf.f, sf.sigma);
  if (fl.s3) d = d + sf.phi;
  return d;
}

/// tau_k = s2(f^a_k sigma_a + f sigma_k) + s3 phi^a_{ka}, the trace of the
/// deformation part.
template <typename Scalar>
JetTensor<Scalar> deformation_trace(const SpaceFields<Scalar>& sf, const Flags& fl)
{
  return jet_contract(deformation_part(sf, fl), 0, 1);
}

/// omega^i_{jk} = D^i_{jk} + (delta^i_j Theta_k + delta^i_k Theta_j)/(N+1)
/// with Theta = theta - tau.
template <typename Scalar>
JetTensor<Scalar> omega(const SpaceFields<Scalar>& sf, const Flags& fl)
{
  const int n = sf.dim();
  auto d = deformation_part(sf, fl);
  auto big_theta = sf.space.theta() - jet_contract(d, 0, 1);
  return d + fraction<Scalar>(1, n + 1) * detail::delta_pair(big_theta);
}

/// s1 psi_k minus the trace expression for it; zero for a consistent
/// instance.
template <typename Scalar>
Tensor<Scalar> psi_residual(const MappingInstance<Scalar>& inst)
{
  if (inst.flags.s1 != 1) throw NotApplicableError("psi_residual requires s1 = 1");
  const auto src = source_fields(inst);
  const auto tgt = target_fields(inst);
  const auto psi = (inst.u_bar - inst.u).value;
  const auto dtheta = tgt.space.theta().value - src.space.theta().value;
  const auto dtau = deformation_trace(tgt, inst.flags).value - deformation_trace(src, inst.flags).value;
  return psi - fraction<Scalar>(1, inst.dim + 1) * (dtheta - dtau);
}

/// curl(v)_{jl} = v_{j,l} - v_{l,j}
template <typename Scalar>
Tensor<Scalar> curl(const JetTensor<Scalar>& v)
{
  if (v.upper() != 0 || v.lower() != 1) throw ShapeError("curl: expected a covector jet");
  return alternate(v.grad, 0, 1);
}

struct GenerateOptions {
  /// Leave the closure conditions on psi and on the auxiliary traces
  /// unimposed. Only the Thomas objects and the basic Weyl object stay
  /// invariant for such instances.
  bool free_auxiliaries = false;
};

namespace detail {

/// Adjusts the gradient of the target auxiliaries so that the trace tau_bar
/// has the same curl as tau.
template <typename Scalar>
bool match_trace_curl(MappingInstance<Scalar>& inst)
{
  const int n = inst.dim;
  const Flags& fl = inst.flags;
  if (!fl.s2 && !fl.s3) return true;
  SpaceFields<Scalar> src{ConnectionSpace<Scalar>(), inst.u, inst.sigma, inst.f, inst.phi};
  SpaceFields<Scalar> tgt{ConnectionSpace<Scalar>(), inst.u_bar, inst.sigma_bar, inst.f_bar, inst.phi_bar};
  auto trace_of = [&](const SpaceFields<Scalar>& sf) {
    JetTensor<Scalar> d = zero_jet<Scalar>(n, 1, 2);
    if (fl.s2) d = d + affinor_term(sf.f, sf.sigma);
    if (fl.s3) d = d + sf.phi;
    return jet_contract(d, 0, 1);
  };
  const Tensor<Scalar> mismatch = curl(trace_of(tgt)) - curl(trace_of(src));
  // Required change of tau_bar_{j,l}.
  const Tensor<Scalar> target_change = fraction<Scalar>(-1, 2) * mismatch;
  if (fl.s3) {
    // d_l phi^i_{jk} += (delta^i_j C_{kl} + delta^i_k C_{jl})/(N+1) shifts the
    // trace gradient by exactly C while keeping the lower pair symmetric.
    const Scalar c = fraction<Scalar>(1, n + 1);
    auto corr = tabulate<Scalar, 4>(n, 1, 3, [&](int i, int j, int k, int l) {
      Scalar s(0);
      if (i == j) s += target_change(k, l);
      if (i == k) s += target_change(j, l);
      return c * s;
    });
    inst.phi_bar.grad += corr;
    return true;
  }
  // s2 only: d_l tau_bar_j = (f_bar^a_j + f_bar delta^a_j) d_l sigma_bar_a + ...
  const auto& fb = inst.f_bar.value;
  Scalar trace(0);
  for (int a = 0; a < n; ++a) trace += fb(a, a);
  Matrix<Scalar> m(n, n);
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < n; ++a) m(j, a) = fb(a, j) + (a == j ? trace : Scalar(0));
  for (int l = 0; l < n; ++l) {
    Vector<Scalar> rhs(n);
    for (int j = 0; j < n; ++j) rhs(j) = target_change(j, l);
    auto sol = solve_linear<Scalar>(m, rhs);
    if (!sol) return false;
    for (int a = 0; a < n; ++a) inst.sigma_bar.grad(a, l) += (*sol)(a);
  }
  return true;
}

}  // namespace detail

/// Seeded random instance of the general transformation rule.
template <typename Scalar>
MappingInstance<Scalar> generate(int n, std::uint64_t seed, Flags flags,
                                 MappingKind kind = MappingKind::General, GenerateOptions opts = {})
{
  if (n < 2) throw InstanceError("dimension must be at least 2");
  if (kind == MappingKind::Agm3) throw InstanceError("use generate_agm3 for almost geodesic instances");
  if (kind == MappingKind::Geodesic) flags = Flags{1, 0, 0};
  Sampler rng(seed);
  MappingInstance<Scalar> inst;
  inst.dim = n;
  inst.flags = flags;
  inst.kind = kind;
  inst.seed = seed;
  inst.L = rng.jet<Scalar>(n, 1, 2);
  inst.u = rng.jet<Scalar>(n, 0, 1);
  inst.sigma = rng.jet<Scalar>(n, 0, 1);
  inst.f = rng.jet<Scalar>(n, 1, 1);
  inst.phi = rng.symmetric_jet<Scalar>(n, 1, 2, 1, 2);
  inst.xi = kind == MappingKind::Geodesic ? zero_jet<Scalar>(n, 1, 2) : rng.antisymmetric_jet<Scalar>(n, 1, 2, 1, 2);
  // psi = u_bar - u with a symmetric gradient: a closed 1-form.
  JetTensor<Scalar> psi = opts.free_auxiliaries ? rng.jet<Scalar>(n, 0, 1)
                                                : JetTensor<Scalar>{rng.tensor<Scalar>(n, 0, 1),
                                                                    sym_pair(rng.tensor<Scalar>(n, 0, 2), 0, 1)};
  inst.u_bar = inst.u + psi;
  for (int attempt = 0;; ++attempt) {
    inst.sigma_bar = rng.jet<Scalar>(n, 0, 1);
    inst.f_bar = rng.jet<Scalar>(n, 1, 1);
    inst.phi_bar = rng.symmetric_jet<Scalar>(n, 1, 2, 1, 2);
    if (opts.free_auxiliaries || detail::match_trace_curl(inst)) break;
    if (attempt > 64) throw DegenerateError("generate: could not match auxiliary curls");
  }
  return inst;
}

/// phi^i_{p|j} computed from the jet of phi and a full connection.
template <typename Scalar>
Tensor<Scalar> agm_derivative(const JetTensor<Scalar>& vec, const JetTensor<Scalar>& lfull, AgmDerivative kind)
{
  const int n = vec.dim();
  const auto& L = lfull.value;
  return tabulate<Scalar, 2>(n, 1, 1, [&](int i, int j) {
    Scalar s = vec.grad(i, j);
    for (int a = 0; a < n; ++a) {
      switch (kind) {
        case AgmDerivative::Kind1: s += L(i, a, j) * vec.value(a); break;
        case AgmDerivative::Kind2: s += L(i, j, a) * vec.value(a); break;
        case AgmDerivative::Kind2Literal: s += L(i, j, a); break;
      }
    }
    return s;
  });
}

inline AgmDerivative agm_kind(int p) { return p == 1 ? AgmDerivative::Kind1 : AgmDerivative::Kind2; }

template <typename Scalar>
struct AgmFit {
  Tensor<Scalar> nu;
  Scalar mu{0};
  Scalar residual{0};
};

/// Fits phi^i_{p|j} = nu_j phi^i + mu delta^i_j in the given space.
template <typename Scalar>
AgmFit<Scalar> fit_agm_parameters(const JetTensor<Scalar>& vec, const ConnectionSpace<Scalar>& space, int p,
                                  bool literal_p2 = false)
{
  const int n = vec.dim();
  if (is_zero(vec.value)) throw DegenerateError("fit_agm_parameters: the vector field vanishes");
  const AgmDerivative kind = (p == 2 && literal_p2) ? AgmDerivative::Kind2Literal : agm_kind(p);
  const Tensor<Scalar> m = agm_derivative(vec, space.full(), kind);
  Matrix<Scalar> a = Matrix<Scalar>::Zero(n * n, n + 1);
  Vector<Scalar> b(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int row = i * n + j;
      a(row, j) = vec.value(i);
      a(row, n) = i == j ? Scalar(1) : Scalar(0);
      b(row) = m(i, j);
    }
  const Vector<Scalar> x = least_squares<Scalar>(a, b);
  AgmFit<Scalar> fit{Tensor<Scalar>(n, 0, 1), x(n), Scalar(0)};
  for (int j = 0; j < n; ++j) fit.nu(j) = x(j);
  const Vector<Scalar> r = a * x - b;
  for (Eigen::Index k = 0; k < r.size(); ++k) fit.residual = std::max(fit.residual, abs_value(r(k)));
  return fit;
}

/// Assembles an almost geodesic instance of the third type. The gradient of
/// `vec` is overwritten so the constraint holds exactly in the source space.
template <typename Scalar>
MappingInstance<Scalar> make_agm3_instance(JetTensor<Scalar> lfull, JetTensor<Scalar> u, JetTensor<Scalar> psi,
                                           JetTensor<Scalar> sigma2, Tensor<Scalar> vec_value, Tensor<Scalar> nu,
                                           Scalar mu, int p, bool close_curl = true)
{
  const int n = lfull.dim();
  if (p != 1 && p != 2) throw InstanceError("agm kind p must be 1 or 2");
  const auto& L = lfull.value;
  Tensor<Scalar> vgrad = tabulate<Scalar, 2>(n, 1, 1, [&](int i, int j) {
    Scalar s = nu(j) * vec_value(i) + (i == j ? mu : Scalar(0));
    for (int a = 0; a < n; ++a) s -= (p == 1 ? L(i, a, j) : L(i, j, a)) * vec_value(a);
    return s;
  });
  JetTensor<Scalar> vec{vec_value, std::move(vgrad)};

  if (close_curl && !is_zero(vec.value)) {
    // Make q_j = sigma_{ja} phi^a closed by shifting the sigma gradient along
    // d sigma_{jk,l} = a_{jl} w_k + a_{kl} w_j with w.phi = 1.
    Scalar norm(0);
    for (int a = 0; a < n; ++a) norm += vec.value(a) * vec.value(a);
    Tensor<Scalar> w(n, 0, 1);
    for (int a = 0; a < n; ++a) w(a) = vec.value(a) / norm;
    const Tensor<Scalar> k = curl(jet_contract(jet_mul(vec, sigma2), 0, 1));
    // d curl_{jl} = a_{jl} - a_{lj} + w_j b_l - w_l b_j, b_l = phi^a a_{al}
    const int eqs = n * (n - 1) / 2;
    Matrix<Scalar> sys = Matrix<Scalar>::Zero(eqs, n * n);
    Vector<Scalar> rhs(eqs);
    int row = 0;
    for (int j = 0; j < n; ++j)
      for (int l = j + 1; l < n; ++l, ++row) {
        sys(row, j * n + l) += Scalar(1);
        sys(row, l * n + j) -= Scalar(1);
        for (int a = 0; a < n; ++a) {
          sys(row, a * n + l) += w(j) * vec.value(a);
          sys(row, a * n + j) -= w(l) * vec.value(a);
        }
        rhs(row) = -k(j, l);
      }
    auto sol = solve_linear<Scalar>(sys, rhs);
    if (!sol) throw DegenerateError("make_agm3_instance: cannot close the sigma-phi curl");
    sigma2.grad += tabulate<Scalar, 3>(n, 0, 3, [&](int j, int kk, int l) {
      return (*sol)(j * n + l) * w(kk) + (*sol)(kk * n + l) * w(j);
    });
  }

  MappingInstance<Scalar> inst;
  inst.dim = n;
  inst.flags = Flags{1, 0, 1};
  inst.kind = MappingKind::Agm3;
  inst.L = std::move(lfull);
  inst.u = u;
  inst.u_bar = u + psi;
  inst.sigma = zero_jet<Scalar>(n, 0, 1);
  inst.sigma_bar = zero_jet<Scalar>(n, 0, 1);
  inst.f = zero_jet<Scalar>(n, 1, 1);
  inst.f_bar = zero_jet<Scalar>(n, 1, 1);
  const auto sphi = jet_mul(vec, sigma2);  // phi^i sigma_{jk}
  inst.phi = fraction<Scalar>(-1, 2) * sphi;
  inst.phi_bar = fraction<Scalar>(1, 2) * sphi;
  inst.xi = zero_jet<Scalar>(n, 1, 2);
  inst.agm = AgmBlock<Scalar>{p, std::move(sigma2), std::move(vec), std::move(nu), std::move(mu)};
  return inst;
}

/// Seeded random equitorsion almost geodesic mapping of the third type.
template <typename Scalar>
MappingInstance<Scalar> generate_agm3(int n, std::uint64_t seed, int p, GenerateOptions opts = {})
{
  if (n < 2) throw InstanceError("dimension must be at least 2");
  if (p != 1 && p != 2) throw InstanceError("agm kind p must be 1 or 2");
  Sampler rng(seed);
  auto lfull = rng.jet<Scalar>(n, 1, 2);
  auto u = rng.jet<Scalar>(n, 0, 1);
  JetTensor<Scalar> psi = opts.free_auxiliaries
                              ? rng.jet<Scalar>(n, 0, 1)
                              : JetTensor<Scalar>{rng.tensor<Scalar>(n, 0, 1), sym_pair(rng.tensor<Scalar>(n, 0, 2), 0, 1)};
  auto sigma2 = rng.symmetric_jet<Scalar>(n, 0, 2, 0, 1);
  Tensor<Scalar> vec = rng.tensor<Scalar>(n, 1, 0);
  while (is_zero(vec)) vec = rng.tensor<Scalar>(n, 1, 0);
  auto nu = rng.tensor<Scalar>(n, 0, 1);
  Scalar mu = rng.draw<Scalar>();
  auto inst = make_agm3_instance(std::move(lfull), std::move(u), std::move(psi), std::move(sigma2), std::move(vec),
                                 std::move(nu), std::move(mu), p, !opts.free_auxiliaries);
  inst.seed = seed;
  return inst;
}

/// Max |phi^i_{p|j} - nu_j phi^i - mu delta^i_j| for the stored parameters
/// in the source space.
template <typename Scalar>
Scalar agm_constraint_residual(const MappingInstance<Scalar>& inst)
{
  if (!inst.agm) throw NotApplicableError("instance has no almost geodesic block");
  const auto& agm = *inst.agm;
  const auto m = agm_derivative(agm.vec, inst.L, agm_kind(agm.p));
  Scalar r(0);
  for (int i = 0; i < inst.dim; ++i)
    for (int j = 0; j < inst.dim; ++j) {
      Scalar e = m(i, j) - agm.nu(j) * agm.vec.value(i) - (i == j ? agm.mu : Scalar(0));
      r = std::max(r, abs_value(e));
    }
  return r;
}

}  // namespace geoinv

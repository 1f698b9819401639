#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "geoinv/certify.hpp"

namespace geoinv::io {

using Json = nlohmann::json;

template <typename Scalar>
Json to_json(const Scalar& x)
{
  if constexpr (is_exact_v<Scalar>) {
    return to_string(x);
  } else {
    return static_cast<double>(x);
  }
}

template <typename Scalar>
Scalar scalar_from_json(const Json& j, const std::string& where)
{
  if (j.is_string()) {
    Rational r;
    try {
      r = parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      throw FormatError(where + ": " + e.what());
    }
    if constexpr (is_exact_v<Scalar>) {
      return r;
    } else {
      return to_double(r);
    }
  }
  if (j.is_number_integer()) return Scalar(j.get<long long>());
  if (j.is_number()) {
    if constexpr (is_exact_v<Scalar>) {
      throw FormatError(where + ": rational files store entries as \"num/den\" strings");
    } else {
      return j.get<double>();
    }
  }
  throw FormatError(where + ": expected a number or a \"num/den\" string");
}

template <typename Scalar>
Json tensor_json(const Tensor<Scalar>& t)
{
  Json arr = Json::array();
  for (Eigen::Index k = 0; k < t.size(); ++k) arr.push_back(to_json(t[k]));
  return arr;
}

template <typename Scalar>
Tensor<Scalar> tensor_from_json(const Json& arr, int dim, int upper, int lower, const std::string& where)
{
  Tensor<Scalar> t(dim, upper, lower);
  if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != t.size())
    throw FormatError(where + ": expected an array of " + std::to_string(t.size()) + " entries");
  for (Eigen::Index k = 0; k < t.size(); ++k) t[k] = scalar_from_json<Scalar>(arr[static_cast<std::size_t>(k)], where);
  return t;
}

template <typename Scalar>
Json field_json(const JetTensor<Scalar>& jet)
{
  return Json{{"valence", {jet.upper(), jet.lower()}}, {"value", tensor_json(jet.value)}, {"grad", tensor_json(jet.grad)}};
}

template <typename Scalar>
Json field_json(const Tensor<Scalar>& t)
{
  return Json{{"valence", {t.upper(), t.lower()}}, {"value", tensor_json(t)}};
}

/// Fields stored in an instance file, in the order written.
inline const std::vector<std::string>& jet_field_names()
{
  static const std::vector<std::string> names{"L", "u", "sigma", "f", "phi", "u_bar", "sigma_bar", "f_bar", "phi_bar", "xi"};
  return names;
}

template <typename Scalar>
Json instance_json(const MappingInstance<Scalar>& inst)
{
  Json j;
  j["dimension"] = inst.dim;
  j["mode"] = std::string(mode_name(mode_of_v<Scalar>));
  j["flags"] = {{"s1", inst.flags.s1}, {"s2", inst.flags.s2}, {"s3", inst.flags.s3}};
  j["mapping"] = std::string(mapping_kind_name(inst.kind));
  j["seed"] = inst.seed;
  Json& f = j["fields"];
  const JetTensor<Scalar>* jets[] = {&inst.L, &inst.u, &inst.sigma, &inst.f, &inst.phi,
                                     &inst.u_bar, &inst.sigma_bar, &inst.f_bar, &inst.phi_bar, &inst.xi};
  for (std::size_t k = 0; k < jet_field_names().size(); ++k) f[jet_field_names()[k]] = field_json(*jets[k]);
  if (inst.agm) {
    j["p"] = inst.agm->p;
    f["agm_sigma"] = field_json(inst.agm->sigma);
    f["agm_vector"] = field_json(inst.agm->vec);
    f["agm_nu"] = field_json(inst.agm->nu);
    f["agm_mu"] = field_json(scalar_tensor<Scalar>(inst.dim, inst.agm->mu));
  }
  return j;
}

/// Instance file text; two-space indent and a trailing newline.
template <typename Scalar>
std::string dump_instance(const MappingInstance<Scalar>& inst)
{
  return instance_json(inst).dump(2) + "\n";
}

inline Json parse_json(const std::string& text, const std::string& where)
{
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(where + ": " + e.what());
  }
}

inline Json read_json_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

inline ScalarMode file_mode(const Json& j)
{
  if (!j.is_object() || !j.contains("mode") || !j["mode"].is_string()) throw FormatError("instance file: missing \"mode\"");
  try {
    return parse_mode(j["mode"].get<std::string>());
  } catch (const Error& e) {
    throw FormatError(std::string("instance file: ") + e.what());
  }
}

namespace detail {

inline int int_member(const Json& j, const char* key, const std::string& where)
{
  if (!j.contains(key) || !j[key].is_number_integer()) throw FormatError(where + ": missing integer \"" + key + "\"");
  return j[key].get<int>();
}

inline const Json& field_entry(const Json& fields, const std::string& name, int upper, int lower)
{
  if (!fields.contains(name)) throw FormatError("instance file: missing field \"" + name + "\"");
  const Json& f = fields[name];
  const std::string where = "field " + name;
  if (!f.is_object() || !f.contains("valence") || !f["valence"].is_array() || f["valence"].size() != 2)
    throw FormatError(where + ": missing valence");
  if (f["valence"][0] != upper || f["valence"][1] != lower)
    throw FormatError(where + ": expected valence [" + std::to_string(upper) + "," + std::to_string(lower) + "]");
  if (!f.contains("value")) throw FormatError(where + ": missing value");
  return f;
}

template <typename Scalar>
JetTensor<Scalar> read_jet(const Json& fields, const std::string& name, int n, int upper, int lower)
{
  const Json& f = field_entry(fields, name, upper, lower);
  if (!f.contains("grad")) throw FormatError("field " + name + ": missing grad");
  return {tensor_from_json<Scalar>(f["value"], n, upper, lower, "field " + name + " value"),
          tensor_from_json<Scalar>(f["grad"], n, upper, lower + 1, "field " + name + " grad")};
}

template <typename Scalar>
Tensor<Scalar> read_tensor(const Json& fields, const std::string& name, int n, int upper, int lower)
{
  const Json& f = field_entry(fields, name, upper, lower);
  return tensor_from_json<Scalar>(f["value"], n, upper, lower, "field " + name + " value");
}

}  // namespace detail

/// Reads and validates an instance. Throws FormatError on schema problems
/// and InstanceError when declared symmetries fail.
template <typename Scalar>
MappingInstance<Scalar> instance_from_json(const Json& j)
{
  if (file_mode(j) != mode_of_v<Scalar>) throw FormatError("instance file: mode does not match the requested arithmetic");
  MappingInstance<Scalar> inst;
  const int n = detail::int_member(j, "dimension", "instance file");
  if (n < 2 || n > 16) throw FormatError("instance file: dimension out of range");
  inst.dim = n;
  if (!j.contains("flags") || !j["flags"].is_object()) throw FormatError("instance file: missing \"flags\"");
  inst.flags = Flags{detail::int_member(j["flags"], "s1", "flags"), detail::int_member(j["flags"], "s2", "flags"),
                     detail::int_member(j["flags"], "s3", "flags")};
  if (!j.contains("mapping") || !j["mapping"].is_string()) throw FormatError("instance file: missing \"mapping\"");
  try {
    inst.kind = parse_mapping_kind(j["mapping"].get<std::string>());
  } catch (const Error& e) {
    throw FormatError(std::string("instance file: ") + e.what());
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw FormatError("instance file: seed must be a non-negative integer");
    inst.seed = j["seed"].get<std::uint64_t>();
  }
  if (!j.contains("fields") || !j["fields"].is_object()) throw FormatError("instance file: missing \"fields\"");
  const Json& f = j["fields"];
  inst.L = detail::read_jet<Scalar>(f, "L", n, 1, 2);
  inst.u = detail::read_jet<Scalar>(f, "u", n, 0, 1);
  inst.sigma = detail::read_jet<Scalar>(f, "sigma", n, 0, 1);
  inst.f = detail::read_jet<Scalar>(f, "f", n, 1, 1);
  inst.phi = detail::read_jet<Scalar>(f, "phi", n, 1, 2);
  inst.u_bar = detail::read_jet<Scalar>(f, "u_bar", n, 0, 1);
  inst.sigma_bar = detail::read_jet<Scalar>(f, "sigma_bar", n, 0, 1);
  inst.f_bar = detail::read_jet<Scalar>(f, "f_bar", n, 1, 1);
  inst.phi_bar = detail::read_jet<Scalar>(f, "phi_bar", n, 1, 2);
  inst.xi = detail::read_jet<Scalar>(f, "xi", n, 1, 2);
  if (inst.kind == MappingKind::Agm3) {
    AgmBlock<Scalar> agm;
    agm.p = detail::int_member(j, "p", "instance file");
    agm.sigma = detail::read_jet<Scalar>(f, "agm_sigma", n, 0, 2);
    agm.vec = detail::read_jet<Scalar>(f, "agm_vector", n, 1, 0);
    agm.nu = detail::read_tensor<Scalar>(f, "agm_nu", n, 0, 1);
    agm.mu = detail::read_tensor<Scalar>(f, "agm_mu", n, 0, 0)[0];
    inst.agm = std::move(agm);
    if (inst.flags != agm_flags) throw InstanceError("agm3 instances need flags s1=1, s2=0, s3=1");
  }
  if (inst.kind == MappingKind::Geodesic && inst.flags != Flags{1, 0, 0})
    throw InstanceError("geodesic instances need flags s1=1, s2=0, s3=0");
  validate(inst);
  return inst;
}

template <typename Scalar>
MappingInstance<Scalar> load_instance(const std::string& path)
{
  return instance_from_json<Scalar>(read_json_file(path));
}

inline Json row_json(const ResidualRow& r)
{
  return Json{{"name", r.name}, {"tag", r.tag}, {"max_abs", r.max_abs}, {"max_rel", r.max_rel}, {"pass", r.pass}};
}

inline Json rows_json(const std::vector<ResidualRow>& rows)
{
  Json arr = Json::array();
  for (const auto& r : rows) arr.push_back(row_json(r));
  return arr;
}

inline Json report_json(const CheckReport& rep)
{
  Json j;
  j["dimension"] = rep.dim;
  j["mode"] = std::string(mode_name(rep.mode));
  j["mapping"] = std::string(mapping_kind_name(rep.mapping));
  j["flags"] = {{"s1", rep.flags.s1}, {"s2", rep.flags.s2}, {"s3", rep.flags.s3}};
  j["seed"] = rep.seed;
  j["pass"] = rep.pass();
  j["consistency"] = rows_json(rep.consistency);
  j["invariants"] = rows_json(rep.invariants);
  Json diag = Json::array();
  for (const auto& d : rep.diagnostics)
    diag.push_back(Json{{"side", d.side},
                        {"form", d.form},
                        {"grade", d.grade},
                        {"terms", d.terms},
                        {"differing_terms", d.differing_terms},
                        {"printed_residual", d.printed_residual},
                        {"derived_residual", d.derived_residual}});
  j["diagnostics"] = std::move(diag);
  return j;
}

inline Json report_json(const IdentityReport& rep)
{
  return Json{{"dimension", rep.dim},   {"count", rep.count}, {"seed", rep.seed}, {"pass", rep.pass()},
              {"identities", rows_json(rep.rows)}, {"diagnostic", rows_json(rep.diagnostic)}};
}

}  // namespace geoinv::io

#include "geoinv/mapping.hpp"

namespace geoinv {

MappingKind parse_mapping_kind(std::string_view name)
{
  if (name == "general") return MappingKind::General;
  if (name == "geodesic") return MappingKind::Geodesic;
  if (name == "agm3") return MappingKind::Agm3;
  throw Error("unknown mapping kind '" + std::string(name) + "' (expected general, geodesic or agm3)");
}

std::string_view mapping_kind_name(MappingKind kind)
{
  switch (kind) {
    case MappingKind::General: return "general";
    case MappingKind::Geodesic: return "geodesic";
    case MappingKind::Agm3: return "agm3";
  }
  return "general";
}

}  // namespace geoinv

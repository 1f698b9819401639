#include "geoinv/agm.hpp"

namespace geoinv {

std::string grade_name(const Grade& g)
{
  std::string out;
  auto add = [&](const char* sym, int d) {
    if (d == 0) return;
    if (!out.empty()) out += " ";
    out += sym;
    if (d > 1) out += "^" + std::to_string(d);
  };
  add("mu", g.mu);
  add("nu", g.nu);
  add("sigma", g.sigma);
  add("torsion", g.tor);
  return out.empty() ? "1" : out;
}

}  // namespace geoinv

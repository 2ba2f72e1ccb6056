#include "pvcsp/rational.hpp"

namespace pvcsp {

Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw ParseError("empty rational literal", "");
  Rat r;
  // mpq parsing accepts "p" and "p/q" with arbitrary precision.
  if (r.set_str(s, 10) != 0)
    throw ParseError("malformed rational literal '" + s + "'", "");
  if (r.get_den() == 0)
    throw ParseError("zero denominator in rational literal '" + s + "'", "");
  r.canonicalize();
  return r;
}

std::string rat_to_string(const Rat& r) { return r.get_str(); }

Ext ext_from_string(const std::string& s) {
  if (s == "-inf") return Ext::neg_infinity();
  return Ext(rat_from_string(s));
}

std::string ext_to_string(const Ext& e) {
  if (!e.finite()) return "-inf";
  return rat_to_string(e.value());
}

}  // namespace pvcsp

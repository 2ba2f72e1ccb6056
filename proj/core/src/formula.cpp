#include "pvcsp/formula.hpp"

#include <algorithm>
#include <tuple>

#include "pvcsp/errors.hpp"

namespace pvcsp {

Rat PayoffFormula::weight() const {
  Rat w = 0;
  for (const auto& a : atoms) w += a.w;
  return w;
}

void PayoffFormula::validate() const {
  for (const auto& a : atoms) {
    if (a.w < 0) throw ConfigError("negative atom weight");
    if (a.symbol < 0 || a.symbol >= static_cast<int>(sig->symbols.size()))
      throw ConfigError("atom symbol out of range");
    const auto& sym = sig->symbols[a.symbol];
    if (a.args.size() != sym.arity.size())
      throw ConfigError("atom argument count mismatch for " + sym.id);
    for (std::size_t z = 0; z < a.args.size(); ++z) {
      if (a.args[z] < 0 || a.args[z] >= vars.size())
        throw ConfigError("atom argument out of range");
      if (vars.sort_of(a.args[z]) != sym.arity[z].sort)
        throw ConfigError("atom argument sort mismatch for " + sym.id);
    }
  }
}

Ext evaluate_formula(const PayoffFormula& phi, const ValuedStructure& str,
                     const Tuple& assignment) {
  Rat total = 0;
  Tuple t;
  for (const auto& a : phi.atoms) {
    t.clear();
    t.reserve(a.args.size());
    for (int v : a.args) t.push_back(assignment[v]);
    Ext val = str.value(a.symbol, t);
    if (!val.finite()) return Ext::neg_infinity();
    total += a.w * val.value();
  }
  return Ext(total);
}

PayoffFormula normalize_formula(const PayoffFormula& phi) {
  Rat w = phi.weight();
  if (w == 0) throw ConfigError("cannot normalize a zero-weight formula");
  PayoffFormula out = phi;
  for (auto& a : out.atoms) a.w /= w;
  return out;
}

PayoffFormula merge_atoms(const PayoffFormula& phi) {
  PayoffFormula out{phi.sig, phi.vars, phi.atoms};
  std::sort(out.atoms.begin(), out.atoms.end(),
            [](const Atom& a, const Atom& b) {
              return std::tie(a.symbol, a.args) < std::tie(b.symbol, b.args);
            });
  std::vector<Atom> merged;
  for (auto& a : out.atoms) {
    if (!merged.empty() && merged.back().symbol == a.symbol &&
        merged.back().args == a.args) {
      merged.back().w += a.w;
    } else {
      merged.push_back(std::move(a));
    }
  }
  out.atoms = std::move(merged);
  return out;
}

TupleSpace assignment_space(const PayoffFormula& phi,
                            const ValuedStructure& str) {
  std::vector<int> sorts;
  sorts.reserve(phi.vars.size());
  for (int v = 0; v < phi.vars.size(); ++v) sorts.push_back(phi.vars.sort_of(v));
  return TupleSpace(str.dom(), sorts);
}

MaxResult brute_force_max(const PayoffFormula& phi, const ValuedStructure& str,
                          std::uint64_t max_assignments) {
  TupleSpace space = assignment_space(phi, str);
  if (static_cast<std::uint64_t>(space.total()) > max_assignments)
    throw ResourceLimitError("assignment space exceeds limit");
  MaxResult best{Ext::neg_infinity(), space.first()};
  Tuple t = space.first();
  for (std::int64_t r = 0; r < space.total(); ++r) {
    Ext v = evaluate_formula(phi, str, t);
    if (r == 0 || v > best.value) best = MaxResult{v, t};
    space.next(t);
  }
  return best;
}

}  // namespace pvcsp

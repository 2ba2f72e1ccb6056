#pragma once

#include <map>
#include <string>
#include <vector>

#include "pvcsp/function.hpp"

namespace pvcsp {

/// One arity level of a function minion: functions of a fixed arity, kept
/// sorted by table content so membership checks are binary searches.
struct Minion {
  int arity = 0;
  std::vector<NaryFunction> fns;

  int size() const { return static_cast<int>(fns.size()); }
  int index_of(const NaryFunction& f) const;
  bool contains(const NaryFunction& f) const { return index_of(f) >= 0; }
};

/// f^(pi) in the given space; pi maps f's coordinates into [0, new_arity).
NaryFunction function_minor(const FnSpace& fs, const NaryFunction& f,
                            const std::vector<int>& pi, int new_arity);

/// True iff f preserves feasibility: for every pair (phi, M) with feasible
/// columns over A, the tuple f(rows M) is feasible in B.
bool is_polymorphism(const NaryFunction& f, const ValuedStructure& a,
                     const ValuedStructure& b, const Limits& lim = {});

/// All arity-N feasibility polymorphisms, by backtracking over function
/// table cells with pruning against every fully-assigned relation-matrix
/// pair. Deterministic ascending table order.
Minion enumerate_polymorphisms(const ValuedStructure& a,
                               const ValuedStructure& b, int arity,
                               const Limits& lim = {});

/// A tabulated minion homomorphism: for each arity n <= k, a map from
/// source functions (from src_dom to src_cod) to target functions (from
/// tgt_dom to tgt_cod).
struct MinionHomTable {
  int k = 0;
  SortedSet src_dom, src_cod;
  SortedSet tgt_dom, tgt_cod;
  std::vector<std::map<NaryFunction, NaryFunction>> maps;  // maps[n-1]: arity n

  const NaryFunction& image(const NaryFunction& f) const;
  bool has(const NaryFunction& f) const;
};

/// Exhaustive minor-preservation check: for every tabulated f of arity n
/// and every pi: [n] -> [m] with m <= k, the table must contain f^(pi) and
/// map it to (image of f)^(pi). On failure, *why (if given) names the
/// violation.
bool verify_minion_hom_table(const MinionHomTable& table,
                             std::string* why = nullptr);

/// Streams every map pi: [n] -> [m] as a vector of images, in odometer
/// order (last coordinate fastest).
void for_each_map(int n, int m, const std::function<void(const std::vector<int>&)>& fn);

}  // namespace pvcsp

#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "pvcsp/canonical.hpp"
#include "pvcsp/weighting.hpp"

namespace pvcsp {

/// One minor condition "pi(u) = v": any assignment chi must satisfy
/// chi(v) = chi(u)^(pi). pi maps the coordinates of u's domain into the
/// coordinates of v's domain.
struct MinorCondition {
  int u = 0;            // index into MCInstance::u_names
  int v = 0;            // index into MCInstance::v_names
  std::vector<int> pi;  // size |D_u|, entries in [0, |D_v|)
};

/// A bipartite minor condition instance. Variables come in two disjoint
/// lists U and V; every variable carries a finite coordinate domain given
/// by a list of labels (the labels document the domain's origin, only the
/// sizes enter the semantics). All domain sizes are bounded by k.
struct MCInstance {
  int k = 0;
  std::vector<std::string> u_names;
  std::vector<std::string> v_names;
  std::vector<std::vector<std::string>> u_dom;  // labels, per U-variable
  std::vector<std::vector<std::string>> v_dom;  // labels, per V-variable
  std::vector<MinorCondition> conditions;

  int u_arity(int u) const { return static_cast<int>(u_dom[u].size()); }
  int v_arity(int v) const { return static_cast<int>(v_dom[v].size()); }

  /// Checks name uniqueness/disjointness, domain sizes in [1, k], and
  /// condition well-formedness.
  void validate() const;
};

/// A total map from N-ary functions to rationals, stored sparsely: explicit
/// entries (sorted by function, unique) plus a default for everything else.
struct BetaTable {
  std::vector<std::pair<NaryFunction, Rat>> entries;
  Rat default_value = 0;

  const Rat& of(const NaryFunction& f) const;
  void validate() const;
};

/// Certificate recording how a valued minor condition instance was produced
/// from a payoff formula: per U-variable the producing atom's weight and
/// symbol, plus the template thresholds. From these the strengthened
/// promise (each beta dominates kappa times its alpha on every
/// kappa-polymorphism weighting, pointwise per variable) is re-derivable.
struct StarStarCert {
  std::vector<Rat> weights;
  std::vector<int> symbols;
  Rat c = 0;
  Rat s = 0;
};

/// A valued minor condition instance: a minor condition instance plus, per
/// U-variable, an input payoff table over its coordinates and an output
/// payoff table over functions of its arity. The constant-factor variant
/// additionally records the input completeness threshold.
struct VMCInstance {
  MCInstance mc;
  std::vector<std::vector<Rat>> alpha;  // [u][coordinate]
  std::vector<BetaTable> beta;          // [u]
  std::optional<Rat> cf_completeness;
  std::optional<StarStarCert> cert;

  const Rat& beta_of(int u, const NaryFunction& f) const {
    return beta[u].of(f);
  }
  void validate() const;
};

/// Instance-level reduction from a promise problem over a crisp template
/// pair to a minor condition instance: one U-variable per atom (domain =
/// the relation's feasible tuples), one V-variable per formula variable
/// (domain = its sort's elements), and one condition per atom coordinate
/// wired through the restricted projection. k defaults to the largest
/// domain used; a supplied k smaller than that is a configuration error.
MCInstance pcsp_to_mc(const PayoffFormula& phi, const ValuedTemplate& tmpl,
                      std::optional<int> k = {}, const Limits& lim = {});

/// Instance-level reduction from a minor condition instance back to a
/// formula over a crisp template pair: a disjoint union of per-variable
/// canonical formulas whose variables are identified along the minor
/// conditions.
PayoffFormula mc_to_pcsp(const MCInstance& inst, const ValuedTemplate& tmpl,
                         const Limits& lim = {});

/// Valued analogue of pcsp_to_mc. For a standard template the payoff
/// tables are the atom-weighted threshold-shifted relation values; the
/// result carries a certificate of the strengthened promise. For a
/// constant-factor template the tables are unshifted and the instance
/// records the supplied input completeness (required in that mode,
/// rejected otherwise).
VMCInstance pcsp_to_vmc(const PayoffFormula& phi, const ValuedTemplate& tmpl,
                        const std::optional<Rat>& cf_completeness = {},
                        std::optional<int> k = {}, const Limits& lim = {});

/// Recomputes every alpha/beta entry from the certificate's recorded
/// weights, symbols, and thresholds and compares against the stored
/// tables. False (with *why) on any mismatch; ConfigError when the
/// instance carries no certificate.
bool verify_vmc_certificate(const VMCInstance& inst,
                            const ValuedTemplate& tmpl, const Limits& lim = {},
                            std::string* why = nullptr);

/// Memoization workspace for vmc_to_pcsp: canonical syntheses are cached
/// keyed by the family data (arities, alpha tables, dense beta tables).
/// A workspace is only valid for one (template, limits) combination; the
/// caller is responsible for not mixing them.
struct ReductionWorkspace {
  using Key = std::vector<std::tuple<int, std::vector<Rat>, std::vector<Rat>>>;
  std::map<Key, CanonicalResult> improved_cache;
  std::map<Key, CanonicalResult> cf_cache;
};

struct VmcToPcspResult {
  PayoffFormula psi;
  /// Output completeness threshold of the constant-factor variant.
  std::optional<Rat> cf_completeness;
  bool used_fallback = false;
};

/// Instance-level reduction from a valued minor condition instance to a
/// payoff formula. Standard templates: one joint canonical synthesis over
/// all U-variables; on success the per-variable formulas are glued (zero
/// weight blocks for V-variables, variables identified along the
/// conditions); when the synthesis returns a dual witness instead, the
/// caller-supplied fallback is brute-force verified to be a no-instance
/// and returned. Constant-factor templates: per-variable constant-factor
/// syntheses, same gluing, output completeness = input completeness plus
/// the sum of the synthesis shifts.
VmcToPcspResult vmc_to_pcsp(
    const VMCInstance& inst, const ValuedTemplate& tmpl,
    const std::optional<PayoffFormula>& fallback_no_instance = {},
    const std::optional<Rat>& fallback_completeness = {},
    ReductionWorkspace* ws = nullptr, const Limits& lim = {});

/// A valued minion homomorphism given as a finite distribution over
/// tabulated minion homomorphisms. Probabilities are positive and sum
/// to 1; all tables must agree on their key sets per arity.
struct ValuedMinionHom {
  std::vector<std::pair<MinionHomTable, Rat>> tables;

  void validate() const;
};

/// Sentinel override for between_vmcs; by default the off-support value is
/// -(max(C,0)*|U|+1) with C the largest output payoff of the input
/// instance, which forces any assignment using an off-support function to
/// fall below every soundness threshold in use.
struct SentinelPolicy {
  std::optional<Rat> override_value;
};

/// Instance-level reduction between valued minor condition instances along
/// a valued minion homomorphism: beta_u(f) becomes the expected
/// beta'_u(xi(f)) over the distribution for every tabulated f of the right
/// arity, off-support functions get the sentinel, alpha and the conditions
/// are unchanged, and the certificate (tied to the old tables) is dropped.
VMCInstance between_vmcs(const VMCInstance& inst, const ValuedMinionHom& hom,
                         const SentinelPolicy& policy = {});

/// The trivial reduction between minor condition instances.
MCInstance between_mcs(const MCInstance& inst);

/// A gadget for one symbol: a body formula whose designated coordinate
/// variables receive the substituted atom's arguments. Body variables
/// listed as shared keep one global copy per name across all substituted
/// atoms; every other non-coordinate body variable is instantiated fresh
/// per atom.
struct Gadget {
  PayoffFormula body;
  std::vector<int> coord_vars;   // body variable per substituted coordinate
  std::vector<int> shared_vars;  // body variables kept global
};

/// Replaces every atom of phi by the gadget registered for its symbol
/// (every symbol that occurs must have one), wiring coordinates through
/// the atom's arguments and multiplying weights through. The result is a
/// formula over the gadget bodies' signature.
PayoffFormula gadget_substitute(const PayoffFormula& phi,
                                const std::map<int, Gadget>& gadgets);

/// One row of a lifted relation matrix: either a copy of a source-matrix
/// row or a constant row of a fixed element.
struct LiftRow {
  bool is_const = false;
  int src_row = 0;     // when !is_const: row index of the source matrix
  int const_elem = 0;  // when is_const: global element of the target domain
};

/// Per-symbol lift description taking relation-matrix pairs of the source
/// template to pairs of the target template.
struct MatrixLift {
  std::vector<int> symbol_map;             // source symbol -> target symbol
  std::vector<std::vector<LiftRow>> rows;  // per source symbol
};

/// Checks the pointwise payoff identity behind a gadget reduction: on the
/// first structures, every source tuple and its lift carry equal values;
/// on the second structures, for every arity n <= k, every tabulated
/// function f of the homomorphism, and every source relation-matrix pair
/// (phi', M'), the value of phi' at xi(f) applied to M' equals the value
/// of the lifted symbol at f applied to the lifted matrix. On failure,
/// *why (if given) describes the first violation.
bool verify_gadget_hom(const MinionHomTable& xi, const ValuedTemplate& src,
                       const ValuedTemplate& tgt, const MatrixLift& lift,
                       int k, const Limits& lim = {},
                       std::string* why = nullptr);

/// The two interpretation tables of a relation to be defined over an
/// existing template's domains, rank-ordered over the coordinate sorts.
struct PPTarget {
  std::vector<int> coord_sorts;
  std::vector<Ext> table_a;
  std::vector<Ext> table_b;
};

/// A primitive-positive style definition: a payoff formula over the source
/// signature plus a map from target coordinates into its variables.
struct PPDefinition {
  PayoffFormula formula;
  std::vector<int> iota;  // target coordinate -> formula variable
};

enum class PPMode { Crisp, Valued };

/// Brute-force verification of a definition. Crisp mode checks the two
/// feasibility containments (every feasible target tuple extends to a
/// feasible assignment on the first side; every feasible assignment
/// projects into the target on the second side). Valued mode checks the
/// two max-threshold inequalities relating the target's values (shifted by
/// c', s') to the fiber maxima of the formula payoff (shifted by c, s
/// times the formula weight).
bool verify_pp_definition(const PPDefinition& defn, const PPTarget& target,
                          const ValuedTemplate& tmpl, PPMode mode,
                          const Rat& c_prime = 0, const Rat& s_prime = 0,
                          const Limits& lim = {}, std::string* why = nullptr);

/// Attempts to construct a definition of the target from the template: the
/// canonical formula over the target's first-side feasible set, with the
/// coordinate map sending coordinate z to the canonical variable of the
/// z-th row of the feasible-tuple matrix. Crisp mode uses the plain
/// canonical formula; valued mode synthesizes against the changed
/// thresholds and returns absent when the synthesis certifies
/// non-definability. Every returned definition has been verified.
std::optional<PPDefinition> synthesize_pp_definition(
    const PPTarget& target, const ValuedTemplate& tmpl, PPMode mode,
    const Rat& c_prime = 0, const Rat& s_prime = 0, const Limits& lim = {});

}  // namespace pvcsp

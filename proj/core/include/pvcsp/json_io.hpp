#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <vector>

#include "pvcsp/fourier.hpp"
#include "pvcsp/reduction.hpp"

namespace pvcsp {

/// All file I/O is JSON. Rationals serialize as "p/q" strings (never
/// floats), extended values additionally as "-inf". Parsers validate every
/// loaded invariant and throw ParseError carrying a JSON pointer to the
/// offending location.
using Json = nlohmann::json;

// Rationals and extended rationals.
Json rat_to_json(const Rat& r);
Rat rat_from_json(const Json& j, const std::string& where = "");
Json ext_to_json(const Ext& e);
Ext ext_from_json(const Json& j, const std::string& where = "");

// Valued structures: {sorts, symbols:[{id, arity:[{name, sort}]}],
// domain:[{id, sort}], tables:{symbol: [[ [element ids], value ], ...]}}.
// Tables must list every tuple exactly once; emission is in rank order.
Json structure_to_json(const ValuedStructure& a);
ValuedStructure structure_from_json(const Json& j, const std::string& where = "");

// Templates: {kind: "standard"|"constant-factor", c, s | kappa, A, B}.
Json template_to_json(const ValuedTemplate& t);
ValuedTemplate template_from_json(const Json& j, const std::string& where = "");

// Payoff formulas: {vars:[{id, sort}], constraints:[{w, sym, args:[ids]}]}.
Json formula_to_json(const PayoffFormula& phi);
PayoffFormula formula_from_json(const Json& j, const ValuedTemplate& tmpl,
                                const std::string& where = "");

// N-ary functions between two sorted sets: {arity, tables:{sort: [codomain
// element ids in row-rank order]}}.
Json function_to_json(const NaryFunction& f, const SortedSet& dom,
                      const SortedSet& cod);
NaryFunction function_from_json(const Json& j, const SortedSet& dom,
                                const SortedSet& cod,
                                const std::string& where = "");

// Weightings: {arity, in:{coordinate: "p/q"}, out:[{fn, w}]}; families are
// plain arrays of weightings. Loading re-checks every invariant, including
// that support functions are feasibility polymorphisms.
Json weighting_to_json(const Weighting& w, const ValuedTemplate& tmpl);
Weighting weighting_from_json(const Json& j, const ValuedTemplate& tmpl,
                              const std::string& where = "",
                              const Limits& lim = {});
Json weightings_to_json(const std::vector<Weighting>& ws,
                        const ValuedTemplate& tmpl);
std::vector<Weighting> weightings_from_json(const Json& j,
                                            const ValuedTemplate& tmpl,
                                            const std::string& where = "",
                                            const Limits& lim = {});

// Distributions over integer keys: {key: "p/q"}.
Json distribution_to_json(const Distribution& d);

// LP systems: {cols:[labels], rows:[{label, rhs, coef:{col: "p/q"}}]}.
Json lp_to_json(const LPSystem& sys);
LPSystem lp_from_json(const Json& j, const std::string& where = "");
Json lp_result_to_json(const LPResult& res, const LPSystem& sys);

// Canonical requests and results.
std::vector<CanonicalFamily> families_from_json(const Json& j,
                                                const std::string& where = "");
Json canonical_result_to_json(const CanonicalResult& res,
                              const ValuedTemplate& tmpl, bool dump_lp);
Json check_result_to_json(const CheckTemplateResult& res,
                          const ValuedTemplate& tmpl, bool dump_lp);

// Minor condition instances.
Json mc_to_json(const MCInstance& inst);
MCInstance mc_from_json(const Json& j, const std::string& where = "");
Json vmc_to_json(const VMCInstance& inst, const ValuedTemplate& tmpl);
VMCInstance vmc_from_json(const Json& j, const ValuedTemplate& tmpl,
                          const std::string& where = "");

// Gadget files: {gadgets:{source symbol: {body, coords:[ids], shared:[ids]}}}
// with bodies over the target template's signature.
std::map<int, Gadget> gadgets_from_json(const Json& j,
                                        const ValuedTemplate& src,
                                        const ValuedTemplate& tgt,
                                        const std::string& where = "");

// Matrix lifts: {symbol_map:{src: tgt}, rows:{src: [{row: i}|{const: id}]}}.
MatrixLift lift_from_json(const Json& j, const ValuedTemplate& src,
                          const ValuedTemplate& tgt,
                          const std::string& where = "");

// Tabulated minion homomorphisms: {k, maps:[[{src, dst}, ...] per arity]}.
Json hom_table_to_json(const MinionHomTable& t);
MinionHomTable hom_table_from_json(const Json& j, const SortedSet& src_dom,
                                   const SortedSet& src_cod,
                                   const SortedSet& tgt_dom,
                                   const SortedSet& tgt_cod,
                                   const std::string& where = "");

// Valued minion homomorphisms: {tables:[{table, w}]}.
ValuedMinionHom valued_hom_from_json(const Json& j, const SortedSet& src_dom,
                                     const SortedSet& src_cod,
                                     const SortedSet& tgt_dom,
                                     const SortedSet& tgt_cod,
                                     const std::string& where = "");

// pp-definition targets and definitions.
PPTarget pp_target_from_json(const Json& j, const ValuedTemplate& tmpl,
                             const std::string& where = "");
Json pp_definition_to_json(const PPDefinition& d);
PPDefinition pp_definition_from_json(const Json& j, const ValuedTemplate& tmpl,
                                     const std::string& where = "");

// Fourier reports and inputs.
Json glc_report_to_json(const GlcReport& r);
Json fourier_expansion_to_json(const FourierExpansion& ex);
/// A PmFunction parses from a plain array of +1/-1 values in rank order
/// (length a power of two).
PmFunction pm_from_json(const Json& j, const std::string& where = "");

}  // namespace pvcsp

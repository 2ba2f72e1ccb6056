#pragma once

#include <map>
#include <string>
#include <vector>

#include "pvcsp/structure.hpp"

namespace pvcsp {

/// Parameters for a built-in template, keyed by name. Integer parameters
/// (sizes, arities) and rational parameters (thresholds, slopes) are kept
/// separately; constructors reject unknown keys and missing required ones.
struct ZooParams {
  std::map<std::string, int> ints;
  std::map<std::string, Rat> rats;
};

/// Names of all built-in templates, in canonical (alphabetical) order:
///   3lin2           c?, s?          {0,1}-valued ternary parity pair
///   3lin2-crisp                     {-inf,0}-valued ternary parity pair
///   3lin2-pm        delta           rescaled parity pair on {1,-1}
///   clique          k               k-clique, crisp disequality
///   coloring        a, b, c?, s?    K_a vs K_b, payoff 1 on edges
///   glc             d, e, c?, s?    label cover, payoff 1 on satisfied pairs
///   independent-set c               unary size payoff + edge exclusion
///   klin2           k, c?, s?       {0,1}-valued k-ary parity pair
///   label-cover     d, e            crisp two-sorted map constraints
///   unique-games    d, c?, s?       bijective maps only, |D| = |E| = d
///   vertex-cover    c               negated size payoff + covering edges
std::vector<std::string> zoo_names();

/// Constructs a built-in template by name. Throws ConfigError on unknown
/// names, unknown or missing parameters, and out-of-range values.
ValuedTemplate builtin_template(const std::string& name,
                                const ZooParams& params = {});

}  // namespace pvcsp

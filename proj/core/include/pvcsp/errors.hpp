#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pvcsp {

/// Violation of an operation's contract (bad arguments, broken invariants,
/// corrupted data). These indicate caller bugs, not user input problems.
struct ContractError : std::logic_error {
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

/// A configured size guard would be exceeded. The message always names the
/// offending object and the computed blow-up figure.
struct ResourceLimitError : std::runtime_error {
  explicit ResourceLimitError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Bad user-supplied configuration (e.g. a domain bound k that is too small,
/// a missing fallback instance, parameters out of documented range).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A stated precondition of an operation does not hold for the given input
/// (e.g. the side condition of a canonical-formula synthesis request).
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Schema or invariant violation while reading a file. `where` is a JSON
/// pointer to the offending location.
struct ParseError : std::runtime_error {
  std::string where;
  ParseError(const std::string& what, std::string where_)
      : std::runtime_error(where_.empty() ? what : what + " (at " + where_ + ")"),
        where(std::move(where_)) {}
};

/// Size guards shared by all enumerating/solving operations. Defaults are
/// desk-scale; every overrun fails loudly with the computed figure.
struct Limits {
  std::uint64_t max_minion_size = 1u << 16;  // candidate function-space bound
  std::uint64_t max_mat_pairs = 1u << 14;    // relation-matrix pair count
  std::uint64_t max_lp_rows = 1u << 12;      // LP row count
  std::uint64_t max_assignments = 1u << 22;  // brute-force assignment sweeps
  int fourier_arity = 6;                     // Fourier expansion bound
  int jobs = 1;                              // worker threads for sweeps
};

}  // namespace pvcsp

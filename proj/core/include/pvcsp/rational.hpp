#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>

#include "pvcsp/errors.hpp"

namespace pvcsp {

/// Exact rational arithmetic. All numeric work in the library is done on
/// `Rat`; no operation ever rounds.
using Rat = mpq_class;
using Int = mpz_class;

/// Parses "p/q" or "p" (arbitrary precision, optional sign). The result is
/// canonicalized: lowest terms, positive denominator.
Rat rat_from_string(const std::string& s);

/// Renders canonically: "p" when the denominator is 1, else "p/q".
std::string rat_to_string(const Rat& r);

/// A rational extended with the distinguished value NegInfinity, which
/// compares below every rational. Multiplication by zero is undefined for
/// NegInfinity except inside formula evaluation, which implements the
/// convention itself; `scaled` therefore rejects that case.
class Ext {
 public:
  Ext() : finite_(true), v_(0) {}
  explicit Ext(Rat v) : finite_(true), v_(std::move(v)) {}

  static Ext neg_infinity() {
    Ext e;
    e.finite_ = false;
    e.v_ = 0;
    return e;
  }

  bool finite() const { return finite_; }

  const Rat& value() const {
    if (!finite_) throw ContractError("Ext::value called on NegInfinity");
    return v_;
  }

  friend Ext operator+(const Ext& a, const Ext& b) {
    if (!a.finite_ || !b.finite_) return neg_infinity();
    return Ext(a.v_ + b.v_);
  }

  /// w * this for w >= 0. Rejects 0 * NegInfinity.
  Ext scaled(const Rat& w) const {
    if (!finite_) {
      if (w == 0)
        throw ContractError("0 * NegInfinity is undefined outside formula evaluation");
      return neg_infinity();
    }
    return Ext(w * v_);
  }

  friend bool operator==(const Ext& a, const Ext& b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.v_ == b.v_;
  }
  friend bool operator!=(const Ext& a, const Ext& b) { return !(a == b); }
  friend bool operator<(const Ext& a, const Ext& b) {
    if (!a.finite_) return b.finite_;
    if (!b.finite_) return false;
    return a.v_ < b.v_;
  }
  friend bool operator<=(const Ext& a, const Ext& b) { return a < b || a == b; }
  friend bool operator>(const Ext& a, const Ext& b) { return b < a; }
  friend bool operator>=(const Ext& a, const Ext& b) { return b <= a; }

  /// Comparison against a plain rational threshold.
  friend bool operator>=(const Ext& a, const Rat& r) {
    return a.finite_ && a.v_ >= r;
  }
  friend bool operator<(const Ext& a, const Rat& r) { return !(a >= r); }

 private:
  bool finite_;
  Rat v_;
};

/// Parses "p/q", "p", or "-inf".
Ext ext_from_string(const std::string& s);

/// Renders "p/q", "p", or "-inf".
std::string ext_to_string(const Ext& e);

}  // namespace pvcsp

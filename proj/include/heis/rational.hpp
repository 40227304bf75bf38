#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heis/errors.hpp"
#include "heis/polynomial.hpp"
#include "heis/varset.hpp"

namespace heis {

inline constexpr double kDefaultPoleThreshold = 1e-12;

/// Normalized quotient num/den of polynomials over a shared VarSet.
///
/// Invariants: den != 0, gcd(num, den) = 1 and the leading coefficient of den
/// is 1, so two equal rational functions have identical representations.
/// A RationalFn without a VarSet is a context-free constant; it adopts the
/// VarSet of whatever it is combined with.
class RationalFn {
 public:
  RationalFn() : den_(1) {}
  RationalFn(Scalar c) : num_(std::move(c)), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFn(long c) : RationalFn(Scalar(c)) {}          // NOLINT(google-explicit-constructor)
  RationalFn(VarSetPtr vars, Polynomial num, Polynomial den = Polynomial(1));

  static RationalFn var(VarSetPtr vars, int index);
  static RationalFn var(VarSetPtr vars, std::string_view name);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  const VarSetPtr& vars() const { return vars_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_one(); }
  bool is_real() const { return num_.is_real() && den_.is_real(); }
  Scalar constant_value() const;

  RationalFn operator-() const;
  friend RationalFn operator+(const RationalFn& a, const RationalFn& b);
  friend RationalFn operator-(const RationalFn& a, const RationalFn& b);
  friend RationalFn operator*(const RationalFn& a, const RationalFn& b);
  friend RationalFn operator/(const RationalFn& a, const RationalFn& b);
  RationalFn& operator+=(const RationalFn& o) { return *this = *this + o; }
  RationalFn& operator-=(const RationalFn& o) { return *this = *this - o; }
  RationalFn& operator*=(const RationalFn& o) { return *this = *this * o; }
  RationalFn& operator/=(const RationalFn& o) { return *this = *this / o; }
  RationalFn inverse() const;
  RationalFn pow(int exponent) const;
  RationalFn conj() const;

  /// Exact partial derivative; formal parameters differentiate to zero.
  RationalFn partial(int var) const;
  RationalFn partial(std::string_view name) const;

  /// Simultaneous substitution var -> value.
  RationalFn substitute(const std::map<int, RationalFn>& assignment) const;

  /// `point` holds one value per VarSet variable (coordinates then parameters).
  std::complex<double> eval(std::span<const std::complex<double>> point,
                            double pole_threshold = kDefaultPoleThreshold) const;
  std::complex<double> eval(std::span<const double> point, double pole_threshold = kDefaultPoleThreshold) const;
  Scalar eval_exact(std::span<const Scalar> point) const;

  struct CheckedValue {
    std::complex<double> value;
    Scalar exact;
    double abs_error;  // |value - exact| of the floating evaluation
  };
  /// Floating evaluation at a rational point together with its deviation from exact arithmetic.
  CheckedValue eval_checked(std::span<const Scalar> point, double pole_threshold = kDefaultPoleThreshold) const;

  /// Canonical text in the expression grammar; parses back to an equal value.
  std::string to_string() const;

  friend bool operator==(const RationalFn& a, const RationalFn& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const RationalFn& a, const RationalFn& b) { return !(a == b); }

  /// Equality through num_a*den_b == num_b*den_a.
  static bool equal_by_cross_multiplication(const RationalFn& a, const RationalFn& b);

 private:
  struct Raw {};
  RationalFn(Raw, VarSetPtr vars, Polynomial num, Polynomial den)
      : vars_(std::move(vars)), num_(std::move(num)), den_(std::move(den)) {}
  static RationalFn normalized(VarSetPtr vars, Polynomial num, Polynomial den);
  void check_index(int var) const;

  VarSetPtr vars_;
  Polynomial num_;
  Polynomial den_;
};

/// VarSet shared by a and b; throws DimensionMismatch when both are set and differ.
VarSetPtr common_vars(const VarSetPtr& a, const VarSetPtr& b);

std::string to_string(const Polynomial& p, const VarSet* vars);

/// Double-precision compiled form for repeated numeric evaluation.
class NumericRational {
 public:
  NumericRational() = default;
  explicit NumericRational(const RationalFn& f);
  std::complex<double> operator()(std::span<const double> point, double pole_threshold = kDefaultPoleThreshold) const;
  double real(std::span<const double> point, double pole_threshold = kDefaultPoleThreshold) const {
    return (*this)(point, pole_threshold).real();
  }
  /// Magnitude of the denominator at `point`.
  double denominator_magnitude(std::span<const double> point) const;

 private:
  struct Term {
    std::complex<double> coef;
    std::vector<std::pair<int, unsigned>> powers;
  };
  static std::vector<Term> compile(const Polynomial& p);
  static std::complex<double> run(const std::vector<Term>& terms, std::span<const double> point);
  std::vector<Term> num_;
  std::vector<Term> den_;
};

}  // namespace heis

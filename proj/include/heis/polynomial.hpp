#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "heis/scalar.hpp"

namespace heis {

/// Maximum number of ring variables (coordinates plus formal parameters).
inline constexpr int kMaxVars = 16;

/// Exponent vector over the ring variables, ordered lexicographically with
/// variable 0 most significant.
class Monomial {
 public:
  Monomial() { exps_.fill(0); }
  static Monomial var(int index, unsigned power = 1);

  unsigned operator[](int index) const { return exps_[static_cast<std::size_t>(index)]; }
  void set(int index, unsigned power);
  unsigned degree() const;
  bool is_one() const;

  bool divides(const Monomial& other) const;
  Monomial operator*(const Monomial& o) const;
  /// Requires divides(o).
  Monomial operator/(const Monomial& o) const;
  Monomial min(const Monomial& o) const;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::array<std::uint16_t, kMaxVars> exps_;
};

/// Sparse multivariate polynomial with Gaussian-rational coefficients.
/// Terms are kept sorted by descending monomial with no zero coefficients, so
/// structural equality is polynomial equality.
class Polynomial {
 public:
  struct Term {
    Monomial mono;
    Scalar coef;
    friend bool operator==(const Term&, const Term&) = default;
  };

  Polynomial() = default;
  Polynomial(Scalar c);  // NOLINT(google-explicit-constructor)
  Polynomial(long c) : Polynomial(Scalar(c)) {}  // NOLINT(google-explicit-constructor)
  static Polynomial var(int index);
  static Polynomial monomial(const Monomial& m, Scalar c);
  /// Sorts and merges arbitrary term lists.
  static Polynomial from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  bool is_one() const { return is_constant() && !is_zero() && terms_[0].coef.is_one(); }
  Scalar constant_value() const;  // requires is_constant()
  const Term& leading() const { return terms_.front(); }
  unsigned degree(int var) const;
  unsigned lowest_degree(int var) const;
  unsigned total_degree() const;
  bool involves(int var) const { return degree(var) != 0; }
  bool is_real() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial scaled(const Scalar& c) const;
  Polynomial shifted(const Monomial& m) const;
  Polynomial conj() const;
  Polynomial pow(unsigned exponent) const;

  Polynomial partial(int var) const;

  /// Quotient when `divisor` divides this exactly, otherwise nullopt.
  std::optional<Polynomial> divide_exact(const Polynomial& divisor) const;
  /// Scales so the leading coefficient is 1 (zero stays zero).
  Polynomial monic() const;

  /// Coefficients as a polynomial in `var`: result[d] is free of `var`.
  std::vector<Polynomial> coefficients_in(int var) const;
  static Polynomial from_coefficients(const std::vector<Polynomial>& coeffs, int var);

  Scalar eval(std::span<const Scalar> point) const;
  std::complex<double> eval(std::span<const std::complex<double>> point) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<Term> terms_;
};

/// Monic greatest common divisor (zero only when both inputs are zero).
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
Polynomial content_in(const Polynomial& p, int var);

}  // namespace heis

#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "heis/rational.hpp"

namespace heis {

/// Linear differential operator sum_alpha a_alpha(p) d^alpha in canonical form:
/// coefficients on the left, derivatives on the right, no zero coefficients.
/// The multi-index alpha ranges over the coordinates x, y, t only; formal
/// parameters are constants. Equality of canonical forms is operator equality.
class DiffOp {
 public:
  using Index = Monomial;
  using TermMap = std::map<Index, RationalFn, std::greater<>>;

  DiffOp() = default;
  explicit DiffOp(VarSetPtr vars) : vars_(std::move(vars)) {}
  /// Multiplication by f (order zero).
  static DiffOp multiplication(const RationalFn& f);
  /// d/d(coordinate) for a coordinate index of `vars`.
  static DiffOp derivative(const VarSetPtr& vars, int coord);

  const TermMap& terms() const { return terms_; }
  const VarSetPtr& vars() const { return vars_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned order() const;
  /// Coefficient of d^alpha (zero when absent).
  RationalFn coefficient(const Index& alpha) const;

  DiffOp operator-() const;
  friend DiffOp operator+(const DiffOp& a, const DiffOp& b);
  friend DiffOp operator-(const DiffOp& a, const DiffOp& b);
  /// Left multiplication of every coefficient by f.
  friend DiffOp operator*(const RationalFn& f, const DiffOp& a);
  /// Operator composition a o b.
  friend DiffOp operator*(const DiffOp& a, const DiffOp& b);
  DiffOp& operator+=(const DiffOp& o) { return *this = *this + o; }
  DiffOp& operator-=(const DiffOp& o) { return *this = *this - o; }

  RationalFn apply(const RationalFn& f) const;
  /// Complex conjugate operator: conj(A) f = conj(A conj(f)).
  DiffOp conj() const;
  DiffOp pow(unsigned k) const;

  std::string to_string() const;

  friend bool operator==(const DiffOp& a, const DiffOp& b) { return a.terms_ == b.terms_; }

 private:
  void add_term(const Index& alpha, const RationalFn& coef);

  VarSetPtr vars_;
  TermMap terms_;
};

DiffOp compose(const DiffOp& a, const DiffOp& b);
DiffOp commutator(const DiffOp& a, const DiffOp& b);
inline bool op_equal(const DiffOp& a, const DiffOp& b) { return a == b; }
inline RationalFn apply(const DiffOp& a, const RationalFn& f) { return a.apply(f); }

/// Applies the derivative multi-index alpha to f.
RationalFn differentiate(const RationalFn& f, const DiffOp::Index& alpha, int coord_count);

enum class Builtin { X, Y, T, Xtilde, Ytilde, Z, Zbar, Delta0, L };

/// Named operators of H^n:
///   X_j = d_xj + 2 y_j d_t,  Y_j = d_yj - 2 x_j d_t,  T = d_t,
///   Xtilde_j = X_j - 4 y_j T, Ytilde_j = Y_j + 4 x_j T (right-invariant mirrors),
///   Z_j = (X_j - i Y_j)/2, Zbar_j = (X_j + i Y_j)/2,
///   Delta0 = sum_j X_j^2 + Y_j^2,  L(c) = -Delta0/4 + c T.
/// `j` is 1-based and ignored for T, Delta0 and L. Throws std::out_of_range on a bad index.
DiffOp builtin(Builtin name, int j, const VarSetPtr& vars, const RationalFn& c = RationalFn(0));

DiffOp op_X(const VarSetPtr& vars, int j);
DiffOp op_Y(const VarSetPtr& vars, int j);
DiffOp op_T(const VarSetPtr& vars);
DiffOp op_Xtilde(const VarSetPtr& vars, int j);
DiffOp op_Ytilde(const VarSetPtr& vars, int j);
DiffOp op_Z(const VarSetPtr& vars, int j);
DiffOp op_Zbar(const VarSetPtr& vars, int j);
DiffOp op_Delta0(const VarSetPtr& vars);
DiffOp op_L(const VarSetPtr& vars, const RationalFn& c);
/// Horizontal frame field k in 1..2n: X_k for k <= n, Y_{k-n} otherwise.
DiffOp op_horizontal(const VarSetPtr& vars, int k);
/// Right-invariant mirror of horizontal field k in 1..2n.
DiffOp op_horizontal_mirror(const VarSetPtr& vars, int k);

/// Parses operator expressions: X1, Y1, T, Z1, Zbar1, Xt1, Yt1, Delta0, L(expr),
/// composition `*`, brackets [A,B], sums and scalar coefficients from the
/// expression grammar. Scalar factors act as multiplication operators.
DiffOp parse_operator(std::string_view text, const VarSetPtr& vars);

/// Operator names reserved by parse_operator (excluded from parameter discovery).
const std::vector<std::string>& operator_names(int n);

}  // namespace heis

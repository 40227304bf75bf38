#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "heis/group.hpp"
#include "heis/rational.hpp"
#include "heis/report.hpp"

namespace heis {

/// Map F = (f_1, ..., f_{2n+1}) of H^n given by real rational components,
/// optionally with its closed-form inverse.
class ContactMap {
 public:
  ContactMap(std::string name, VarSetPtr vars, std::vector<RationalFn> components, std::string excluded = {});

  const std::string& name() const { return name_; }
  const VarSetPtr& vars() const { return vars_; }
  int n() const { return vars_->n(); }
  const std::vector<RationalFn>& components() const { return f_; }
  /// 1-based component index m in 1..2n+1.
  const RationalFn& f(int m) const { return f_.at(static_cast<std::size_t>(m - 1)); }
  /// Human-readable description of where the map is undefined.
  const std::string& excluded() const { return excluded_; }

  bool has_inverse() const { return inverse_ != nullptr; }
  const ContactMap& inverse() const;
  void set_inverse(const ContactMap& g);

  /// h o F.
  RationalFn pull(const RationalFn& h) const;
  /// Numeric image of a point; parameters take the values in `params`.
  std::vector<double> eval(std::span<const double> coords, std::span<const double> params = {}) const;

 private:
  std::string name_;
  VarSetPtr vars_;
  std::vector<RationalFn> f_;
  std::string excluded_;
  std::shared_ptr<const ContactMap> inverse_;
};

/// Square matrix of rational functions, 0-based storage.
using RationalMatrix = std::vector<std::vector<RationalFn>>;

/// Exact determinant by fraction-free elimination over a common denominator.
RationalFn determinant(const RationalMatrix& m);
/// Unreduced determinant num/den, skipping the final gcd.
std::pair<Polynomial, Polynomial> determinant_parts(const RationalMatrix& m);
/// det(m) - f, short-circuiting to zero by cross-multiplication.
RationalFn determinant_minus(const RationalMatrix& m, const RationalFn& f);

/// Matrix of the horizontal differential in the left-invariant frames.
struct HorizontalMatrix {
  int n = 0;
  RationalMatrix entries;  // entries[m-1][k-1] = X_k f_m
  const RationalFn& operator()(int m, int k) const {
    return entries[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(k - 1)];
  }
  RationalFn determinant() const { return heis::determinant(entries); }
};

/// Thrown when the two computations of lambda_F disagree.
struct NotContact : std::domain_error {
  using std::domain_error::domain_error;
};

/// lambda_F = T f_{2n+1} + 2 sum_j (f_j T f_{n+j} - f_{n+j} T f_j), cross-checked
/// against the dx and dy coefficients of the pullback of the contact form.
RationalFn lambda(const ContactMap& F);

Report is_contact(const ContactMap& F);
HorizontalMatrix horizontal_jacobian(const ContactMap& F);
/// Coordinate Jacobian d f_m / d coord_a, (2n+1) x (2n+1).
RationalMatrix coordinate_jacobian(const ContactMap& F);

struct PositivityOptions {
  int points_per_axis = 5;
  double half_width = 2.0;
  /// Values substituted for every formal parameter (all positive).
  std::vector<double> param_samples{0.5, 2.0};
  /// Points where |den lambda| falls below this are treated as excluded.
  double exclusion_threshold = 1e-9;
  int jobs = 1;
};

/// Contact, M^T M = lambda I, J_0 = lambda^n, J = lambda^{n+1} and lambda > 0 on a grid.
Report is_conformal(const ContactMap& F, const PositivityOptions& opts = {});
/// Zbar_l (f_k + i f_{n+k}) = 0 for all k, l.
Report cr_check(const ContactMap& F);
/// lambda = sum_j (X_{n+nu} f_{n+j} X_nu f_j - X_{n+nu} f_j X_nu f_{n+j}) for every nu,
/// obtained by bracketing the contact equations for nu and n+nu.
Report lambda_nu_check(const ContactMap& F);
/// Identities that involve the inverse G: G o F = id, lambda_G o F = 1/lambda_F,
/// (X_l g_k) o F = X_k f_l / lambda_F, and X_k f_l = X_{n+k} f_{n+l}.
Report inverse_identities(const ContactMap& F);

/// F o G by substitution; the inverse is attached when both have one.
ContactMap compose_maps(const ContactMap& F, const ContactMap& G);
/// lambda_{F o G} = (lambda_F o G) lambda_G.
Report composition_check(const ContactMap& F, const ContactMap& G);

namespace corpus {

ContactMap identity(const VarSetPtr& vars);
/// Left translation p -> q * p.
ContactMap translation(const VarSetPtr& vars, const Point<Scalar>& q);
/// (z, t) -> (r z, r^2 t); r may be a formal parameter of `vars`.
ContactMap dilation(const VarSetPtr& vars, const RationalFn& r);
/// (z, t) -> (U z, t); throws std::invalid_argument unless U*U = I exactly.
ContactMap rotation(const VarSetPtr& vars, const std::vector<std::vector<Scalar>>& U);
/// Involution z -> -z / (|z|^2 - i t), t -> -t / (|z|^4 + t^2), lambda = 1/(|z|^4 + t^2).
ContactMap inversion(const VarSetPtr& vars);

/// Exact unitary used when no matrix is given: blocks of [[3/5, 4/5], [-4i/5, 3i/5]]
/// and a trailing 1x1 block 3/5 + 4i/5.
std::vector<std::vector<Scalar>> default_unitary(int n);
Point<Scalar> default_translation(int n);

const std::vector<std::string>& names();

/// Builds a corpus map from "name" or "name:key=value,...", e.g. "dilation:r=2",
/// "translation:q=1;0;1/2". Plain "dilation" keeps r formal.
ContactMap by_name(std::string_view spec, int n);

}  // namespace corpus

/// Contact map with prescribed t-independent polynomial horizontal part h_1..h_2n
/// whose symplectic factor is constant; the last component is solved from the
/// contact equations. Throws std::invalid_argument when no such component exists.
ContactMap contact_completion(const VarSetPtr& vars, const std::vector<RationalFn>& horizontal,
                              std::string name = "completion");

/// Key/value map description:
///   name = ...      (optional)
///   n = 1
///   f1 = ... f{2n+1} = ...
///   g1 = ...        (optional inverse, all or none)
///   excluded = ...  (optional)
/// Lines starting with '#' are comments. Unknown identifiers become formal
/// parameters. Throws ParseError on malformed input.
ContactMap parse_map_spec(std::string_view text);
ContactMap load_map_spec(const std::string& path);

}  // namespace heis

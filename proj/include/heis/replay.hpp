#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "heis/diffop.hpp"
#include "heis/maps.hpp"
#include "heis/report.hpp"

namespace heis {

/// Right-invariant mirror selecting a potential family.
enum class Mirror { T, X, Y };

/// Mirror field W~ for the family; `index` is 1..n for X and Y and ignored for T.
DiffOp mirror_field(Mirror field, int index, const VarSetPtr& vars);
std::string mirror_label(Mirror field, int index);

/// psi with W~ g_l o F = X_{n+l} psi and W~ g_{n+l} o F = -X_l psi.
struct PotentialAssignment {
  Mirror field = Mirror::T;
  int index = 0;
  RationalFn psi;
  std::shared_ptr<const ContactMap> map;

  std::string label() const { return mirror_label(field, index); }
};

/// [X_j, Y_k] = -4 delta_jk T, all other frame brackets zero, and every mirror
/// field commuting with every left-invariant horizontal field.
Report frame_brackets(int n);
/// 4 Z_j Z_k = (X_j X_k - Y_j Y_k) - i (X_j Y_k + Y_j X_k), its conjugate for Zbar,
/// Delta0 / 2 = sum_j (Z_j Zbar_j + Zbar_j Z_j) and conj(Z_j) = Zbar_j.
Report complexified_identities(int n);
/// Associativity and the Jacobi identity on `count` random triples of named operators.
Report random_operator_identities(int n, std::uint64_t seed, int count = 20);

/// (1/2) sum_{j,k} (Zbar_j Zbar_k Z_j Z_k + Z_j Z_k Zbar_j Zbar_k) = Delta0^2/16 - n(n+2) T^2 and
/// L_{-c} L_c = Delta0^2/16 - c^2 T^2 with formal c, both as canonical forms.
Report factorization_identity(int n);

/// psi_T = -1/(4 lambda), psi_X(l) = f_{n+l}/lambda, psi_Y(l) = ytilde_sign * f_l/lambda.
PotentialAssignment potential_for(Mirror field, int index, const ContactMap& F, int ytilde_sign = -1);

/// Both families of the gradient relation; for T also the form through lambda_G o F.
Report verify_gradient_relation(const PotentialAssignment& a);
/// Z_k Z_l psi = 0, together with Zbar_k Zbar_l psi computed from the conjugated operator.
Report verify_zz(const PotentialAssignment& a);
/// Contact equations for grad_0 f_{2n+1} and div_0 grad_0 f_{2n+1} = Delta0 f_{2n+1}.
Report verify_final_step(const ContactMap& F);
/// sum_m (X_m g_k) o F * X_l f_m = delta_{kl}.
Report kronecker_identity(const ContactMap& F);
/// First variation of the matrix flow at s = 0 computed from the mirror derivatives of G
/// and from psi, plus the operator identity linking it to 4 Z_k Z_l.
Report matrix_flow_consistency(const PotentialAssignment& a);

/// Sign of the Y~ potential for which the gradient relation holds on the identity map.
/// Returns 0 when neither sign works.
int resolve_ytilde_sign(int n);

struct ReplayOptions {
  int jobs = 1;
  PositivityOptions positivity;
};

struct Bundle {
  int n = 0;
  int ytilde_sign = 0;
  std::vector<Report> reports;

  bool pass() const;
  std::string first_failure() const;
  std::string to_text() const;
};

/// Maps replayed by default: the whole corpus for n = 1, polynomial maps for larger n.
std::vector<std::string> default_replay_maps(int n);

/// Factorization identity, then for every map: maps-module invariants, the three potential
/// families, verify_zz, the Kronecker identity and verify_final_step.
Bundle replay_all(int n, const ReplayOptions& opts = {});
Bundle replay_maps(int n, const std::vector<ContactMap>& maps, const ReplayOptions& opts = {});

}  // namespace heis

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "heis/group.hpp"
#include "heis/maps.hpp"
#include "heis/report.hpp"

namespace heis {

using RealMatrix = std::vector<std::vector<double>>;

/// Thrown when a trajectory leaves its box or step halving disagrees.
struct FlowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FlowConfig {
  double step = 1e-3;
  double s_max = 1.0;
  double fd_step = 1e-4;
  /// Relative tolerance for finite differences and step halving.
  double tolerance = 1e-6;
  /// Absolute slack allowed above the distortion bound.
  double bound_slack = 1e-4;
  /// Contact residual allowed along a trajectory.
  double contact_tolerance = 1e-5;
  /// Box [-box_half, box_half]^(2n+1) that trajectories must stay in; may be infinite.
  double box_half = 1.0;
  /// Start points (flat coordinates); empty means the default grid.
  std::vector<std::vector<double>> grid;
  /// Keep every k-th RK4 step in the trace (the endpoint is always kept).
  int sample_stride = 10;
  int jobs = 1;

  /// Throws std::invalid_argument on non-positive steps or tolerances.
  void validate() const;
};

struct FlowSample {
  double s = 0;
  std::vector<double> point;
  RealMatrix jacobian;  // coordinate Jacobian, (2n+1) square
  RealMatrix frame;     // horizontal frame matrix, 2n square
  double distortion = 1;
  double contact_residual = 0;
  double bound = 1;
};

struct FlowTrace {
  std::vector<double> start;
  std::vector<FlowSample> samples;
  /// Largest endpoint change when the step is halved (point and Jacobian).
  double halving_error = 0;
};

/// Columns trace, s, x1..xn, y1..yn, t, K_meas, K_bound, contact_residual.
std::string traces_to_csv(const std::vector<FlowTrace>& traces, int n);

/// H(p, s) = G(exp(s W) * F(p)) evaluated numerically; `params` gives formal parameters.
std::vector<double> conformal_flow(const ContactMap& F, const LieVector<double>& W, std::span<const double> p, double s,
                                   std::span<const double> params = {});

/// Three sample points away from the corpus exclusion sets.
std::vector<std::vector<double>> default_rivf_points(int n);

/// Finite-difference check of (X_k h_l)'(p,0) = X_k(W~ g_l o F)(p) for all k, l, with
/// X_k h_l computed symbolically in s and Richardson-extrapolated central differences in s.
/// Also checks X_l h_k(p,0) = delta_{kl} exactly.
Report rivf_check(const ContactMap& F, const LieVector<Scalar>& W, const std::vector<std::vector<double>>& points,
                  const FlowConfig& cfg = {}, std::span<const double> params = {});

/// "X1", "Y2", "T" as a basis Lie vector of H^n.
LieVector<Scalar> basis_vector(std::string_view name, int n);
std::string lie_vector_name(const LieVector<Scalar>& W);

struct KRPotential {
  RationalFn phi;
  VarSetPtr vars;
  double box_half = 1.0;
  /// M[j][k] = sup |Z_j Z_k phi| over the box.
  RealMatrix M;
  /// True when every Z_j Z_k phi is constant, so M is exact.
  bool exact = false;
};

/// Builds M by exact evaluation for constant entries and a grid supremum otherwise.
KRPotential make_kr_potential(const RationalFn& phi, const VarSetPtr& vars, double box_half = 1.0);

/// V = phi T + (1/4) sum_j (X_j phi Y_j - Y_j phi X_j) in coordinate components.
std::vector<RationalFn> kr_vector_field(const RationalFn& phi, const VarSetPtr& vars);

/// Polynomial vector field together with its exact coordinate differential.
class NumericField {
 public:
  /// Components must not involve formal parameters.
  explicit NumericField(const std::vector<RationalFn>& components);
  int dim() const { return static_cast<int>(value_.size()); }
  std::vector<double> value(std::span<const double> p) const;
  RealMatrix jacobian(std::span<const double> p) const;

 private:
  std::vector<NumericRational> value_;
  std::vector<std::vector<NumericRational>> jac_;
};

/// Matrix of D_0 in the left-invariant frames: entry (m,k) = sum_a J[m][a] (X_k)_a(p), m, k <= 2n.
RealMatrix horizontal_frame_matrix(const RealMatrix& J, std::span<const double> p);
/// sigma_max / sigma_min by one-sided Jacobi SVD. Throws std::domain_error when singular.
double distortion(const RealMatrix& Mh);
std::vector<double> singular_values(const RealMatrix& A);
/// |alpha(J X_k)| over k and |alpha(J T) - lambda| with lambda read off M^T Omega M.
double contact_residual(const RealMatrix& J, std::span<const double> p, std::span<const double> q);

/// K with (K + 1/K)/2 = 1 + n (exp(s sqrt(2) |M|_HS) - 1).
double kr_bound(double s, const RealMatrix& M, int n);

/// RK4 with the variational equation; samples carry frame matrix, distortion and contact residual.
FlowTrace integrate_flow(const NumericField& V, std::span<const double> p0, const FlowConfig& cfg);

struct KRResult {
  Report report;
  std::vector<FlowTrace> traces;
};

/// Grid of start points in [-box/2, box/2]^(2n+1), 3 per axis.
std::vector<std::vector<double>> default_kr_grid(int n, double box_half);

/// Integrates from every grid point and checks the contact residual and K_meas <= K(s) + slack.
KRResult kr_experiment(const KRPotential& phi, const FlowConfig& cfg);

/// log2 of the ratio of successive step-halving differences at s_max.
double rk4_observed_order(const NumericField& V, std::span<const double> p0, double s_max, double step);

}  // namespace heis

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "heis/flows.hpp"
#include "heis/parse.hpp"

using namespace heis;

namespace {

RationalFn P(const std::string& s, const VarSetPtr& vars) { return parse_rational(s, vars); }

LieVector<double> lie(int n, const std::string& name) {
  LieVector<Scalar> w = basis_vector(name, n);
  LieVector<double> out{std::vector<double>(w.a.size()), std::vector<double>(w.b.size()), w.c.to_complex().real()};
  for (std::size_t j = 0; j < w.a.size(); ++j) {
    out.a[j] = w.a[j].to_complex().real();
    out.b[j] = w.b[j].to_complex().real();
  }
  return out;
}

void expect_near(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << "coordinate " << i;
}

TEST(ConformalFlow, Examples) {
  auto v1 = make_varset(1);
  ContactMap id = corpus::identity(v1);
  std::vector<double> p{0.3, -0.7, 1.1};
  expect_near(conformal_flow(id, lie(1, "T"), p, 0.25), {0.3, -0.7, 1.35}, 1e-15);
  // (s,0,0) * (x,y,t) = (x+s, y, t - 2sy)
  expect_near(conformal_flow(id, lie(1, "X1"), p, 0.5), {0.8, -0.7, 1.1 - 2 * 0.5 * -0.7}, 1e-15);
  ContactMap d2 = corpus::by_name("dilation:r=2", 1);
  expect_near(conformal_flow(d2, lie(1, "T"), p, 0.5), {0.3, -0.7, 1.1 + 0.125}, 1e-15);
}

TEST(ConformalFlow, StartsAtIdentityAndComposes) {
  for (const auto& name : corpus::names()) {
    ContactMap F = corpus::by_name(name == "dilation" ? "dilation:r=3/2" : name, 1);
    for (const auto* w : {"X1", "Y1", "T"}) {
      std::vector<double> p{1.0, 0.5, -0.75};
      expect_near(conformal_flow(F, lie(1, w), p, 0.0), p, 1e-12);
      auto once = conformal_flow(F, lie(1, w), conformal_flow(F, lie(1, w), p, 0.1), 0.05);
      expect_near(once, conformal_flow(F, lie(1, w), p, 0.15), 1e-12);
    }
  }
}

TEST(Rivf, Examples) {
  ContactMap id = corpus::identity(make_varset(1));
  Report zero = rivf_check(id, basis_vector("T", 1), default_rivf_points(1));
  EXPECT_TRUE(zero.pass()) << zero.to_text();
  for (const auto& r : zero.residuals()) EXPECT_EQ(r.magnitude, 0.0);

  Report d2 = rivf_check(corpus::by_name("dilation:r=2", 1), basis_vector("T", 1), {{1, 1, 1}});
  EXPECT_TRUE(d2.pass()) << d2.to_text();
  Report inv = rivf_check(corpus::inversion(make_varset(1)), basis_vector("X1", 1), {{1, 0, 1}});
  EXPECT_TRUE(inv.pass()) << inv.to_text();
  // four delta entries and four derivative comparisons
  EXPECT_EQ(inv.residuals().size(), 8U);
}

TEST(Rivf, CorpusAndBasisFields) {
  for (const auto& name : corpus::names()) {
    ContactMap F = corpus::by_name(name, 1);
    std::vector<double> params(F.vars()->params().size(), 2.0);
    for (const auto* w : {"X1", "Y1", "T"}) {
      Report r = rivf_check(F, basis_vector(w, 1), default_rivf_points(1), {}, params);
      EXPECT_TRUE(r.pass()) << r.to_text();
    }
  }
  for (const auto* name : {"rotation", "translation"}) {
    Report r = rivf_check(corpus::by_name(name, 2), basis_vector("Y2", 2), default_rivf_points(2));
    EXPECT_TRUE(r.pass()) << r.to_text();
  }
}

TEST(Rivf, DetectsWrongInverse) {
  auto v1 = make_varset(1);
  ContactMap F = corpus::dilation(v1, RationalFn(2));
  F.set_inverse(corpus::dilation(v1, RationalFn(3)));
  EXPECT_FALSE(rivf_check(F, basis_vector("T", 1), default_rivf_points(1)).pass());
}

TEST(Rivf, ArgumentErrors) {
  ContactMap F = corpus::identity(make_varset(1));
  EXPECT_THROW(basis_vector("X2", 1), std::invalid_argument);
  EXPECT_THROW(basis_vector("Q1", 1), std::invalid_argument);
  EXPECT_THROW(basis_vector("X1a", 1), std::invalid_argument);
  EXPECT_THROW(rivf_check(F, basis_vector("X1", 2), default_rivf_points(1)), DimensionMismatch);
  EXPECT_THROW(rivf_check(F, basis_vector("X1", 1), {{1, 2}}), DimensionMismatch);
  EXPECT_THROW(rivf_check(corpus::by_name("dilation", 1), basis_vector("X1", 1), default_rivf_points(1)), DimensionMismatch);
  EXPECT_EQ(lie_vector_name(basis_vector("Y1", 1)), "Y1");
}

TEST(KRField, Examples) {
  auto v = make_varset(1);
  auto eq = [&](const std::string& phi, const std::vector<std::string>& want) {
    auto got = kr_vector_field(P(phi, v), v);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(got[i], P(want[i], v)) << phi << " component " << i;
  };
  eq("1", {"0", "0", "1"});
  eq("x1", {"0", "1/4", "x1/2"});
  eq("x1^2", {"0", "x1/2", "0"});
}

TEST(Integrate, VerticalFlow) {
  auto v = make_varset(1);
  NumericField V(kr_vector_field(RationalFn(1), v));
  FlowConfig cfg;
  cfg.box_half = INFINITY;
  FlowTrace tr = integrate_flow(V, std::vector<double>{0.2, -0.4, 0.5}, cfg);
  const FlowSample& end = tr.samples.back();
  EXPECT_DOUBLE_EQ(end.s, 1.0);
  expect_near(end.point, {0.2, -0.4, 1.5}, 1e-12);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(end.jacobian[i][j], i == j ? 1.0 : 0.0, 1e-14);
  for (const auto& smp : tr.samples) {
    EXPECT_NEAR(smp.distortion, 1.0, 1e-14);
    EXPECT_NEAR(smp.frame[0][0], 1.0, 1e-14);
    EXPECT_NEAR(smp.frame[0][1], 0.0, 1e-14);
  }
  FlowConfig boxed;
  EXPECT_THROW(integrate_flow(V, std::vector<double>{0, 0, 0.5}, boxed), FlowError);
}

TEST(Integrate, LinearPotentialMatchesClosedForm) {
  auto v = make_varset(1);
  NumericField V(kr_vector_field(P("x1", v), v));
  FlowTrace tr = integrate_flow(V, std::vector<double>{0, 0, 0}, {});
  const FlowSample& first = tr.samples.front();
  EXPECT_EQ(first.s, 0.0);
  EXPECT_EQ(first.distortion, 1.0);
  EXPECT_EQ(first.contact_residual, 0.0);
  for (const auto& smp : tr.samples) expect_near(smp.point, {0, smp.s / 4, 0}, 1e-8);
  FlowTrace off = integrate_flow(V, std::vector<double>{0.5, 0.1, -0.2}, {});
  expect_near(off.samples.back().point, {0.5, 0.1 + 0.25, -0.2 + 0.25}, 1e-8);
}

TEST(Integrate, RK4Order) {
  auto v = make_varset(1);
  NumericField V(kr_vector_field(P("x1^2*y1", v), v));
  for (double h : {0.2, 0.1}) EXPECT_GE(rk4_observed_order(V, std::vector<double>{0.5, 0.3, 0.1}, 1.0, h), 3.9);
  FlowConfig coarse;
  coarse.step = 0.05;
  coarse.tolerance = 1e-3;
  FlowTrace a = integrate_flow(V, std::vector<double>{0.5, 0.3, 0.1}, coarse);
  EXPECT_LT(a.halving_error, std::pow(0.05, 4));
  EXPECT_GT(a.halving_error, 0.0);
}

TEST(Integrate, FieldsWithParametersAreRejected) {
  auto v = make_varset(1, {"r"});
  EXPECT_THROW(NumericField(kr_vector_field(P("r*x1", v), v)), std::invalid_argument);
}

TEST(FrameMatrix, Examples) {
  RealMatrix I{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::vector<double> p{0.7, -1.3, 2.0};
  RealMatrix m = horizontal_frame_matrix(I, p);
  EXPECT_EQ(m, (RealMatrix{{1, 0}, {0, 1}}));
  double r = 1.5;
  RealMatrix J{{r, 0, 0}, {0, r, 0}, {0, 0, r * r}};
  EXPECT_EQ(horizontal_frame_matrix(J, p), (RealMatrix{{r, 0}, {0, r}}));
  EXPECT_NEAR(contact_residual(J, p, std::vector<double>{r * 0.7, r * -1.3, r * r * 2.0}), 0.0, 1e-14);
  // t picking up x alone is not contact
  RealMatrix bad{{1, 0, 0}, {0, 1, 0}, {1, 0, 1}};
  EXPECT_GT(contact_residual(bad, p, p), 0.5);
}

TEST(Distortion, Examples) {
  EXPECT_DOUBLE_EQ(distortion({{1, 0}, {0, 1}}), 1.0);
  EXPECT_NEAR(distortion({{2, 0}, {0, 0.5}}), 4.0, 1e-14);
  double c = std::cos(0.7), s = std::sin(0.7), k = std::sqrt(3.0);
  EXPECT_NEAR(distortion({{k * c, -k * s, 0, 0}, {k * s, k * c, 0, 0}, {0, 0, k * c, k * s}, {0, 0, -k * s, k * c}}), 1.0,
              1e-10);
  EXPECT_THROW(distortion({{1, 2}, {2, 4}}), std::domain_error);
}

TEST(Distortion, SingularValuesMatchInvariants) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 200; ++trial) {
    RealMatrix a(2, std::vector<double>(2));
    for (auto& row : a)
      for (double& x : row) x = u(rng);
    auto sv = singular_values(a);
    double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    double fro = a[0][0] * a[0][0] + a[0][1] * a[0][1] + a[1][0] * a[1][0] + a[1][1] * a[1][1];
    EXPECT_NEAR(sv[0] * sv[1], std::abs(det), 1e-12);
    EXPECT_NEAR(sv[0] * sv[0] + sv[1] * sv[1], fro, 1e-12);
    EXPECT_GE(sv[0], sv[1]);
  }
}

TEST(KRBound, Examples) {
  RealMatrix half{{0.5}};
  EXPECT_EQ(kr_bound(0, half, 1), 1.0);
  RealMatrix m{{std::log(2.0) / std::sqrt(2.0)}};
  EXPECT_NEAR(kr_bound(1, m, 1), 2 + std::sqrt(3.0), 1e-12);
  EXPECT_EQ(kr_bound(5, RealMatrix{{0}}, 1), 1.0);
  double prev = 1;
  for (double s = 0.05; s <= 1; s += 0.05) {
    double k = kr_bound(s, half, 1);
    EXPECT_GE(k, prev);
    EXPECT_GE(kr_bound(s, RealMatrix{{0.6}}, 1), k);
    EXPECT_GE(kr_bound(s, half, 2), k);
    double rho = std::exp(s / std::sqrt(2.0));
    EXPECT_NEAR(k, rho + std::sqrt(rho * rho - 1), 1e-12);
    prev = k;
  }
  EXPECT_THROW(kr_bound(-1, half, 1), std::invalid_argument);
}

TEST(KRPotential, SupNorms) {
  auto v = make_varset(1);
  KRPotential sq = make_kr_potential(P("x1^2", v), v);
  EXPECT_TRUE(sq.exact);
  EXPECT_EQ(sq.M, (RealMatrix{{0.5}}));
  KRPotential cube = make_kr_potential(P("x1^3", v), v);
  EXPECT_FALSE(cube.exact);
  EXPECT_NEAR(cube.M[0][0], 1.5, 1e-12);
  auto v2 = make_varset(2);
  KRPotential mixed = make_kr_potential(P("x1*x2 - y1*y2", v2), v2);
  EXPECT_TRUE(mixed.exact);
  EXPECT_EQ(mixed.M, (RealMatrix{{0, 0.5}, {0.5, 0}}));
}

TEST(KRExperiment, ConformalPotentialsHaveUnitDistortion) {
  auto v = make_varset(1);
  for (const auto* phi : {"1", "x1"}) {
    KRResult res = kr_experiment(make_kr_potential(P(phi, v), v), {});
    EXPECT_TRUE(res.report.pass()) << res.report.to_text();
    for (const auto& tr : res.traces)
      for (const auto& smp : tr.samples) {
        EXPECT_NEAR(smp.distortion, 1.0, 1e-6);
        EXPECT_EQ(smp.bound, 1.0);
      }
  }
}

TEST(KRExperiment, QuadraticPotentialStaysUnderBound) {
  auto v = make_varset(1);
  FlowConfig cfg;
  cfg.jobs = 4;
  KRResult res = kr_experiment(make_kr_potential(P("x1^2", v), v), cfg);
  EXPECT_TRUE(res.report.pass()) << res.report.to_text();
  EXPECT_EQ(res.traces.size(), 27U);
  double kmax = 1;
  for (const auto& tr : res.traces)
    for (const auto& smp : tr.samples) {
      EXPECT_LE(smp.distortion, smp.bound + 1e-4);
      EXPECT_LE(smp.contact_residual, 1e-5);
      kmax = std::max(kmax, smp.distortion);
    }
  EXPECT_GT(kmax, 1.1);
}

TEST(KRExperiment, UnderstatedNormBreaksTheBound) {
  auto v = make_varset(1);
  KRPotential wrong = make_kr_potential(P("x1^2", v), v);
  wrong.M = {{0.0}};
  KRResult res = kr_experiment(wrong, {});
  EXPECT_FALSE(res.report.pass());
  EXPECT_EQ(res.report.first_failure(), "K<=K(s)");
}

TEST(KRExperiment, CsvIsDeterministic) {
  auto v = make_varset(1);
  KRPotential phi = make_kr_potential(P("x1^2", v), v);
  FlowConfig a;
  a.s_max = 0.2;
  FlowConfig b = a;
  b.jobs = 3;
  std::string csv = traces_to_csv(kr_experiment(phi, a).traces, 1);
  EXPECT_EQ(csv, traces_to_csv(kr_experiment(phi, b).traces, 1));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "trace,s,x1,y1,t,K_meas,K_bound,contact_residual");
  // 27 traces with samples at s = 0, 0.01, ..., 0.2
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 27 * 21);
}

TEST(FlowConfig, Validation) {
  FlowConfig c;
  c.step = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.s_max = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.sample_stride = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

}  // namespace

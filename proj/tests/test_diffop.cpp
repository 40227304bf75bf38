#include <gtest/gtest.h>

#include "heis/diffop.hpp"
#include "heis/parse.hpp"
#include "support/generators.hpp"

using namespace heis;

namespace {

class DiffOpTest : public ::testing::Test {
 protected:
  VarSetPtr v1 = make_varset(1, {"c"});
  VarSetPtr v2 = make_varset(2);
  RationalFn P(const std::string& s, const VarSetPtr& vars) { return parse_rational(s, vars); }
  DiffOp D(const std::string& s, const VarSetPtr& vars) { return parse_operator(s, vars); }
};

TEST_F(DiffOpTest, BuiltinsFromTheirDefinitions) {
  EXPECT_EQ(op_X(v1, 1).apply(P("t", v1)), P("2*y1", v1));
  EXPECT_EQ(builtin(Builtin::L, 1, v1, RationalFn(0)), RationalFn(Scalar(mpq_class(-1, 4))) * op_Delta0(v1));
  DiffOp dx = DiffOp::derivative(v1, v1->x(1));
  DiffOp dt = DiffOp::derivative(v1, v1->t());
  EXPECT_EQ(op_Xtilde(v1, 1), dx - P("2*y1", v1) * dt);
  EXPECT_EQ(op_Ytilde(v1, 1), DiffOp::derivative(v1, v1->y(1)) + P("2*x1", v1) * dt);
  EXPECT_THROW(op_X(v1, 2), std::out_of_range);
  EXPECT_THROW(builtin(Builtin::Z, 0, v2), std::out_of_range);
}

TEST_F(DiffOpTest, Composition) {
  DiffOp T = op_T(v1);
  EXPECT_EQ(T * T, DiffOp::derivative(v1, v1->t()).pow(2));
  DiffOp X = op_X(v1, 1);
  DiffOp dx = DiffOp::derivative(v1, v1->x(1));
  DiffOp dt = DiffOp::derivative(v1, v1->t());
  EXPECT_EQ(X * X, dx * dx + P("4*y1", v1) * (dx * dt) + P("4*y1^2", v1) * (dt * dt));
  // Hand-applied oracle: X1(X1 m) for m in {x1^2, x1 t, t^2}.
  EXPECT_EQ((X * X).apply(P("x1^2", v1)), RationalFn(2));
  EXPECT_EQ((X * X).apply(P("x1*t", v1)), P("4*y1", v1));
  EXPECT_EQ((X * X).apply(P("t^2", v1)), P("8*y1^2", v1));
  EXPECT_EQ((P("x1", v1) * T) * (P("y1", v1) * T), P("x1*y1", v1) * (dt * dt));
}

TEST_F(DiffOpTest, Commutators) {
  EXPECT_EQ(commutator(op_X(v1, 1), op_Y(v1, 1)), RationalFn(-4) * op_T(v1));
  EXPECT_TRUE(commutator(op_X(v2, 1), op_X(v2, 2)).is_zero());
  EXPECT_TRUE(commutator(op_Xtilde(v1, 1), op_Y(v1, 1)).is_zero());
  EXPECT_TRUE(commutator(op_Ytilde(v1, 1), op_X(v1, 1)).is_zero());
}

TEST_F(DiffOpTest, Application) {
  EXPECT_EQ(op_Delta0(v1).apply(P("x1^2 + y1^2", v1)), RationalFn(4));
  EXPECT_TRUE(op_Zbar(v1, 1).apply(P("x1 + i*y1", v1)).is_zero());
  EXPECT_FALSE(op_Zbar(v1, 1).apply(P("x1 - i*y1", v1)).is_zero());
  EXPECT_TRUE(op_T(v1).apply(P("x1", v1)).is_zero());
}

TEST_F(DiffOpTest, ComplexifiedIdentities) {
  DiffOp lhs = RationalFn(4) * (op_Z(v2, 1) * op_Z(v2, 2));
  DiffOp re = op_X(v2, 1) * op_X(v2, 2) - op_Y(v2, 1) * op_Y(v2, 2);
  DiffOp im = op_X(v2, 1) * op_Y(v2, 2) + op_Y(v2, 1) * op_X(v2, 2);
  // Z = (X - iY)/2 puts a minus on the imaginary part; the plus form belongs to Zbar.
  EXPECT_TRUE(op_equal(lhs, re - RationalFn(Scalar::i()) * im));
  EXPECT_FALSE(op_equal(lhs, re + RationalFn(Scalar::i()) * im));
  EXPECT_TRUE(op_equal(RationalFn(4) * (op_Zbar(v2, 1) * op_Zbar(v2, 2)), re + RationalFn(Scalar::i()) * im));
  for (auto vars : {v1, v2, make_varset(3)}) {
    DiffOp sum(vars);
    for (int j = 1; j <= vars->n(); ++j)
      sum += op_Z(vars, j) * op_Zbar(vars, j) + op_Zbar(vars, j) * op_Z(vars, j);
    EXPECT_TRUE(op_equal(RationalFn(Scalar(mpq_class(1, 2))) * op_Delta0(vars), sum));
  }
  EXPECT_FALSE(op_equal(op_X(v1, 1), op_Y(v1, 1)));
}

TEST_F(DiffOpTest, FrameBracketTable) {
  for (int n = 1; n <= 3; ++n) {
    auto vars = make_varset(n);
    DiffOp T = op_T(vars);
    for (int j = 1; j <= n; ++j) {
      for (int k = 1; k <= n; ++k) {
        DiffOp expected = j == k ? RationalFn(-4) * T : DiffOp(vars);
        EXPECT_EQ(commutator(op_X(vars, j), op_Y(vars, k)), expected);
        EXPECT_TRUE(commutator(op_X(vars, j), op_X(vars, k)).is_zero());
        EXPECT_TRUE(commutator(op_Y(vars, j), op_Y(vars, k)).is_zero());
      }
      EXPECT_TRUE(commutator(op_X(vars, j), T).is_zero());
      EXPECT_TRUE(commutator(op_Y(vars, j), T).is_zero());
    }
    for (int a = 1; a <= 2 * n; ++a)
      for (int b = 1; b <= 2 * n; ++b)
        EXPECT_TRUE(commutator(op_horizontal_mirror(vars, a), op_horizontal(vars, b)).is_zero()) << n << " " << a << " " << b;
  }
}

TEST_F(DiffOpTest, ConjugationMatchesDefinition) {
  EXPECT_EQ(op_Z(v1, 1).conj(), op_Zbar(v1, 1));
  proptest::Gen gen(21);
  for (int k = 0; k < 10; ++k) {
    RationalFn f = gen.rational_fn(v1, true);
    DiffOp zz = op_Z(v1, 1) * op_Z(v1, 1);
    EXPECT_EQ(zz.conj().apply(f), zz.apply(f.conj()).conj());
  }
}

TEST_F(DiffOpTest, PropertyAssociativityAndJacobi) {
  auto vars = make_varset(2);
  std::vector<DiffOp> pool;
  for (int j = 1; j <= 2; ++j)
    for (auto kind : {Builtin::X, Builtin::Y, Builtin::Xtilde, Builtin::Ytilde, Builtin::Z, Builtin::Zbar})
      pool.push_back(builtin(kind, j, vars));
  pool.push_back(op_T(vars));
  pool.push_back(P("x1*y2 - t", vars) * op_X(vars, 1));
  proptest::Gen gen(22);
  for (int k = 0; k < 40; ++k) {
    const DiffOp& a = pool[static_cast<std::size_t>(gen.integer(0, static_cast<long>(pool.size()) - 1))];
    const DiffOp& b = pool[static_cast<std::size_t>(gen.integer(0, static_cast<long>(pool.size()) - 1))];
    const DiffOp& c = pool[static_cast<std::size_t>(gen.integer(0, static_cast<long>(pool.size()) - 1))];
    EXPECT_EQ((a * b) * c, a * (b * c));
    DiffOp jacobi = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b));
    EXPECT_TRUE(jacobi.is_zero());
  }
}

TEST_F(DiffOpTest, PropertyApplyRespectsComposition) {
  proptest::Gen gen(23);
  std::vector<DiffOp> pool{op_X(v1, 1), op_Y(v1, 1), op_T(v1), op_Z(v1, 1), op_Ytilde(v1, 1), op_L(v1, P("c", v1)),
                           P("x1/(1 + t^2)", v1) * op_Y(v1, 1)};
  for (int k = 0; k < 30; ++k) {
    const DiffOp& a = pool[static_cast<std::size_t>(gen.integer(0, 6))];
    const DiffOp& b = pool[static_cast<std::size_t>(gen.integer(0, 6))];
    RationalFn f = gen.rational_fn(v1, true);
    EXPECT_EQ((a * b).apply(f), a.apply(b.apply(f)));
  }
}

TEST_F(DiffOpTest, OperatorParser) {
  EXPECT_EQ(D("[X1, Y1]", v1), RationalFn(-4) * op_T(v1));
  EXPECT_EQ(D("4*Z1*Z2", v2), D("(X1*X2 - Y1*Y2) - i*(X1*Y2 + Y1*X2)", v2));
  EXPECT_EQ(D("L(c)", v1), D("-Delta0/4 + c*T", v1));
  EXPECT_EQ(D("Xt1", v1), op_Xtilde(v1, 1));
  EXPECT_EQ(D("Zbar1", v1), op_Zbar(v1, 1));
  EXPECT_EQ(D("Delta0^2", v1), op_Delta0(v1) * op_Delta0(v1));
  EXPECT_EQ(D("x1*T", v1), P("x1", v1) * op_T(v1));
  EXPECT_THROW(D("X3", v1), ParseError);
  EXPECT_THROW(D("L(T)", v1), ParseError);
  EXPECT_THROW(D("X1/Y1", v1), ParseError);
  EXPECT_THROW(D("[X1 Y1]", v1), ParseError);
}

}  // namespace

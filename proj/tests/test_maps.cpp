#include <gtest/gtest.h>

#include "heis/maps.hpp"
#include "heis/parse.hpp"

using namespace heis;

namespace {

RationalFn P(const std::string& s, const VarSetPtr& vars) { return parse_rational(s, vars); }

ContactMap from_text(const std::string& name, const VarSetPtr& vars, const std::vector<std::string>& comps) {
  std::vector<RationalFn> f;
  for (const auto& c : comps) f.push_back(P(c, vars));
  return ContactMap(name, vars, f);
}

TEST(Lambda, Examples) {
  auto v = make_varset(1, {"r"});
  EXPECT_EQ(lambda(corpus::identity(make_varset(2))), RationalFn(1));
  EXPECT_EQ(lambda(corpus::dilation(v, RationalFn::var(v, "r"))), P("r^2", v));
  auto v1 = make_varset(1);
  EXPECT_EQ(lambda(from_text("quarter turn", v1, {"-y1", "x1", "t"})), RationalFn(1));
  EXPECT_THROW(lambda(from_text("bad", v1, {"x1", "y1", "t + x1"})), NotContact);
}

TEST(IsContact, Examples) {
  auto v1 = make_varset(1);
  EXPECT_TRUE(is_contact(from_text("quarter turn", v1, {"-y1", "x1", "t"})).pass());
  Report bad = is_contact(from_text("bad", v1, {"x1", "y1", "t + x1"}));
  EXPECT_FALSE(bad.pass());
  EXPECT_EQ(bad.first_failure(), "contact.X(1)");
  EXPECT_EQ(*bad.residuals()[0].symbolic, RationalFn(1));
  EXPECT_TRUE(bad.residuals()[1].ok);
}

TEST(HorizontalJacobian, Examples) {
  auto v = make_varset(1, {"r"});
  RationalFn r = RationalFn::var(v, "r");
  HorizontalMatrix id = horizontal_jacobian(corpus::identity(make_varset(2)));
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b) EXPECT_EQ(id(a, b), RationalFn(a == b ? 1 : 0));
  EXPECT_EQ(id.determinant(), RationalFn(1));
  HorizontalMatrix d = horizontal_jacobian(corpus::dilation(v, r));
  EXPECT_EQ(d(1, 1), r);
  EXPECT_EQ(d(1, 2), RationalFn(0));
  EXPECT_EQ(d.determinant(), r * r);
  auto v1 = make_varset(1);
  HorizontalMatrix q = horizontal_jacobian(from_text("quarter turn", v1, {"-y1", "x1", "t"}));
  EXPECT_EQ(q(1, 1), RationalFn(0));
  EXPECT_EQ(q(1, 2), RationalFn(-1));
  EXPECT_EQ(q(2, 1), RationalFn(1));
  EXPECT_EQ(q.determinant(), RationalFn(1));
}

TEST(Determinant, MatchesCofactorExpansion) {
  auto v = make_varset(1);
  RationalMatrix m{{P("x1", v), P("1/(1+t^2)", v), P("y1", v)},
                   {P("0", v), P("x1*y1", v), P("t", v)},
                   {P("1", v), P("x1/(1+y1^2)", v), P("2", v)}};
  RationalFn cof = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  EXPECT_EQ(determinant(m), cof);
  RationalMatrix swap{{P("0", v), P("1", v)}, {P("1", v), P("0", v)}};
  EXPECT_EQ(determinant(swap), RationalFn(-1));
}

TEST(IsConformal, ShearIsContactButNotConformal) {
  auto v1 = make_varset(1);
  ContactMap shear = contact_completion(v1, {P("x1", v1), P("y1 + x1", v1)}, "shear");
  EXPECT_EQ(shear.f(3), P("t", v1));
  Report r = is_conformal(shear);
  EXPECT_FALSE(r.pass());
  EXPECT_TRUE(is_contact(shear).pass());
  EXPECT_EQ(r.first_failure(), "MtM(1,1)");
  // A nonlinear completion: the symplectic factor stays 1 under (x, y + x^2).
  ContactMap bent = contact_completion(v1, {P("x1", v1), P("y1 + x1^2", v1)}, "bent");
  EXPECT_TRUE(is_contact(bent).pass());
  EXPECT_FALSE(is_conformal(bent).pass());
  EXPECT_THROW(contact_completion(v1, {P("x1^2", v1), P("y1", v1)}), std::invalid_argument);
}

TEST(CrCheck, Examples) {
  auto v1 = make_varset(1);
  EXPECT_TRUE(cr_check(corpus::identity(v1)).pass());
  EXPECT_TRUE(cr_check(corpus::dilation(v1, RationalFn(3))).pass());
  EXPECT_FALSE(cr_check(from_text("conjugation", v1, {"x1", "-y1", "-t"})).pass());
}

TEST(LambdaNu, Examples) {
  auto v = make_varset(1, {"r"});
  EXPECT_TRUE(lambda_nu_check(corpus::identity(make_varset(1))).pass());
  EXPECT_TRUE(lambda_nu_check(corpus::dilation(v, RationalFn::var(v, "r"))).pass());
  EXPECT_TRUE(lambda_nu_check(corpus::inversion(make_varset(1))).pass());
}

// The variant with the second product transposed, sum_j X_{n+j} f_nu X_j f_{n+nu}, coincides
// at n = 1 but not in general: a unitary rotation of H^2 separates the two.
TEST(LambdaNu, TransposedVariantFailsForRotationInTwoDimensions) {
  ContactMap rot = corpus::rotation(make_varset(2), corpus::default_unitary(2));
  HorizontalMatrix m = horizontal_jacobian(rot);
  RationalFn variant;
  for (int j = 1; j <= 2; ++j) variant += m(2 + j, 3) * m(j, 1) - m(1, 2 + j) * m(3, j);
  EXPECT_NE(variant, lambda(rot));
  EXPECT_TRUE(lambda_nu_check(rot).pass());
}

TEST(Corpus, TranslationThenInverseIsIdentity) {
  auto v = make_varset(2);
  Point<Scalar> q = corpus::default_translation(2);
  ContactMap a = corpus::translation(v, q);
  ContactMap b = corpus::translation(v, group_inv(q));
  EXPECT_EQ(compose_maps(b, a).components(), corpus::identity(v).components());
}

TEST(Corpus, RotationAndUnitarity) {
  auto v = make_varset(1);
  ContactMap rot = corpus::rotation(v, corpus::default_unitary(1));
  EXPECT_TRUE(is_conformal(rot).pass());
  EXPECT_EQ(lambda(rot), RationalFn(1));
  std::vector<std::vector<Scalar>> bad{{Scalar(1) + Scalar::i()}};
  EXPECT_THROW(corpus::rotation(v, bad), std::invalid_argument);
  auto u3 = corpus::default_unitary(3);
  EXPECT_NO_THROW(corpus::rotation(make_varset(3), u3));
}

TEST(Corpus, InversionIsInvolution) {
  auto v = make_varset(1);
  ContactMap inv = corpus::inversion(v);
  EXPECT_EQ(compose_maps(inv, inv).components(), corpus::identity(v).components());
  EXPECT_EQ(lambda(inv), P("1/(x1^4 + 2*x1^2*y1^2 + y1^4 + t^2)", v));
}

TEST(Compose, Examples) {
  auto v = make_varset(1, {"r"});
  RationalFn r = RationalFn::var(v, "r");
  EXPECT_EQ(compose_maps(corpus::dilation(v, r), corpus::dilation(v, r.inverse())).components(),
            corpus::identity(v).components());
  auto v1 = make_varset(1);
  Point<Scalar> p = Point<Scalar>::from_coords(std::vector<Scalar>{Scalar(1), Scalar(2), Scalar(3)});
  Point<Scalar> q = Point<Scalar>::from_coords(std::vector<Scalar>{Scalar(mpq_class(1, 2)), Scalar(-1), Scalar(0)});
  EXPECT_EQ(compose_maps(corpus::translation(v1, p), corpus::translation(v1, q)).components(),
            corpus::translation(v1, group_mul(p, q)).components());
  ContactMap rd = compose_maps(corpus::rotation(v, corpus::default_unitary(1)), corpus::dilation(v, r));
  EXPECT_TRUE(is_conformal(rd).pass());
  EXPECT_EQ(lambda(rd), r * r);
  EXPECT_TRUE(composition_check(corpus::inversion(v), corpus::dilation(v, r)).pass());
  EXPECT_TRUE(composition_check(corpus::translation(v, corpus::default_translation(1)), corpus::inversion(v)).pass());
}

TEST(Corpus, ByName) {
  EXPECT_EQ(corpus::by_name("dilation:r=2", 1).components(), corpus::dilation(make_varset(1), RationalFn(2)).components());
  EXPECT_EQ(corpus::by_name("dilation", 2).vars()->params(), std::vector<std::string>{"r"});
  EXPECT_EQ(corpus::by_name("translation:q=1;2;3", 1).f(3), P("t + 3 - 2*y1 + 4*x1", make_varset(1)));
  EXPECT_THROW(corpus::by_name("nonexistent", 1), std::invalid_argument);
  EXPECT_THROW(corpus::by_name("dilation:s=2", 1), std::invalid_argument);
  EXPECT_THROW(corpus::by_name("translation:q=1;2", 1), DimensionMismatch);
}

TEST(MapSpec, Parse) {
  ContactMap m = parse_map_spec(
      "# dilation with formal factor\nname = dil\nn = 1\nf1 = r*x1\nf2 = r*y1\nf3 = r^2*t\n"
      "g1 = x1/r\ng2 = y1/r\ng3 = t/r^2\nexcluded = r = 0\n");
  EXPECT_EQ(m.name(), "dil");
  EXPECT_EQ(m.vars()->params(), std::vector<std::string>{"r"});
  EXPECT_TRUE(m.has_inverse());
  EXPECT_EQ(m.excluded(), "r = 0");
  EXPECT_TRUE(inverse_identities(m).pass());
  EXPECT_THROW(parse_map_spec("n = 1\nf1 = x1\nf2 = y1\n"), ParseError);
  EXPECT_THROW(parse_map_spec("f1 = x1\n"), ParseError);
  EXPECT_THROW(parse_map_spec("n = 1\nf1 = x1\nf2 = y1\nf3 = t +\n"), ParseError);
  EXPECT_THROW(parse_map_spec("n = 1\nf1 = x1\nf2 = y1\nf3 = t\ncolour = red\n"), ParseError);
  EXPECT_THROW(parse_map_spec("n = 1\nf1 = i*x1\nf2 = y1\nf3 = t\n"), ParseError);
}

TEST(Report, PassIffAllResidualsClear) {
  Report r("demo");
  EXPECT_TRUE(r.pass());
  r.add_symbolic("zero", RationalFn(0));
  r.add_numeric("small", 1e-9, 1e-6);
  EXPECT_TRUE(r.pass());
  r.add_numeric("nan", std::nan(""), 1.0);
  EXPECT_FALSE(r.pass());
  EXPECT_EQ(r.first_failure(), "nan");
  EXPECT_NE(r.to_text().find("FAIL nan"), std::string::npos);
}

// Every corpus map passes every check with exact zero residuals.
class CorpusInvariants : public ::testing::TestWithParam<std::tuple<int, std::string>> {};

TEST_P(CorpusInvariants, AllChecksPass) {
  auto [n, name] = GetParam();
  ContactMap F = corpus::by_name(name, n);
  for (const Report& r : {is_conformal(F), cr_check(F), lambda_nu_check(F), inverse_identities(F)}) {
    EXPECT_TRUE(r.pass()) << r.to_text();
    for (const auto& res : r.residuals())
      if (res.symbolic) EXPECT_TRUE(res.symbolic->is_zero()) << res.id;
  }
  EXPECT_NO_THROW(lambda(F));
}

INSTANTIATE_TEST_SUITE_P(Maps, CorpusInvariants,
                         ::testing::Combine(::testing::Values(1, 2),
                                            ::testing::Values("identity", "translation", "dilation", "dilation:r=3/2",
                                                              "rotation", "inversion")),
                         [](const auto& info) {
                           std::string s = std::get<1>(info.param);
                           for (auto& c : s)
                             if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
                           return s + "_n" + std::to_string(std::get<0>(info.param));
                         });

}  // namespace

#include "heis/rational.hpp"

#include <algorithm>

#include <cmath>
#include <sstream>

namespace heis {

VarSetPtr common_vars(const VarSetPtr& a, const VarSetPtr& b) {
  if (!a) return b;
  if (!b || a == b) return a;
  if (*a != *b) throw DimensionMismatch("rational functions live over different variable sets");
  return a;
}

RationalFn::RationalFn(VarSetPtr vars, Polynomial num, Polynomial den) {
  *this = normalized(std::move(vars), std::move(num), std::move(den));
}

RationalFn RationalFn::normalized(VarSetPtr vars, Polynomial num, Polynomial den) {
  if (den.is_zero()) throw DivisionByZero("zero denominator in rational function");
  if (num.is_zero()) return RationalFn(Raw{}, std::move(vars), Polynomial{}, Polynomial(1));
  if (den.is_constant()) {
    Scalar inv = den.constant_value().inverse();
    return RationalFn(Raw{}, std::move(vars), num.scaled(inv), Polynomial(1));
  }
  Polynomial g = gcd(num, den);
  if (!g.is_one()) {
    num = *num.divide_exact(g);
    den = *den.divide_exact(g);
  }
  if (!den.leading().coef.is_one()) {
    Scalar inv = den.leading().coef.inverse();
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  if (den.is_one()) den = Polynomial(1);
  return RationalFn(Raw{}, std::move(vars), std::move(num), std::move(den));
}

void RationalFn::check_index(int var) const {
  if (var < 0 || (vars_ && var >= vars_->size()) || var >= kMaxVars)
    throw UnknownVariable("variable index " + std::to_string(var) + " not in variable set");
}

RationalFn RationalFn::var(VarSetPtr vars, int index) {
  if (!vars || index < 0 || index >= vars->size()) throw UnknownVariable("variable index out of range");
  return RationalFn(Raw{}, std::move(vars), Polynomial::var(index), Polynomial(1));
}

RationalFn RationalFn::var(VarSetPtr vars, std::string_view name) {
  if (!vars) throw UnknownVariable("no variable set");
  auto idx = vars->find(name);
  if (!idx) throw UnknownVariable("unknown variable '" + std::string(name) + "'");
  return var(std::move(vars), *idx);
}

Scalar RationalFn::constant_value() const {
  if (!is_constant()) throw std::logic_error("rational function is not constant");
  return num_.constant_value() / den_.constant_value();
}

RationalFn RationalFn::operator-() const { return RationalFn(Raw{}, vars_, -num_, den_); }

RationalFn operator+(const RationalFn& a, const RationalFn& b) {
  VarSetPtr vars = common_vars(a.vars_, b.vars_);
  if (a.is_zero()) return RationalFn(RationalFn::Raw{}, vars, b.num_, b.den_);
  if (b.is_zero()) return RationalFn(RationalFn::Raw{}, vars, a.num_, a.den_);
  if (a.den_.is_one() && b.den_.is_one()) return RationalFn(RationalFn::Raw{}, vars, a.num_ + b.num_, Polynomial(1));
  Polynomial g = gcd(a.den_, b.den_);
  if (g.is_one())
    return RationalFn(RationalFn::Raw{}, vars, a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  Polynomial ad = *a.den_.divide_exact(g);
  Polynomial bd = *b.den_.divide_exact(g);
  Polynomial sum = a.num_ * bd + b.num_ * ad;
  if (sum.is_zero()) return RationalFn(RationalFn::Raw{}, vars, Polynomial{}, Polynomial(1));
  Polynomial g2 = gcd(sum, g);
  if (!g2.is_one()) {
    sum = *sum.divide_exact(g2);
    return RationalFn(RationalFn::Raw{}, vars, std::move(sum), ad * *b.den_.divide_exact(g2));
  }
  return RationalFn(RationalFn::Raw{}, vars, std::move(sum), ad * b.den_);
}

RationalFn operator-(const RationalFn& a, const RationalFn& b) { return a + (-b); }

RationalFn operator*(const RationalFn& a, const RationalFn& b) {
  VarSetPtr vars = common_vars(a.vars_, b.vars_);
  if (a.is_zero() || b.is_zero()) return RationalFn(RationalFn::Raw{}, vars, Polynomial{}, Polynomial(1));
  if (a.den_.is_one() && b.den_.is_one()) return RationalFn(RationalFn::Raw{}, vars, a.num_ * b.num_, Polynomial(1));
  Polynomial g1 = gcd(a.num_, b.den_);
  Polynomial g2 = gcd(b.num_, a.den_);
  Polynomial an = g1.is_one() ? a.num_ : *a.num_.divide_exact(g1);
  Polynomial bd = g1.is_one() ? b.den_ : *b.den_.divide_exact(g1);
  Polynomial bn = g2.is_one() ? b.num_ : *b.num_.divide_exact(g2);
  Polynomial ad = g2.is_one() ? a.den_ : *a.den_.divide_exact(g2);
  return RationalFn(RationalFn::Raw{}, vars, an * bn, ad * bd);
}

RationalFn RationalFn::inverse() const {
  if (is_zero()) throw DivisionByZero("division by the zero rational function");
  Scalar inv = num_.leading().coef.inverse();
  Polynomial den = num_.scaled(inv);
  return RationalFn(Raw{}, vars_, den_.scaled(inv), den.is_one() ? Polynomial(1) : std::move(den));
}

RationalFn operator/(const RationalFn& a, const RationalFn& b) { return a * b.inverse(); }

RationalFn RationalFn::pow(int exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  auto e = static_cast<unsigned>(exponent);
  return RationalFn(Raw{}, vars_, num_.pow(e), den_.pow(e));
}

RationalFn RationalFn::conj() const {
  // Leading coefficient of den is 1, so conjugation keeps the normalization.
  return RationalFn(Raw{}, vars_, num_.conj(), den_.conj());
}

RationalFn RationalFn::partial(int var) const {
  check_index(var);
  if (!vars_ || vars_->is_param(var) || is_constant()) return RationalFn(Raw{}, vars_, Polynomial{}, Polynomial(1));
  if (den_.is_one()) return RationalFn(Raw{}, vars_, num_.partial(var), Polynomial(1));
  // With den = C*P, C the content in `var`, g = gcd(P, P'), q = P/g and
  // s = P'/g, the derivative is (n'q - n s)/(C q P) and the numerator is
  // coprime to q*P, so only a common factor with C can remain.
  Polynomial content = content_in(den_, var);
  Polynomial prim = content.is_one() ? den_ : *den_.divide_exact(content);
  Polynomial dprim = prim.partial(var);
  if (dprim.is_zero()) return normalized(vars_, num_.partial(var), den_);
  Polynomial g = gcd(prim, dprim);
  Polynomial q = g.is_one() ? prim : *prim.divide_exact(g);
  Polynomial s = g.is_one() ? dprim : *dprim.divide_exact(g);
  Polynomial top = num_.partial(var) * q - num_ * s;
  Polynomial bottom = q * prim;
  if (!content.is_constant()) {
    Polynomial h = gcd(top, content);
    if (!h.is_one()) {
      top = *top.divide_exact(h);
      content = *content.divide_exact(h);
    }
    bottom *= content;
  }
  if (top.is_zero()) return RationalFn(Raw{}, vars_, Polynomial{}, Polynomial(1));
  Scalar inv = bottom.leading().coef.inverse();
  return RationalFn(Raw{}, vars_, top.scaled(inv), bottom.scaled(inv));
}

RationalFn RationalFn::partial(std::string_view name) const {
  if (!vars_) throw UnknownVariable("no variable set");
  auto idx = vars_->find(name);
  if (!idx) throw UnknownVariable("unknown variable '" + std::string(name) + "'");
  return partial(*idx);
}

namespace {

// Substituted values are grouped by denominator; within a group every term of p
// is brought to D^{d} where d is the largest combined degree of p in that group.
struct SubstPlan {
  struct Slot {
    Polynomial num;
    int group = -1;  // -1 for polynomial values
    std::vector<Polynomial> pows{Polynomial(1)};
  };
  struct Group {
    Polynomial den;
    std::vector<Polynomial> pows{Polynomial(1)};
  };
  std::map<int, Slot> slots;
  std::vector<Group> groups;

  static const Polynomial& power(std::vector<Polynomial>& cache, const Polynomial& base, unsigned e) {
    while (cache.size() <= e) cache.push_back(cache.back() * base);
    return cache[e];
  }
  const Polynomial& den_pow(std::size_t g, unsigned e) { return power(groups[g].pows, groups[g].den, e); }

  std::vector<unsigned> group_degrees(const Monomial& m) const {
    std::vector<unsigned> d(groups.size(), 0);
    for (const auto& [v, s] : slots)
      if (s.group >= 0) d[static_cast<std::size_t>(s.group)] += m[v];
    return d;
  }

  Polynomial apply(const Polynomial& p, std::vector<unsigned>& degree) {
    degree.assign(groups.size(), 0);
    for (const auto& t : p.terms()) {
      auto d = group_degrees(t.mono);
      for (std::size_t g = 0; g < d.size(); ++g) degree[g] = std::max(degree[g], d[g]);
    }
    Polynomial sum;
    for (const auto& t : p.terms()) {
      Monomial rest = t.mono;
      Polynomial piece(t.coef);
      for (auto& [v, s] : slots) {
        unsigned e = t.mono[v];
        rest.set(v, 0);
        if (e != 0) piece *= power(s.pows, s.num, e);
      }
      auto d = group_degrees(t.mono);
      for (std::size_t g = 0; g < d.size(); ++g)
        if (degree[g] > d[g]) piece *= den_pow(g, degree[g] - d[g]);
      sum += piece.shifted(rest);
    }
    return sum;
  }
};

}  // namespace

RationalFn RationalFn::substitute(const std::map<int, RationalFn>& assignment) const {
  VarSetPtr vars = vars_;
  SubstPlan plan;
  for (const auto& [v, value] : assignment) {
    check_index(v);
    vars = common_vars(vars, value.vars_);
    SubstPlan::Slot slot;
    slot.num = value.num_;
    if (!value.den_.is_one()) {
      auto it = std::find_if(plan.groups.begin(), plan.groups.end(), [&](const auto& g) { return g.den == value.den_; });
      if (it == plan.groups.end()) {
        plan.groups.push_back({value.den_});
        it = plan.groups.end() - 1;
      }
      slot.group = static_cast<int>(it - plan.groups.begin());
    }
    plan.slots.emplace(v, std::move(slot));
  }
  std::vector<unsigned> dn;
  std::vector<unsigned> dd;
  Polynomial top = plan.apply(num_, dn);
  Polynomial bottom = plan.apply(den_, dd);
  if (bottom.is_zero()) throw PoleError("substitution produces an identically zero denominator");
  for (std::size_t g = 0; g < plan.groups.size(); ++g) {
    if (dd[g] > dn[g]) top *= plan.den_pow(g, dd[g] - dn[g]);
    if (dn[g] > dd[g]) bottom *= plan.den_pow(g, dn[g] - dd[g]);
  }
  // Cancellation against the substituted denominators is the common case;
  // peel those factors off before the general gcd.
  for (const auto& g : plan.groups) {
    while (!top.is_zero()) {
      auto qb = bottom.divide_exact(g.den);
      if (!qb) break;
      auto qt = top.divide_exact(g.den);
      if (!qt) break;
      top = std::move(*qt);
      bottom = std::move(*qb);
    }
  }
  return normalized(vars, std::move(top), std::move(bottom));
}

std::complex<double> RationalFn::eval(std::span<const std::complex<double>> point, double pole_threshold) const {
  if (vars_ && point.size() < static_cast<std::size_t>(vars_->size()))
    throw DimensionMismatch("evaluation point has too few coordinates");
  std::complex<double> d = den_.eval(point);
  if (std::abs(d) <= pole_threshold) throw PoleError("evaluation too close to the denominator zero set");
  return num_.eval(point) / d;
}

std::complex<double> RationalFn::eval(std::span<const double> point, double pole_threshold) const {
  std::vector<std::complex<double>> cpoint(point.begin(), point.end());
  return eval(std::span<const std::complex<double>>(cpoint), pole_threshold);
}

Scalar RationalFn::eval_exact(std::span<const Scalar> point) const {
  if (vars_ && point.size() < static_cast<std::size_t>(vars_->size()))
    throw DimensionMismatch("evaluation point has too few coordinates");
  Scalar d = den_.eval(point);
  if (d.is_zero()) throw PoleError("exact evaluation on the denominator zero set");
  return num_.eval(point) / d;
}

RationalFn::CheckedValue RationalFn::eval_checked(std::span<const Scalar> point, double pole_threshold) const {
  std::vector<std::complex<double>> cpoint;
  cpoint.reserve(point.size());
  for (const auto& s : point) cpoint.push_back(s.to_complex());
  CheckedValue out{eval(std::span<const std::complex<double>>(cpoint), pole_threshold), eval_exact(point), 0.0};
  out.abs_error = std::abs(out.value - out.exact.to_complex());
  return out;
}

bool RationalFn::equal_by_cross_multiplication(const RationalFn& a, const RationalFn& b) {
  return a.num_ * b.den_ == b.num_ * a.den_;
}

std::string to_string(const Polynomial& p, const VarSet* vars) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& t : p.terms()) {
    std::string mono;
    for (int k = 0; k < kMaxVars; ++k) {
      unsigned e = t.mono[k];
      if (e == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars ? vars->name(k) : "v" + std::to_string(k);
      if (e > 1) mono += "^" + std::to_string(e);
    }
    bool negative = false;
    std::string mag;
    const Scalar& c = t.coef;
    if (c.is_real() || sgn(c.re()) == 0) {
      mpq_class v = c.is_real() ? c.re() : c.im();
      negative = sgn(v) < 0;
      mpq_class a = abs(v);
      std::string digits = a.get_str();
      if (c.is_real()) {
        mag = (a == 1 && !mono.empty()) ? "" : digits;
      } else {
        mag = (a == 1) ? "i" : digits + "*i";
      }
    } else {
      mag = c.to_string();
    }
    std::string piece = mag.empty() ? mono : (mono.empty() ? mag : mag + "*" + mono);
    if (first) {
      out << (negative ? "-" : "") << piece;
    } else {
      out << (negative ? " - " : " + ") << piece;
    }
    first = false;
  }
  return out.str();
}

std::string RationalFn::to_string() const {
  const VarSet* vs = vars_.get();
  if (den_.is_one()) return heis::to_string(num_, vs);
  return "(" + heis::to_string(num_, vs) + ")/(" + heis::to_string(den_, vs) + ")";
}

// ---------------------------------------------------------- NumericRational

NumericRational::NumericRational(const RationalFn& f) : num_(compile(f.num())), den_(compile(f.den())) {}

std::vector<NumericRational::Term> NumericRational::compile(const Polynomial& p) {
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    Term c{t.coef.to_complex(), {}};
    for (int k = 0; k < kMaxVars; ++k)
      if (t.mono[k] != 0) c.powers.emplace_back(k, t.mono[k]);
    out.push_back(std::move(c));
  }
  return out;
}

std::complex<double> NumericRational::run(const std::vector<Term>& terms, std::span<const double> point) {
  std::complex<double> sum = 0.0;
  for (const auto& t : terms) {
    double m = 1.0;
    for (auto [k, e] : t.powers) {
      double base = point[static_cast<std::size_t>(k)];
      for (unsigned r = 0; r < e; ++r) m *= base;
    }
    sum += t.coef * m;
  }
  return sum;
}

std::complex<double> NumericRational::operator()(std::span<const double> point, double pole_threshold) const {
  std::complex<double> d = run(den_, point);
  if (std::abs(d) <= pole_threshold) throw PoleError("evaluation too close to the denominator zero set");
  return run(num_, point) / d;
}

double NumericRational::denominator_magnitude(std::span<const double> point) const { return std::abs(run(den_, point)); }

}  // namespace heis

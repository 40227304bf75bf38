#include "heis/polynomial.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>

namespace heis {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::var(int index, unsigned power) {
  Monomial m;
  m.set(index, power);
  return m;
}

void Monomial::set(int index, unsigned power) {
  if (index < 0 || index >= kMaxVars) throw std::out_of_range("monomial variable index out of range");
  if (power > 0xFFFFU) throw std::overflow_error("monomial exponent overflow");
  exps_[static_cast<std::size_t>(index)] = static_cast<std::uint16_t>(power);
}

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (auto e : exps_) d += e;
  return d;
}

bool Monomial::is_one() const {
  return std::all_of(exps_.begin(), exps_.end(), [](auto e) { return e == 0; });
}

bool Monomial::divides(const Monomial& other) const {
  for (std::size_t k = 0; k < exps_.size(); ++k)
    if (exps_[k] > other.exps_[k]) return false;
  return true;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  for (std::size_t k = 0; k < exps_.size(); ++k) {
    unsigned e = unsigned{exps_[k]} + o.exps_[k];
    if (e > 0xFFFFU) throw std::overflow_error("monomial exponent overflow");
    r.exps_[k] = static_cast<std::uint16_t>(e);
  }
  return r;
}

Monomial Monomial::operator/(const Monomial& o) const {
  Monomial r;
  for (std::size_t k = 0; k < exps_.size(); ++k) r.exps_[k] = static_cast<std::uint16_t>(exps_[k] - o.exps_[k]);
  return r;
}

Monomial Monomial::min(const Monomial& o) const {
  Monomial r;
  for (std::size_t k = 0; k < exps_.size(); ++k) r.exps_[k] = std::min(exps_[k], o.exps_[k]);
  return r;
}

// -------------------------------------------------------------- Polynomial

namespace {

bool term_greater(const Polynomial::Term& a, const Polynomial::Term& b) { return a.mono > b.mono; }

// Merge of two sorted term lists, b scaled by `sign` (+1 or -1).
std::vector<Polynomial::Term> merge(const std::vector<Polynomial::Term>& a, const std::vector<Polynomial::Term>& b,
                                    bool subtract) {
  std::vector<Polynomial::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].mono > b[j].mono)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].mono > a[i].mono) {
      out.push_back(subtract ? Polynomial::Term{b[j].mono, -b[j].coef} : b[j]);
      ++j;
    } else {
      Scalar c = subtract ? a[i].coef - b[j].coef : a[i].coef + b[j].coef;
      if (!c.is_zero()) out.push_back({a[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Polynomial::Polynomial(Scalar c) {
  if (!c.is_zero()) terms_.push_back({Monomial{}, std::move(c)});
}

Polynomial Polynomial::var(int index) { return monomial(Monomial::var(index), Scalar(1)); }

Polynomial Polynomial::monomial(const Monomial& m, Scalar c) {
  Polynomial p;
  if (!c.is_zero()) p.terms_.push_back({m, std::move(c)});
  return p;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_greater);
  Polynomial p;
  p.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coef += t.coef;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coef.is_zero()) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coef.is_zero()) p.terms_.pop_back();
  return p;
}

Scalar Polynomial::constant_value() const {
  if (!is_constant()) throw std::logic_error("polynomial is not constant");
  return terms_.empty() ? Scalar(0) : terms_[0].coef;
}

unsigned Polynomial::degree(int var) const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono[var]);
  return d;
}

unsigned Polynomial::lowest_degree(int var) const {
  if (terms_.empty()) return 0;
  unsigned d = terms_[0].mono[var];
  for (const auto& t : terms_) d = std::min(d, t.mono[var]);
  return d;
}

unsigned Polynomial::total_degree() const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree());
  return d;
}

bool Polynomial::is_real() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coef.is_real(); });
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.is_zero()) return *this;
  terms_ = merge(terms_, o.terms_, false);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.is_zero()) return *this;
  terms_ = merge(terms_, o.terms_, true);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.is_constant()) return b.scaled(a.terms_[0].coef);
  if (b.is_constant()) return a.scaled(b.terms_[0].coef);
  if (a.size() == 1) return b.shifted(a.terms_[0].mono).scaled(a.terms_[0].coef);
  if (b.size() == 1) return a.shifted(b.terms_[0].mono).scaled(b.terms_[0].coef);
  std::vector<Polynomial::Term> prod;
  prod.reserve(a.size() * b.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) prod.push_back({s.mono * t.mono, s.coef * t.coef});
  return Polynomial::from_terms(std::move(prod));
}

Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

Polynomial Polynomial::scaled(const Scalar& c) const {
  if (c.is_zero()) return {};
  if (c.is_one()) return *this;
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coef *= c;
  return r;
}

Polynomial Polynomial::shifted(const Monomial& m) const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.mono = t.mono * m;
  return r;
}

Polynomial Polynomial::conj() const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coef = t.coef.conj();
  return r;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial result(1);
  Polynomial base = *this;
  while (exponent != 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent != 0) base *= base;
  }
  return result;
}

Polynomial Polynomial::partial(int var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    unsigned e = t.mono[var];
    if (e == 0) continue;
    Monomial m = t.mono;
    m.set(var, e - 1);
    out.push_back({m, t.coef * Scalar(static_cast<long>(e))});
  }
  // Lowering one exponent preserves the relative order of surviving terms.
  Polynomial r;
  r.terms_ = std::move(out);
  return r;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& divisor) const {
  if (divisor.is_zero()) throw std::domain_error("polynomial division by zero");
  if (is_zero()) return Polynomial{};
  if (divisor.is_constant()) return scaled(divisor.terms_[0].coef.inverse());
  // Every quotient term q satisfies lo <= q <= hi per variable, and
  // q * tail(divisor) >= tail(this) in the term order.
  Monomial hi;
  Monomial lo;
  for (int v = 0; v < kMaxVars; ++v) {
    unsigned dp = degree(v);
    unsigned dd = divisor.degree(v);
    if (dd > dp) return std::nullopt;
    unsigned op = lowest_degree(v);
    unsigned od = divisor.lowest_degree(v);
    if (od > op) return std::nullopt;
    hi.set(v, dp - dd);
    lo.set(v, op - od);
  }
  const Monomial& tail = terms_.back().mono;
  const Monomial& dtail = divisor.terms_.back().mono;
  if (!dtail.divides(tail)) return std::nullopt;
  const Term& lead = divisor.leading();
  Scalar lead_inv = lead.coef.inverse();
  std::vector<Term> quotient;
  // Ordered remainder so each quotient term costs |divisor| updates.
  std::map<Monomial, Scalar, std::greater<>> rem;
  for (const auto& t : terms_) rem.emplace_hint(rem.end(), t.mono, t.coef);
  while (!rem.empty()) {
    auto lt = rem.begin();
    if (!lead.mono.divides(lt->first)) return std::nullopt;
    Term q{lt->first / lead.mono, lt->second * lead_inv};
    if (!q.mono.divides(hi) || !lo.divides(q.mono) || q.mono * dtail < tail) return std::nullopt;
    rem.erase(lt);
    for (std::size_t k = 1; k < divisor.terms_.size(); ++k) {
      const Term& d = divisor.terms_[k];
      Scalar c = d.coef * q.coef;
      auto [it, inserted] = rem.try_emplace(d.mono * q.mono, -c);
      if (!inserted) {
        it->second -= c;
        if (it->second.is_zero()) rem.erase(it);
      }
    }
    quotient.push_back(std::move(q));
  }
  Polynomial r;
  r.terms_ = std::move(quotient);
  return r;
}

Polynomial Polynomial::monic() const {
  if (is_zero() || leading().coef.is_one()) return *this;
  return scaled(leading().coef.inverse());
}

std::vector<Polynomial> Polynomial::coefficients_in(int var) const {
  std::vector<std::vector<Term>> buckets(degree(var) + 1);
  for (const auto& t : terms_) {
    Monomial m = t.mono;
    unsigned e = m[var];
    m.set(var, 0);
    buckets[e].push_back({m, t.coef});
  }
  std::vector<Polynomial> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) {
    // Zeroing the exponent of `var` keeps order inside one degree bucket.
    Polynomial p;
    p.terms_ = std::move(b);
    out.push_back(std::move(p));
  }
  return out;
}

Polynomial Polynomial::from_coefficients(const std::vector<Polynomial>& coeffs, int var) {
  std::vector<Term> all;
  for (std::size_t d = 0; d < coeffs.size(); ++d)
    for (const auto& t : coeffs[d].terms_) all.push_back({t.mono * Monomial::var(var, static_cast<unsigned>(d)), t.coef});
  return from_terms(std::move(all));
}

Scalar Polynomial::eval(std::span<const Scalar> point) const {
  Scalar sum;
  for (const auto& t : terms_) {
    Scalar v = t.coef;
    for (int k = 0; k < kMaxVars; ++k) {
      unsigned e = t.mono[k];
      if (e == 0) continue;
      if (static_cast<std::size_t>(k) >= point.size()) throw std::out_of_range("evaluation point too short");
      v *= heis::pow(point[static_cast<std::size_t>(k)], e);
    }
    sum += v;
  }
  return sum;
}

std::complex<double> Polynomial::eval(std::span<const std::complex<double>> point) const {
  std::complex<double> sum = 0.0;
  for (const auto& t : terms_) {
    std::complex<double> v = t.coef.to_complex();
    for (int k = 0; k < kMaxVars; ++k) {
      unsigned e = t.mono[k];
      if (e == 0) continue;
      if (static_cast<std::size_t>(k) >= point.size()) throw std::out_of_range("evaluation point too short");
      for (unsigned r = 0; r < e; ++r) v *= point[static_cast<std::size_t>(k)];
    }
    sum += v;
  }
  return sum;
}

// --------------------------------------------------------------------- gcd

namespace {

using UPoly = std::vector<Polynomial>;  // dense in the main variable, no trailing zeros

void trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

int deg(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

Polynomial exact(const Polynomial& a, const Polynomial& b) {
  auto q = a.divide_exact(b);
  if (!q) throw std::logic_error("internal: inexact division in gcd");
  return std::move(*q);
}

Polynomial content(const UPoly& p) {
  std::vector<const Polynomial*> order;
  for (const auto& c : p)
    if (!c.is_zero()) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->size() < b->size(); });
  Polynomial g;
  for (const auto* c : order) {
    g = gcd(g, *c);
    if (g.is_one()) break;
  }
  return g;
}

UPoly primitive(UPoly p, const Polynomial& cont) {
  if (cont.is_one()) return p;
  for (auto& c : p)
    if (!c.is_zero()) c = exact(c, cont);
  return p;
}

UPoly prem(const UPoly& a, const UPoly& b) {
  UPoly r = a;
  const int db = deg(b);
  const Polynomial& lcb = b.back();
  int e = deg(a) - db + 1;
  while (!r.empty() && deg(r) >= db) {
    Polynomial lr = r.back();
    const int shift = deg(r) - db;
    if (!lcb.is_one())
      for (auto& c : r) c *= lcb;
    for (int k = 0; k <= db; ++k) r[static_cast<std::size_t>(k + shift)] -= lr * b[static_cast<std::size_t>(k)];
    trim(r);
    --e;
  }
  if (e > 0 && !lcb.is_one()) {
    Polynomial f = lcb.pow(static_cast<unsigned>(e));
    for (auto& c : r) c *= f;
  }
  return r;
}

// Subresultant PRS; inputs primitive, result primitive.
UPoly primitive_gcd(UPoly a, UPoly b) {
  if (deg(a) < deg(b)) std::swap(a, b);
  Polynomial g(1);
  Polynomial h(1);
  while (true) {
    const int delta = deg(a) - deg(b);
    UPoly r = prem(a, b);
    if (r.empty()) break;
    if (deg(r) == 0) return UPoly{Polynomial(1)};
    Polynomial divisor = g * h.pow(static_cast<unsigned>(delta));
    if (!divisor.is_one())
      for (auto& c : r) c = exact(c, divisor);
    a = std::move(b);
    b = std::move(r);
    g = a.back();
    if (delta == 1) {
      h = g;
    } else if (delta > 1) {
      h = exact(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
    }
  }
  return primitive(b, content(b));
}

// Univariate polynomials over Q(i), dense, no trailing zeros.
using SPoly = std::vector<Scalar>;

void trim(SPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

SPoly image(const UPoly& p, std::span<const Scalar> point) {
  SPoly out;
  out.reserve(p.size());
  for (const auto& c : p) out.push_back(c.eval(point));
  trim(out);
  return out;
}

std::size_t univariate_gcd_degree(SPoly a, SPoly b) {
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    Scalar inv = b.back().inverse();
    while (a.size() >= b.size() && !a.empty()) {
      Scalar q = a.back() * inv;
      std::size_t shift = a.size() - b.size();
      for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] -= q * b[k];
      a.pop_back();
      trim(a);
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

// Degree bound from images at integer points: when an image pair with
// nonvanishing leading coefficients is coprime, so are the inputs.
bool images_coprime(const UPoly& a, const UPoly& b) {
  static constexpr long kPoints[3][kMaxVars] = {
      {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53},
      {-3, 4, -5, 6, -7, 8, -9, 10, -11, 12, -13, 14, -15, 16, -17, 18},
      {17, -2, 9, -14, 3, 21, -6, 11, -19, 5, 8, -23, 15, -4, 27, -10},
  };
  for (const auto& row : kPoints) {
    std::vector<Scalar> point(row, row + kMaxVars);
    if (a.back().eval(point).is_zero() || b.back().eval(point).is_zero()) continue;
    return univariate_gcd_degree(image(a, point), image(b, point)) == 0;
  }
  return false;
}

Polynomial monomial_gcd(const Polynomial& mono, const Polynomial& p) {
  Monomial m = mono.leading().mono;
  for (const auto& t : p.terms()) {
    m = m.min(t.mono);
    if (m.is_one()) break;
  }
  return Polynomial::monomial(m, Scalar(1));
}


// Heuristic gcd over Z: evaluate one variable at a large integer, recurse,
// and lift the image gcd back through its base-x digits. Any candidate is
// confirmed by exact division, so a result is always correct; nullopt means
// the heuristic gave up.
namespace heu {

struct Result {
  Polynomial h;
  Polynomial cf;
  Polynomial cg;
};

bool integral(const Polynomial& p) {
  for (const auto& t : p.terms())
    if (!t.coef.is_real() || t.coef.re().get_den() != 1) return false;
  return true;
}

mpz_class max_norm(const Polynomial& p) {
  mpz_class m = 0;
  for (const auto& t : p.terms()) {
    mpz_class v = abs(t.coef.re().get_num());
    if (v > m) m = v;
  }
  return m;
}

mpz_class int_content(const Polynomial& p) {
  mpz_class g = 0;
  for (const auto& t : p.terms()) g = gcd(g, mpz_class(t.coef.re().get_num()));
  return g;
}

Polynomial divide_ground(const Polynomial& p, const mpz_class& c) { return p.scaled(Scalar(mpq_class(1, 1) / mpq_class(c))); }

// Integer primitive part with positive leading coefficient.
Polynomial primitive(const Polynomial& p) {
  if (p.is_zero()) return p;
  mpz_class c = int_content(p);
  if (p.leading().coef.re() < 0) c = -c;
  return divide_ground(p, c);
}

Polynomial eval_at(const Polynomial& p, int var, const mpz_class& x) {
  std::vector<Polynomial::Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    mpz_class f;
    mpz_pow_ui(f.get_mpz_t(), x.get_mpz_t(), t.mono[var]);
    Monomial m = t.mono;
    m.set(var, 0);
    out.push_back({m, t.coef * Scalar(mpq_class(f))});
  }
  return Polynomial::from_terms(std::move(out));
}

// Symmetric residues of every coefficient modulo x.
Polynomial trunc(const Polynomial& p, const mpz_class& x) {
  std::vector<Polynomial::Term> out;
  mpz_class half = x / 2;
  for (const auto& t : p.terms()) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), t.coef.re().get_num_mpz_t(), x.get_mpz_t());
    if (r > half) r -= x;
    if (r != 0) out.push_back({t.mono, Scalar(mpq_class(r))});
  }
  return Polynomial::from_terms(std::move(out));
}

Polynomial interpolate(Polynomial h, const mpz_class& x, int var) {
  Polynomial out;
  unsigned power = 0;
  while (!h.is_zero()) {
    Polynomial g = trunc(h, x);
    out += g.shifted(Monomial::var(var, power));
    h = divide_ground(h - g, x);
    ++power;
  }
  if (!out.is_zero() && out.leading().coef.re() < 0) out = -out;
  return out;
}

int first_var(const Polynomial& a, const Polynomial& b) {
  for (int v = 0; v < kMaxVars; ++v)
    if (a.involves(v) || b.involves(v)) return v;
  return -1;
}

std::optional<Result> gcd(const Polynomial& f0, const Polynomial& g0, int depth) {
  if (f0.is_zero() || g0.is_zero()) return std::nullopt;
  int var = first_var(f0, g0);
  mpz_class cf = int_content(f0);
  mpz_class cg = int_content(g0);
  mpz_class c = ::gcd(cf, cg);
  if (var < 0) {
    mpz_class a = f0.constant_value().re().get_num();
    mpz_class b = g0.constant_value().re().get_num();
    return Result{Polynomial(Scalar(mpq_class(c))), Polynomial(Scalar(mpq_class(a / c))),
                  Polynomial(Scalar(mpq_class(b / c)))};
  }
  Polynomial f = divide_ground(f0, c);
  Polynomial g = divide_ground(g0, c);
  mpz_class fn = max_norm(f);
  mpz_class gn = max_norm(g);
  mpz_class b = 2 * std::min(fn, gn) + 29;
  mpz_class x = std::min(b, mpz_class(99 * mpz_class(sqrt(b))));
  mpz_class lcf = abs(f.leading().coef.re().get_num());
  mpz_class lcg = abs(g.leading().coef.re().get_num());
  x = std::max(x, mpz_class(2 * std::min(mpz_class(fn / lcf), mpz_class(gn / lcg)) + 4));
  auto finish = [&](const Polynomial& h, const Polynomial& qf, const Polynomial& qg) -> std::optional<Result> {
    // Division over Z: every factor must stay integral.
    if (!integral(h) || !integral(qf) || !integral(qg)) return std::nullopt;
    return Result{h.scaled(Scalar(mpq_class(c))), qf, qg};
  };
  for (int attempt = 0; attempt < 6; ++attempt) {
    Polynomial ff = eval_at(f, var, x);
    Polynomial gg = eval_at(g, var, x);
    if (!ff.is_zero() && !gg.is_zero()) {
      if (auto img = gcd(ff, gg, depth + 1)) {
        Polynomial h = primitive(interpolate(img->h, x, var));
        if (!h.is_zero()) {
          if (auto qf = f.divide_exact(h))
            if (auto qg = g.divide_exact(h))
              if (auto r = finish(h, *qf, *qg)) return r;
        }
        Polynomial cff = interpolate(img->cf, x, var);
        if (!cff.is_zero()) {
          if (auto hh = f.divide_exact(cff))
            if (auto qg = g.divide_exact(*hh))
              if (auto r = finish(*hh, cff, *qg)) return r;
        }
        Polynomial cfg = interpolate(img->cg, x, var);
        if (!cfg.is_zero()) {
          if (auto hh = g.divide_exact(cfg))
            if (auto qf = f.divide_exact(*hh))
              if (auto r = finish(*hh, *qf, cfg)) return r;
        }
      }
    }
    mpz_class r = sqrt(mpz_class(sqrt(x)));
    x = 73794 * x * r / 27011;
  }
  return std::nullopt;
}

// Scales a real polynomial to an integer one.
Polynomial clear_denominators(const Polynomial& p) {
  mpz_class l = 1;
  for (const auto& t : p.terms()) l = lcm(l, mpz_class(t.coef.re().get_den()));
  return p.scaled(Scalar(mpq_class(l)));
}

}  // namespace heu

}  // namespace

Polynomial content_in(const Polynomial& p, int var) { return content(p.coefficients_in(var)); }

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  if (a.size() == 1) return monomial_gcd(a, b);
  if (b.size() == 1) return monomial_gcd(b, a);
  if (a == b) return a.monic();
  if (b.size() <= a.size()) {
    if (a.divide_exact(b)) return b.monic();
  } else if (b.divide_exact(a)) {
    return a.monic();
  }

  // Main variable: shared by both with the smallest combined degree; a
  // variable present in only one input is eliminated through contents.
  int var = -1;
  unsigned best = 0;
  for (int v = 0; v < kMaxVars; ++v) {
    unsigned da = a.degree(v);
    unsigned db = b.degree(v);
    if (da == 0 && db == 0) continue;
    if (da == 0) return gcd(a, content_in(b, v));
    if (db == 0) return gcd(content_in(a, v), b);
    if (var < 0 || da + db < best) {
      var = v;
      best = da + db;
    }
  }

  UPoly ua = a.coefficients_in(var);
  UPoly ub = b.coefficients_in(var);
  Polynomial ca = content(ua);
  Polynomial cb = content(ub);
  Polynomial c = gcd(ca, cb);
  ua = primitive(std::move(ua), ca);
  ub = primitive(std::move(ub), cb);
  if (images_coprime(ua, ub)) return c.monic();
  // Evaluation images grow like x^degree, so the heuristic only pays off at
  // moderate degree; beyond that the subresultant sequence is cheaper.
  if (a.is_real() && b.is_real() && std::min(a.total_degree(), b.total_degree()) <= 24) {
    if (auto r = heu::gcd(heu::clear_denominators(a), heu::clear_denominators(b), 0)) return r->h.monic();
  }
  UPoly g = primitive_gcd(std::move(ua), std::move(ub));
  return (c * Polynomial::from_coefficients(g, var)).monic();
}

}  // namespace heis

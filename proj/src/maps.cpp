#include "heis/maps.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "heis/diffop.hpp"
#include "heis/parse.hpp"

namespace heis {

namespace {

std::string idx(std::string_view base, int a) { return std::string(base) + "(" + std::to_string(a) + ")"; }
std::string idx(std::string_view base, int a, int b) {
  return std::string(base) + "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

RationalFn coord(const VarSetPtr& vars, int index) { return RationalFn(vars, Polynomial::var(index)); }

// Contact-form combination D f_{2n+1} + 2 sum_j (f_j D f_{n+j} - f_{n+j} D f_j) for a derivation D.
template <class Derivation>
RationalFn contact_combination(const ContactMap& F, Derivation&& d) {
  int n = F.n();
  RationalFn out = d(F.f(2 * n + 1));
  for (int j = 1; j <= n; ++j) {
    out += RationalFn(2) * (F.f(j) * d(F.f(n + j)) - F.f(n + j) * d(F.f(j)));
  }
  return out;
}

RationalFn lambda_from_t(const ContactMap& F) {
  int t = F.vars()->t();
  return contact_combination(F, [t](const RationalFn& g) { return g.partial(t); });
}

Polynomial lcm(const Polynomial& a, const Polynomial& b) { return *a.divide_exact(gcd(a, b)) * b; }

}  // namespace

ContactMap::ContactMap(std::string name, VarSetPtr vars, std::vector<RationalFn> components, std::string excluded)
    : name_(std::move(name)), vars_(std::move(vars)), f_(std::move(components)), excluded_(std::move(excluded)) {
  if (!vars_) throw std::invalid_argument("contact map needs a variable set");
  if (static_cast<int>(f_.size()) != vars_->coord_count())
    throw DimensionMismatch("map on H^" + std::to_string(vars_->n()) + " needs " +
                            std::to_string(vars_->coord_count()) + " components, got " + std::to_string(f_.size()));
  for (auto& c : f_) {
    c = c + RationalFn(vars_, Polynomial());  // attach the VarSet to constants
    if (c.vars() && *c.vars() != *vars_) throw DimensionMismatch("component over a different variable set");
    if (!c.is_real()) throw std::invalid_argument("map components must be real-valued");
  }
}

const ContactMap& ContactMap::inverse() const {
  if (!inverse_) throw std::logic_error("map " + name_ + " has no inverse attached");
  return *inverse_;
}

void ContactMap::set_inverse(const ContactMap& g) {
  if (*g.vars() != *vars_) throw DimensionMismatch("inverse over a different variable set");
  inverse_ = std::make_shared<const ContactMap>(g);
}

RationalFn ContactMap::pull(const RationalFn& h) const {
  std::map<int, RationalFn> assignment;
  for (int i = 0; i < vars_->coord_count(); ++i) assignment.emplace(i, f_[static_cast<std::size_t>(i)]);
  return h.substitute(assignment);
}

std::vector<double> ContactMap::eval(std::span<const double> coords, std::span<const double> params) const {
  if (static_cast<int>(coords.size()) != vars_->coord_count()) throw DimensionMismatch("point dimension mismatch");
  if (params.size() != vars_->params().size()) throw DimensionMismatch("parameter count mismatch");
  std::vector<double> point(coords.begin(), coords.end());
  point.insert(point.end(), params.begin(), params.end());
  std::vector<double> out;
  out.reserve(f_.size());
  for (const auto& c : f_) out.push_back(c.eval(std::span<const double>(point)).real());
  return out;
}

RationalFn determinant(const RationalMatrix& m) {
  VarSetPtr vars;
  for (const auto& row : m)
    for (const auto& e : row) vars = common_vars(vars, e.vars());
  auto [num, den] = determinant_parts(m);
  return RationalFn(vars, num, den);
}

std::pair<Polynomial, Polynomial> determinant_parts(const RationalMatrix& m) {
  std::size_t size = m.size();
  if (size == 0) return {Polynomial(1), Polynomial(1)};
  for (const auto& row : m)
    if (row.size() != size) throw DimensionMismatch("determinant of a non-square matrix");
  // Clear denominators row by row, then run Bareiss elimination on polynomials.
  std::vector<std::vector<Polynomial>> a(size, std::vector<Polynomial>(size));
  Polynomial scale(1);
  for (std::size_t i = 0; i < size; ++i) {
    Polynomial l(1);
    for (const auto& e : m[i]) l = lcm(l, e.den());
    for (std::size_t j = 0; j < size; ++j) a[i][j] = m[i][j].num() * *l.divide_exact(m[i][j].den());
    scale *= l;
  }
  bool negate = false;
  Polynomial prev(1);
  for (std::size_t k = 0; k + 1 < size; ++k) {
    std::size_t p = k;
    while (p < size && a[p][k].is_zero()) ++p;
    if (p == size) return {Polynomial(), Polynomial(1)};
    if (p != k) {
      std::swap(a[p], a[k]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < size; ++i) {
      for (std::size_t j = k + 1; j < size; ++j) {
        Polynomial v = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        a[i][j] = *v.divide_exact(prev);
      }
      a[i][k] = Polynomial();
    }
    prev = a[k][k];
  }
  Polynomial det = a[size - 1][size - 1];
  if (negate) det = -det;
  return {det, scale};
}

RationalFn determinant_minus(const RationalMatrix& m, const RationalFn& f) {
  auto [num, den] = determinant_parts(m);
  if (num * f.den() == f.num() * den) return RationalFn(f.vars(), Polynomial());
  return RationalFn(f.vars(), num, den) - f;
}

RationalFn lambda(const ContactMap& F) {
  RationalFn lam = lambda_from_t(F);
  const VarSet& v = *F.vars();
  for (int j = 1; j <= F.n(); ++j) {
    RationalFn cx = contact_combination(F, [&](const RationalFn& g) { return g.partial(v.x(j)); });
    RationalFn cy = contact_combination(F, [&](const RationalFn& g) { return g.partial(v.y(j)); });
    if (cx != RationalFn(-2) * coord(F.vars(), v.y(j)) * lam || cy != RationalFn(2) * coord(F.vars(), v.x(j)) * lam)
      throw NotContact("pullback of the contact form is not a multiple of it for map " + F.name());
  }
  return lam;
}

Report is_contact(const ContactMap& F) {
  Report r("is_contact");
  r.with("map", F.name()).with("n", std::to_string(F.n()));
  for (int k = 1; k <= 2 * F.n(); ++k) {
    DiffOp xk = op_horizontal(F.vars(), k);
    r.add_symbolic(idx("contact.X", k), contact_combination(F, [&](const RationalFn& g) { return xk.apply(g); }));
  }
  r.add_flag("lambda.nonzero", !lambda_from_t(F).is_zero());
  return r;
}

HorizontalMatrix horizontal_jacobian(const ContactMap& F) {
  int n = F.n();
  HorizontalMatrix m;
  m.n = n;
  m.entries.assign(static_cast<std::size_t>(2 * n), std::vector<RationalFn>(static_cast<std::size_t>(2 * n)));
  for (int k = 1; k <= 2 * n; ++k) {
    DiffOp xk = op_horizontal(F.vars(), k);
    for (int mi = 1; mi <= 2 * n; ++mi)
      m.entries[static_cast<std::size_t>(mi - 1)][static_cast<std::size_t>(k - 1)] = xk.apply(F.f(mi));
  }
  return m;
}

RationalMatrix coordinate_jacobian(const ContactMap& F) {
  int size = F.vars()->coord_count();
  RationalMatrix m(static_cast<std::size_t>(size), std::vector<RationalFn>(static_cast<std::size_t>(size)));
  for (int i = 0; i < size; ++i)
    for (int a = 0; a < size; ++a)
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] = F.f(i + 1).partial(a);
  return m;
}

namespace {

// Counts grid points (over all parameter samples) where lambda is not positive.
std::pair<long, long> positivity_scan(const ContactMap& F, const RationalFn& lam, const PositivityOptions& opts,
                                      long& total) {
  NumericRational num(lam);
  int dims = F.vars()->coord_count();
  int params = static_cast<int>(F.vars()->params().size());
  int axis = std::max(opts.points_per_axis, 1);
  long grid = 1;
  for (int d = 0; d < dims; ++d) grid *= axis;
  long combos = 1;
  for (int p = 0; p < params; ++p) combos *= static_cast<long>(opts.param_samples.size());
  total = grid * combos;

  auto value_at = [&](int i) {
    return axis == 1 ? 0.0 : -opts.half_width + 2.0 * opts.half_width * i / (axis - 1);
  };
  std::atomic<long> bad{0};
  std::atomic<long> excluded{0};
  auto work = [&](long begin, long end) {
    std::vector<double> point(static_cast<std::size_t>(dims + params));
    for (long idx = begin; idx < end; ++idx) {
      long rest = idx;
      for (int d = 0; d < dims; ++d) {
        point[static_cast<std::size_t>(d)] = value_at(static_cast<int>(rest % axis));
        rest /= axis;
      }
      for (int p = 0; p < params; ++p) {
        auto s = static_cast<long>(opts.param_samples.size());
        point[static_cast<std::size_t>(dims + p)] = opts.param_samples[static_cast<std::size_t>(rest % s)];
        rest /= s;
      }
      if (num.denominator_magnitude(point) < opts.exclusion_threshold) {
        ++excluded;
        continue;
      }
      if (!(num.real(point, 0.0) > 0.0)) ++bad;
    }
  };
  int jobs = std::max(1, opts.jobs);
  if (jobs == 1) {
    work(0, total);
  } else {
    std::vector<std::thread> pool;
    long chunk = (total + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(work, std::min(total, j * chunk), std::min(total, (j + 1) * chunk));
    for (auto& th : pool) th.join();
  }
  return {bad.load(), excluded.load()};
}

}  // namespace

namespace {

Scalar scalar_det(std::vector<std::vector<Scalar>> a) {
  std::size_t size = a.size();
  Scalar det(1);
  for (std::size_t k = 0; k < size; ++k) {
    std::size_t p = k;
    while (p < size && a[p][k].is_zero()) ++p;
    if (p == size) return Scalar(0);
    if (p != k) {
      std::swap(a[p], a[k]);
      det = -det;
    }
    det *= a[k][k];
    Scalar inv = a[k][k].inverse();
    for (std::size_t i = k + 1; i < size; ++i) {
      Scalar factor = a[i][k] * inv;
      if (factor.is_zero()) continue;
      for (std::size_t j = k; j < size; ++j) a[i][j] -= factor * a[k][j];
    }
  }
  return det;
}

// When M^T M = lambda I holds exactly, det(M)^2 = lambda^{2n} in the integral
// domain of rational functions, so det M = +-lambda^n and one exact evaluation
// at a point with lambda != 0 fixes the sign. Returns det M - lambda^n.
RationalFn signed_power_residual(const RationalMatrix& m, const RationalFn& lam, int n) {
  const VarSetPtr& vars = lam.vars();
  int size = vars ? vars->size() : 0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Scalar> point;
    for (int i = 0; i < size; ++i)
      point.emplace_back(mpq_class((attempt * 7 + i * 3) % 11 + 1, (i + attempt) % 3 + 2));
    try {
      Scalar l = lam.eval_exact(point);
      if (l.is_zero()) continue;
      std::vector<std::vector<Scalar>> a;
      for (const auto& row : m) {
        a.emplace_back();
        for (const auto& e : row) a.back().push_back(e.eval_exact(point));
      }
      Scalar ratio = scalar_det(a) / pow(l, static_cast<unsigned>(n));
      if (ratio == Scalar(1)) return RationalFn(vars, Polynomial());
      if (ratio == Scalar(-1)) return RationalFn(-2) * lam.pow(n);
      break;  // neither sign: the premise is broken, decide symbolically
    } catch (const PoleError&) {
    }
  }
  return determinant_minus(m, lam.pow(n));
}

// Coordinate Jacobian determinant minus lambda^{n+1}. Multiplying the Jacobian by
// the unit-triangular frame changes at p and F(p) gives [[M, T f], [c, lambda]]
// where c holds the contact residuals; when c = 0 the determinant is lambda det M.
RationalFn jacobian_residual(const ContactMap& F, const HorizontalMatrix& m, const RationalFn& lam,
                             const RationalFn& j0_residual) {
  int n = F.n();
  RationalMatrix k(static_cast<std::size_t>(2 * n + 1), std::vector<RationalFn>(static_cast<std::size_t>(2 * n + 1)));
  bool contact = true;
  for (int col = 1; col <= 2 * n; ++col) {
    DiffOp xk = op_horizontal(F.vars(), col);
    RationalFn c = contact_combination(F, [&](const RationalFn& g) { return xk.apply(g); });
    contact = contact && c.is_zero();
    k[static_cast<std::size_t>(2 * n)][static_cast<std::size_t>(col - 1)] = c;
    for (int row = 1; row <= 2 * n; ++row)
      k[static_cast<std::size_t>(row - 1)][static_cast<std::size_t>(col - 1)] = m(row, col);
  }
  if (contact) return lam * j0_residual;
  int t = F.vars()->t();
  for (int row = 1; row <= 2 * n; ++row) k[static_cast<std::size_t>(row - 1)][static_cast<std::size_t>(2 * n)] = F.f(row).partial(t);
  k[static_cast<std::size_t>(2 * n)][static_cast<std::size_t>(2 * n)] = lam;
  return determinant_minus(k, lam.pow(n + 1));
}

}  // namespace

Report is_conformal(const ContactMap& F, const PositivityOptions& opts) {
  Report r("is_conformal");
  int n = F.n();
  r.with("map", F.name()).with("n", std::to_string(n));
  r.absorb(is_contact(F));
  RationalFn lam = lambda_from_t(F);
  HorizontalMatrix m = horizontal_jacobian(F);
  for (int a = 1; a <= 2 * n; ++a) {
    for (int b = a; b <= 2 * n; ++b) {
      RationalFn s;
      for (int k = 1; k <= 2 * n; ++k) s += m(k, a) * m(k, b);
      if (a == b) s -= lam;
      r.add_symbolic(idx("MtM", a, b), s);
    }
  }
  bool mtm_exact = true;
  for (const auto& res : r.residuals())
    if (res.id.rfind("MtM", 0) == 0) mtm_exact = mtm_exact && res.ok;
  RationalFn j0 = mtm_exact ? signed_power_residual(m.entries, lam, n) : determinant_minus(m.entries, lam.pow(n));
  r.add_symbolic("J0-lambda^n", j0);
  r.add_symbolic("J-lambda^(n+1)", jacobian_residual(F, m, lam, j0));
  long total = 0;
  auto [bad, excluded] = positivity_scan(F, lam, opts, total);
  r.add_numeric("lambda>0", static_cast<double>(bad), 0.0,
                std::to_string(total - excluded) + " samples, " + std::to_string(excluded) + " excluded");
  return r;
}

Report cr_check(const ContactMap& F) {
  Report r("cr_check");
  int n = F.n();
  r.with("map", F.name()).with("n", std::to_string(n));
  for (int k = 1; k <= n; ++k) {
    RationalFn fk = F.f(k) + RationalFn(Scalar::i()) * F.f(n + k);
    for (int l = 1; l <= n; ++l) r.add_symbolic(idx("Zbar", l, k), op_Zbar(F.vars(), l).apply(fk));
  }
  return r;
}

Report lambda_nu_check(const ContactMap& F) {
  Report r("lambda_nu_check");
  int n = F.n();
  r.with("map", F.name()).with("n", std::to_string(n));
  RationalFn lam = lambda_from_t(F);
  HorizontalMatrix m = horizontal_jacobian(F);
  for (int nu = 1; nu <= n; ++nu) {
    RationalFn s;
    for (int j = 1; j <= n; ++j) s += m(n + j, n + nu) * m(j, nu) - m(j, n + nu) * m(n + j, nu);
    r.add_symbolic(idx("lambda.nu", nu), s - lam);
  }
  return r;
}

Report inverse_identities(const ContactMap& F) {
  Report r("inverse_identities");
  int n = F.n();
  r.with("map", F.name()).with("n", std::to_string(n));
  if (!F.has_inverse()) {
    r.add_flag("inverse.available", false, "no closed-form inverse attached");
    return r;
  }
  const ContactMap& G = F.inverse();
  for (int i = 1; i <= 2 * n + 1; ++i) r.add_symbolic(idx("GoF", i), F.pull(G.f(i)) - coord(F.vars(), i - 1));
  RationalFn lam = lambda_from_t(F);
  r.add_symbolic("lambdaG.F*lambdaF-1", F.pull(lambda_from_t(G)) * lam - RationalFn(1));
  HorizontalMatrix mf = horizontal_jacobian(F);
  HorizontalMatrix mg = horizontal_jacobian(G);
  RationalFn inv = lam.inverse();
  for (int k = 1; k <= 2 * n; ++k)
    for (int l = 1; l <= 2 * n; ++l) r.add_symbolic(idx("Xg.F", l, k), F.pull(mg(k, l)) - inv * mf(l, k));
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l) r.add_symbolic(idx("Xf.sym", k, l), mf(l, k) - mf(n + l, n + k));
  return r;
}

ContactMap compose_maps(const ContactMap& F, const ContactMap& G) {
  if (*F.vars() != *G.vars()) throw DimensionMismatch("compose_maps: maps over different variable sets");
  std::vector<RationalFn> comps;
  for (const auto& c : F.components()) comps.push_back(G.pull(c));
  std::string excluded = G.excluded();
  if (!F.excluded().empty()) {
    if (!excluded.empty()) excluded += "; ";
    excluded += "preimage under " + G.name() + " of {" + F.excluded() + "}";
  }
  ContactMap out(F.name() + " o " + G.name(), F.vars(), std::move(comps), excluded);
  if (F.has_inverse() && G.has_inverse()) {
    const ContactMap& gi = G.inverse();
    const ContactMap& fi = F.inverse();
    std::vector<RationalFn> inv;
    for (const auto& c : gi.components()) inv.push_back(fi.pull(c));
    out.set_inverse(ContactMap(gi.name() + " o " + fi.name(), F.vars(), std::move(inv)));
  }
  return out;
}

Report composition_check(const ContactMap& F, const ContactMap& G) {
  Report r("composition_check");
  r.with("outer", F.name()).with("inner", G.name());
  ContactMap fg = compose_maps(F, G);
  r.add_symbolic("lambda.multiplicative", lambda_from_t(fg) - G.pull(lambda_from_t(F)) * lambda_from_t(G));
  return r;
}

namespace corpus {

ContactMap identity(const VarSetPtr& vars) {
  std::vector<RationalFn> comps;
  for (int i = 0; i < vars->coord_count(); ++i) comps.push_back(coord(vars, i));
  ContactMap out("identity", vars, comps);
  out.set_inverse(ContactMap("identity", vars, comps));
  return out;
}

namespace {

ContactMap left_translation(const VarSetPtr& vars, const Point<Scalar>& q, const std::string& name) {
  int n = vars->n();
  if (q.n() != n) throw DimensionMismatch("translation point has the wrong dimension");
  std::vector<RationalFn> xs;
  std::vector<RationalFn> ys;
  std::vector<RationalFn> qx;
  std::vector<RationalFn> qy;
  for (int j = 1; j <= n; ++j) {
    xs.push_back(coord(vars, vars->x(j)));
    ys.push_back(coord(vars, vars->y(j)));
    qx.emplace_back(q.x[static_cast<std::size_t>(j - 1)]);
    qy.emplace_back(q.y[static_cast<std::size_t>(j - 1)]);
  }
  Point<RationalFn> p(xs, ys, coord(vars, vars->t()));
  Point<RationalFn> image = group_mul(Point<RationalFn>(qx, qy, RationalFn(q.t)), p);
  return ContactMap(name, vars, image.coords());
}

std::string point_text(const Point<Scalar>& q) {
  std::string s;
  for (const auto& c : q.coords()) s += (s.empty() ? "" : ";") + c.to_string();
  return s;
}

}  // namespace

ContactMap translation(const VarSetPtr& vars, const Point<Scalar>& q) {
  Point<Scalar> qi = group_inv(q);
  ContactMap out = left_translation(vars, q, "translation[" + point_text(q) + "]");
  out.set_inverse(left_translation(vars, qi, "translation[" + point_text(qi) + "]"));
  return out;
}

ContactMap dilation(const VarSetPtr& vars, const RationalFn& r) {
  if (r.is_zero()) throw std::invalid_argument("dilation factor must be nonzero");
  auto build = [&](const RationalFn& s) {
    std::vector<RationalFn> comps;
    for (int i = 0; i < 2 * vars->n(); ++i) comps.push_back(s * coord(vars, i));
    comps.push_back(s * s * coord(vars, vars->t()));
    std::string label = s.is_constant() ? s.to_string() : "(" + s.to_string() + ")";
    return ContactMap("dilation[" + label + "]", vars, comps, s.is_constant() ? "" : "parameter values with " + s.to_string() + " = 0");
  };
  ContactMap out = build(r);
  out.set_inverse(build(r.inverse()));
  return out;
}

namespace {

using Matrix = std::vector<std::vector<Scalar>>;

ContactMap unitary_map(const VarSetPtr& vars, const Matrix& U, const std::string& name) {
  int n = vars->n();
  std::vector<RationalFn> comps(static_cast<std::size_t>(2 * n + 1));
  for (int k = 0; k < n; ++k) {
    RationalFn re;
    RationalFn im;
    for (int j = 0; j < n; ++j) {
      const Scalar& u = U[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
      RationalFn a(u.re());
      RationalFn b(u.im());
      RationalFn x = coord(vars, vars->x(j + 1));
      RationalFn y = coord(vars, vars->y(j + 1));
      re += a * x - b * y;
      im += b * x + a * y;
    }
    comps[static_cast<std::size_t>(k)] = re;
    comps[static_cast<std::size_t>(n + k)] = im;
  }
  comps.back() = coord(vars, vars->t());
  return ContactMap(name, vars, comps);
}

}  // namespace

ContactMap rotation(const VarSetPtr& vars, const Matrix& U) {
  auto n = static_cast<std::size_t>(vars->n());
  if (U.size() != n) throw DimensionMismatch("rotation matrix has the wrong size");
  for (const auto& row : U)
    if (row.size() != n) throw DimensionMismatch("rotation matrix has the wrong size");
  Matrix adj(n, std::vector<Scalar>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) adj[i][j] = U[j][i].conj();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Scalar s;
      for (std::size_t k = 0; k < n; ++k) s = s + adj[i][k] * U[k][j];
      if (s != Scalar(i == j ? 1 : 0)) throw std::invalid_argument("rotation matrix is not unitary");
    }
  }
  ContactMap out = unitary_map(vars, U, "rotation");
  out.set_inverse(unitary_map(vars, adj, "rotation^-1"));
  return out;
}

ContactMap inversion(const VarSetPtr& vars) {
  int n = vars->n();
  RationalFn rho;
  for (int j = 1; j <= n; ++j) {
    RationalFn x = coord(vars, vars->x(j));
    RationalFn y = coord(vars, vars->y(j));
    rho += x * x + y * y;
  }
  RationalFn t = coord(vars, vars->t());
  RationalFn d = rho * rho + t * t;
  std::vector<RationalFn> comps(static_cast<std::size_t>(2 * n + 1));
  for (int j = 1; j <= n; ++j) {
    RationalFn x = coord(vars, vars->x(j));
    RationalFn y = coord(vars, vars->y(j));
    comps[static_cast<std::size_t>(j - 1)] = (y * t - x * rho) / d;
    comps[static_cast<std::size_t>(n + j - 1)] = -(y * rho + x * t) / d;
  }
  comps.back() = -t / d;
  ContactMap out("inversion", vars, comps, "origin (|z|^4 + t^2 = 0)");
  out.set_inverse(ContactMap("inversion", vars, comps, "origin (|z|^4 + t^2 = 0)"));
  return out;
}

Matrix default_unitary(int n) {
  Scalar a(mpq_class(3, 5));
  Scalar b(mpq_class(4, 5));
  Matrix u(static_cast<std::size_t>(n), std::vector<Scalar>(static_cast<std::size_t>(n)));
  int j = 0;
  for (; j + 1 < n; j += 2) {
    auto s = static_cast<std::size_t>(j);
    u[s][s] = a;
    u[s][s + 1] = b;
    u[s + 1][s] = -b * Scalar::i();
    u[s + 1][s + 1] = a * Scalar::i();
  }
  if (j < n) u[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = a + b * Scalar::i();
  return u;
}

Point<Scalar> default_translation(int n) {
  std::vector<Scalar> x;
  std::vector<Scalar> y;
  for (int j = 1; j <= n; ++j) {
    x.emplace_back(j);
    y.emplace_back(mpq_class(-1, 2));
  }
  return Point<Scalar>(x, y, Scalar(mpq_class(1, 3)));
}

const std::vector<std::string>& names() {
  static const std::vector<std::string> all{"identity", "translation", "dilation", "rotation", "inversion"};
  return all;
}

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

ContactMap by_name(std::string_view spec, int n) {
  std::string_view name = spec.substr(0, spec.find(':'));
  std::map<std::string, std::string> options;
  if (name.size() < spec.size()) {
    for (const auto& item : split(spec.substr(name.size() + 1), ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("map option without '=': " + item);
      options[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = options.find(key);
    if (it == options.end()) return std::nullopt;
    std::string v = it->second;
    options.erase(it);
    return v;
  };
  auto finish = [&](ContactMap m) {
    if (!options.empty()) throw std::invalid_argument("unknown option '" + options.begin()->first + "' for map " + std::string(name));
    return m;
  };
  if (name == "identity") return finish(identity(make_varset(n)));
  if (name == "inversion") return finish(inversion(make_varset(n)));
  if (name == "rotation") return finish(rotation(make_varset(n), default_unitary(n)));
  if (name == "translation") {
    Point<Scalar> q = default_translation(n);
    if (auto text = take("q")) {
      std::vector<Scalar> c;
      for (const auto& part : split(*text, ';')) c.push_back(Scalar::from_string(part));
      if (static_cast<int>(c.size()) != 2 * n + 1) throw DimensionMismatch("translation point needs 2n+1 coordinates");
      q = Point<Scalar>::from_coords(c);
    }
    return finish(translation(make_varset(n), q));
  }
  if (name == "dilation") {
    if (auto text = take("r")) return finish(dilation(make_varset(n), RationalFn(Scalar::from_string(*text))));
    auto vars = make_varset(n, {"r"});
    return finish(dilation(vars, RationalFn::var(vars, "r")));
  }
  throw std::invalid_argument("unknown corpus map '" + std::string(name) + "'");
}

}  // namespace corpus

ContactMap contact_completion(const VarSetPtr& vars, const std::vector<RationalFn>& horizontal, std::string name) {
  int n = vars->n();
  if (static_cast<int>(horizontal.size()) != 2 * n) throw DimensionMismatch("horizontal part needs 2n components");
  for (const auto& h : horizontal)
    if (!h.is_polynomial() || h.num().involves(vars->t()))
      throw std::invalid_argument("horizontal part must be t-independent polynomials");
  auto hf = [&](int k) { return horizontal[static_cast<std::size_t>(k - 1)]; };
  // Symplectic factor from the (x1, y1) plane.
  RationalFn mu;
  for (int j = 1; j <= n; ++j)
    mu += hf(j).partial(vars->x(1)) * hf(n + j).partial(vars->y(1)) - hf(j).partial(vars->y(1)) * hf(n + j).partial(vars->x(1));
  if (!mu.is_constant()) throw std::invalid_argument("horizontal part has a non-constant symplectic factor");
  // Integrate the closed 1-form beta along rays from the origin.
  Polynomial h;
  for (int k = 1; k <= 2 * n; ++k) {
    int c = vars->horizontal(k);
    RationalFn w = k <= n ? RationalFn(2) * coord(vars, vars->y(k)) : RationalFn(-2) * coord(vars, vars->x(k - n));
    RationalFn beta = -mu * w;
    for (int j = 1; j <= n; ++j) beta -= RationalFn(2) * (hf(j) * hf(n + j).partial(c) - hf(n + j) * hf(j).partial(c));
    for (const auto& term : beta.num().terms()) {
      unsigned deg = 0;
      for (int i = 0; i < vars->coord_count(); ++i) deg += term.mono[i];
      h += Polynomial::monomial(term.mono * Monomial::var(c), term.coef * Scalar(mpq_class(1, deg + 1)));
    }
  }
  std::vector<RationalFn> comps(horizontal);
  comps.push_back(mu * coord(vars, vars->t()) + RationalFn(vars, h));
  ContactMap out(std::move(name), vars, std::move(comps));
  if (!is_contact(out).pass()) throw std::invalid_argument("horizontal part admits no contact completion");
  return out;
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

ContactMap parse_map_spec(std::string_view text) {
  struct Entry {
    std::string value;
    std::size_t pos;
  };
  std::map<std::string, Entry> entries;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string line = trim(text.substr(offset, end - offset));
    if (!line.empty() && line[0] != '#') {
      auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError("expected 'key = value'", offset);
      std::string key = trim(std::string_view(line).substr(0, eq));
      if (key.empty()) throw ParseError("empty key", offset);
      if (entries.count(key)) throw ParseError("duplicate key '" + key + "'", offset);
      entries[key] = Entry{trim(std::string_view(line).substr(eq + 1)), offset};
    }
    offset = end + 1;
  }
  auto it = entries.find("n");
  if (it == entries.end()) throw ParseError("missing key 'n'", 0);
  int n = 0;
  const std::string& nv = it->second.value;
  auto [p, ec] = std::from_chars(nv.data(), nv.data() + nv.size(), n);
  if (ec != std::errc() || p != nv.data() + nv.size() || n < 1) throw ParseError("n must be a positive integer", it->second.pos);

  auto component_key = [](char prefix, int i) { return std::string(1, prefix) + std::to_string(i); };
  std::vector<std::string> params;
  for (const auto& [key, e] : entries) {
    bool expr = false;
    for (int i = 1; i <= 2 * n + 1; ++i) expr = expr || key == component_key('f', i) || key == component_key('g', i);
    if (expr) {
      for (auto& name : collect_parameters(e.value, n))
        if (std::find(params.begin(), params.end(), name) == params.end()) params.push_back(name);
    } else if (key != "n" && key != "name" && key != "excluded") {
      throw ParseError("unknown key '" + key + "'", e.pos);
    }
  }
  VarSetPtr vars = make_varset(n, params);
  auto read = [&](char prefix) {
    std::vector<RationalFn> out;
    for (int i = 1; i <= 2 * n + 1; ++i) {
      auto found = entries.find(component_key(prefix, i));
      if (found == entries.end()) {
        if (prefix == 'g' && i == 1) return out;
        throw ParseError("missing component " + component_key(prefix, i), text.size());
      }
      try {
        out.push_back(parse_rational(found->second.value, vars));
      } catch (const ParseError& e) {
        throw ParseError(component_key(prefix, i) + ": " + e.what(), found->second.pos);
      }
    }
    return out;
  };
  std::vector<RationalFn> f = read('f');
  std::vector<RationalFn> g = read('g');
  std::string name = entries.count("name") ? entries["name"].value : "map";
  std::string excluded = entries.count("excluded") ? entries["excluded"].value : "";
  try {
    ContactMap out(name, vars, f, excluded);
    if (!g.empty()) out.set_inverse(ContactMap(name + "^-1", vars, g));
    return out;
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
}

ContactMap load_map_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read map spec " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_map_spec(buf.str());
}

}  // namespace heis

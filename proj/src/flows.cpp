#include "heis/flows.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "heis/diffop.hpp"
#include "heis/ode.hpp"

namespace heis {

namespace {

std::size_t sz(int k) { return static_cast<std::size_t>(k); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string point_text(std::span<const double> p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.size(); ++i) out += (i ? "," : "") + fmt(p[i]);
  return out + ")";
}

// Runs body(i) for i in [0, count) on up to `jobs` threads.
template <class Body>
void parallel_for(std::size_t count, int jobs, Body&& body) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) body(i);
  };
  int threads = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
  if (threads == 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (int j = 0; j < threads; ++j) pool.emplace_back(worker);
}

RationalFn lift(const VarSetPtr& vars, const RationalFn& f) { return RationalFn(vars, f.num(), f.den()); }

}  // namespace

void FlowConfig::validate() const {
  if (!(step > 0) || !(fd_step > 0) || !(tolerance > 0) || !(box_half > 0))
    throw std::invalid_argument("step, fd_step, tolerance and box must be positive");
  if (!(s_max >= 0)) throw std::invalid_argument("s_max must be nonnegative");
  if (bound_slack < 0 || contact_tolerance < 0) throw std::invalid_argument("slack and contact tolerance must be nonnegative");
  if (sample_stride < 1) throw std::invalid_argument("sample stride must be at least 1");
}

std::string traces_to_csv(const std::vector<FlowTrace>& traces, int n) {
  std::ostringstream out;
  out << "trace,s";
  for (int j = 1; j <= n; ++j) out << ",x" << j;
  for (int j = 1; j <= n; ++j) out << ",y" << j;
  out << ",t,K_meas,K_bound,contact_residual\n";
  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (const auto& smp : traces[i].samples) {
      out << i << ',' << fmt(smp.s);
      for (double c : smp.point) out << ',' << fmt(c);
      out << ',' << fmt(smp.distortion) << ',' << fmt(smp.bound) << ',' << fmt(smp.contact_residual) << '\n';
    }
  }
  return out.str();
}

// ------------------------------------------------------------ conformal flow

std::vector<double> conformal_flow(const ContactMap& F, const LieVector<double>& W, std::span<const double> p, double s,
                                   std::span<const double> params) {
  if (!F.has_inverse()) throw std::invalid_argument("conformal flow needs a closed-form inverse for " + F.name());
  if (W.n() != F.n()) throw DimensionMismatch("Lie vector and map dimensions differ");
  std::vector<double> fp = F.eval(p, params);
  LieVector<double> sw = W;
  for (auto& v : sw.a) v *= s;
  for (auto& v : sw.b) v *= s;
  sw.c *= s;
  Point<double> q = group_mul(exp(sw), Point<double>::from_coords(std::span<const double>(fp)));
  std::vector<double> qc = q.coords();
  return F.inverse().eval(qc, params);
}

std::vector<std::vector<double>> default_rivf_points(int n) {
  std::vector<std::vector<double>> pts(3);
  for (int j = 0; j < n; ++j) {
    pts[0].push_back(1.0);
    pts[1].push_back(0.5 - 0.25 * j);
    pts[2].push_back(-1.25);
  }
  for (int j = 0; j < n; ++j) {
    pts[0].push_back(0.0);
    pts[1].push_back(-0.75);
    pts[2].push_back(0.5 + 0.125 * j);
  }
  pts[0].push_back(1.0);
  pts[1].push_back(0.25);
  pts[2].push_back(-0.6);
  return pts;
}

LieVector<Scalar> basis_vector(std::string_view name, int n) {
  LieVector<Scalar> w{std::vector<Scalar>(sz(n)), std::vector<Scalar>(sz(n)), Scalar(0)};
  if (name == "T") {
    w.c = Scalar(1);
    return w;
  }
  if (name.size() >= 2 && (name[0] == 'X' || name[0] == 'Y')) {
    int j = 0;
    for (char ch : name.substr(1)) {
      if (ch < '0' || ch > '9') throw std::invalid_argument("unknown Lie vector '" + std::string(name) + "'");
      j = j * 10 + (ch - '0');
      if (j > n) break;
    }
    if (j >= 1 && j <= n) {
      (name[0] == 'X' ? w.a : w.b)[sz(j - 1)] = Scalar(1);
      return w;
    }
  }
  throw std::invalid_argument("unknown Lie vector '" + std::string(name) + "' for n = " + std::to_string(n));
}

std::string lie_vector_name(const LieVector<Scalar>& W) {
  std::string out;
  auto term = [&](const Scalar& c, const std::string& name) {
    if (c.is_zero()) return;
    if (!out.empty()) out += " + ";
    out += c.is_one() ? name : "(" + c.to_string() + ")" + name;
  };
  for (int j = 0; j < W.n(); ++j) term(W.a[sz(j)], "X" + std::to_string(j + 1));
  for (int j = 0; j < W.n(); ++j) term(W.b[sz(j)], "Y" + std::to_string(j + 1));
  term(W.c, "T");
  return out.empty() ? "0" : out;
}

Report rivf_check(const ContactMap& F, const LieVector<Scalar>& W, const std::vector<std::vector<double>>& points,
                  const FlowConfig& cfg, std::span<const double> params) {
  cfg.validate();
  Report r("rivf_check");
  int n = F.n();
  r.with("map", F.name()).with("n", std::to_string(n)).with("W", lie_vector_name(W));
  r.with("fd_step", fmt(cfg.fd_step)).with("tol", fmt(cfg.tolerance));
  if (!F.has_inverse()) {
    r.add_flag("inverse.available", false, "no closed-form inverse attached");
    return r;
  }
  if (W.n() != n) throw DimensionMismatch("Lie vector and map dimensions differ");
  if (params.size() != F.vars()->params().size())
    throw DimensionMismatch("map " + F.name() + " needs " + std::to_string(F.vars()->params().size()) + " parameter values");
  const ContactMap& G = F.inverse();

  // H(p, s) with s as an extra formal parameter
  std::vector<std::string> names = F.vars()->params();
  names.push_back("flow_s");
  VarSetPtr vs = make_varset(n, names);
  RationalFn s = RationalFn::var(vs, "flow_s");
  std::vector<RationalFn> ws_x;
  std::vector<RationalFn> ws_y;
  std::vector<RationalFn> fx;
  std::vector<RationalFn> fy;
  for (int j = 1; j <= n; ++j) {
    ws_x.push_back(RationalFn(W.a[sz(j - 1)]) * s);
    ws_y.push_back(RationalFn(W.b[sz(j - 1)]) * s);
    fx.push_back(lift(vs, F.f(j)));
    fy.push_back(lift(vs, F.f(n + j)));
  }
  Point<RationalFn> q = group_mul(Point<RationalFn>(ws_x, ws_y, RationalFn(W.c) * s),
                                  Point<RationalFn>(fx, fy, lift(vs, F.f(2 * n + 1))));
  std::map<int, RationalFn> sub;
  std::vector<RationalFn> qc = q.coords();
  for (int i = 0; i < 2 * n + 1; ++i) sub[i] = qc[sz(i)];
  std::vector<RationalFn> h;
  for (int l = 1; l <= 2 * n; ++l) h.push_back(lift(vs, G.f(l)).substitute(sub));

  // W~ = sum a_j X~_j + b_j Y~_j + c T on the original variables
  const VarSetPtr& base = F.vars();
  DiffOp wt = RationalFn(W.c) * op_T(base);
  for (int j = 1; j <= n; ++j) {
    wt += RationalFn(W.a[sz(j - 1)]) * op_Xtilde(base, j);
    wt += RationalFn(W.b[sz(j - 1)]) * op_Ytilde(base, j);
  }

  std::map<int, RationalFn> at_zero{{vs->param("flow_s"), RationalFn(0)}};
  std::vector<std::vector<NumericRational>> xh(sz(2 * n));
  std::vector<std::vector<NumericRational>> exact(sz(2 * n));
  for (int k = 1; k <= 2 * n; ++k) {
    DiffOp xk = op_horizontal(vs, k);
    DiffOp xk0 = op_horizontal(base, k);
    for (int l = 1; l <= 2 * n; ++l) {
      RationalFn d = xk.apply(h[sz(l - 1)]);
      xh[sz(k - 1)].emplace_back(d);
      r.add_symbolic("delta(" + std::to_string(l) + "," + std::to_string(k) + ")",
                     d.substitute(at_zero) - RationalFn(k == l ? 1 : 0));
      exact[sz(k - 1)].emplace_back(xk0.apply(F.pull(wt.apply(G.f(l)))));
    }
  }

  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (p.size() != sz(2 * n + 1)) throw DimensionMismatch("sample point has the wrong number of coordinates");
    std::vector<double> base_pt(p);
    base_pt.insert(base_pt.end(), params.begin(), params.end());
    std::vector<double> pt(base_pt);
    pt.push_back(0.0);
    std::string where = "@" + std::to_string(i + 1);
    try {
      for (int k = 1; k <= 2 * n; ++k) {
        for (int l = 1; l <= 2 * n; ++l) {
          const NumericRational& f = xh[sz(k - 1)][sz(l - 1)];
          auto at = [&](double sv) {
            pt.back() = sv;
            return f.real(pt);
          };
          auto central = [&](double step) { return (at(step) - at(-step)) / (2 * step); };
          double fd = (4 * central(cfg.fd_step / 2) - central(cfg.fd_step)) / 3;
          double ex = exact[sz(k - 1)][sz(l - 1)].real(base_pt);
          double err = std::abs(fd - ex) / std::max(1.0, std::abs(ex));
          r.add_numeric("rivf(" + std::to_string(k) + "," + std::to_string(l) + ")" + where, err, cfg.tolerance,
                        "fd=" + fmt(fd) + " exact=" + fmt(ex) + " p=" + point_text(p));
        }
      }
    } catch (const PoleError& e) {
      r.add_flag("domain" + where, false, std::string(e.what()) + " p=" + point_text(p));
    }
  }
  return r;
}

// ------------------------------------------------------------ KR flows

std::vector<RationalFn> kr_vector_field(const RationalFn& phi, const VarSetPtr& vars) {
  int n = vars->n();
  RationalFn f = lift(vars, phi);
  std::vector<RationalFn> v(sz(2 * n + 1));
  RationalFn quarter(Scalar(mpq_class(1, 4)));
  RationalFn half(Scalar(mpq_class(1, 2)));
  RationalFn vt = f;
  for (int j = 1; j <= n; ++j) {
    RationalFn xf = op_X(vars, j).apply(f);
    RationalFn yf = op_Y(vars, j).apply(f);
    v[sz(j - 1)] = -quarter * yf;
    v[sz(n + j - 1)] = quarter * xf;
    vt -= half * (RationalFn::var(vars, vars->x(j)) * xf + RationalFn::var(vars, vars->y(j)) * yf);
  }
  v.back() = vt;
  return v;
}

NumericField::NumericField(const std::vector<RationalFn>& components) {
  int d = static_cast<int>(components.size());
  for (const auto& c : components) {
    if (c.vars() && !c.vars()->params().empty())
      throw std::invalid_argument("numeric vector fields cannot depend on formal parameters");
    if (c.vars() && c.vars()->coord_count() != d) throw DimensionMismatch("vector field dimension mismatch");
    value_.emplace_back(c);
    std::vector<NumericRational> row;
    for (int a = 0; a < d; ++a) row.emplace_back(c.vars() ? c.partial(a) : RationalFn(0));
    jac_.push_back(std::move(row));
  }
}

std::vector<double> NumericField::value(std::span<const double> p) const {
  std::vector<double> out;
  out.reserve(value_.size());
  for (const auto& f : value_) out.push_back(f.real(p));
  return out;
}

RealMatrix NumericField::jacobian(std::span<const double> p) const {
  RealMatrix out;
  for (const auto& row : jac_) {
    std::vector<double> r;
    for (const auto& f : row) r.push_back(f.real(p));
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

// Coordinate components of horizontal field k (1..2n) at p.
std::vector<double> frame_vector(std::span<const double> p, int n, int k) {
  std::vector<double> v(p.size(), 0.0);
  v[sz(k - 1)] = 1.0;
  v.back() = k <= n ? 2 * p[sz(n + k - 1)] : -2 * p[sz(k - n - 1)];
  return v;
}

std::vector<double> mat_vec(const RealMatrix& J, const std::vector<double>& v) {
  std::vector<double> out(J.size(), 0.0);
  for (std::size_t i = 0; i < J.size(); ++i)
    for (std::size_t a = 0; a < v.size(); ++a) out[i] += J[i][a] * v[a];
  return out;
}

double alpha(std::span<const double> q, const std::vector<double>& v, int n) {
  double r = v.back();
  for (int j = 0; j < n; ++j) r += 2 * (q[sz(j)] * v[sz(n + j)] - q[sz(n + j)] * v[sz(j)]);
  return r;
}

}  // namespace

RealMatrix horizontal_frame_matrix(const RealMatrix& J, std::span<const double> p) {
  int n = static_cast<int>(p.size() / 2);
  RealMatrix m(sz(2 * n), std::vector<double>(sz(2 * n)));
  for (int k = 1; k <= 2 * n; ++k) {
    std::vector<double> v = mat_vec(J, frame_vector(p, n, k));
    for (int row = 0; row < 2 * n; ++row) m[sz(row)][sz(k - 1)] = v[sz(row)];
  }
  return m;
}

std::vector<double> singular_values(const RealMatrix& A) {
  RealMatrix a = A;
  std::size_t rows = a.size();
  std::size_t cols = rows == 0 ? 0 : a[0].size();
  double norm = 0;
  for (const auto& r : a)
    for (double v : r) norm += v * v;
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double al = 0, be = 0, ga = 0;
        for (std::size_t i = 0; i < rows; ++i) {
          al += a[i][p] * a[i][p];
          be += a[i][q] * a[i][q];
          ga += a[i][p] * a[i][q];
        }
        off = std::max(off, std::abs(ga));
        if (ga == 0) continue;
        double zeta = (be - al) / (2 * ga);
        double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
        double c = 1 / std::sqrt(1 + t * t);
        double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          double x = a[i][p];
          double y = a[i][q];
          a[i][p] = c * x - s * y;
          a[i][q] = s * x + c * y;
        }
      }
    }
    if (off <= 1e-12 * norm) break;
  }
  std::vector<double> sv;
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < rows; ++i) s += a[i][j] * a[i][j];
    sv.push_back(std::sqrt(s));
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double distortion(const RealMatrix& Mh) {
  std::vector<double> sv = singular_values(Mh);
  if (sv.empty() || !(sv.back() > 1e-14 * sv.front())) throw std::domain_error("singular horizontal differential");
  return sv.front() / sv.back();
}

double contact_residual(const RealMatrix& J, std::span<const double> p, std::span<const double> q) {
  int n = static_cast<int>(p.size() / 2);
  double res = 0;
  for (int k = 1; k <= 2 * n; ++k) res = std::max(res, std::abs(alpha(q, mat_vec(J, frame_vector(p, n, k)), n)));
  std::vector<double> et(p.size(), 0.0);
  et.back() = 1;
  double lam_t = alpha(q, mat_vec(J, et), n);
  // M^T Omega M = lambda Omega on the horizontal frames
  RealMatrix m = horizontal_frame_matrix(J, p);
  for (int a = 0; a < 2 * n; ++a) {
    for (int b = 0; b < 2 * n; ++b) {
      double w = 0;
      for (int j = 0; j < n; ++j) w += m[sz(j)][sz(a)] * m[sz(n + j)][sz(b)] - m[sz(n + j)][sz(a)] * m[sz(j)][sz(b)];
      double expect = b == a + n ? lam_t : (a == b + n ? -lam_t : 0.0);
      res = std::max(res, std::abs(w - expect));
    }
  }
  return res;
}

double kr_bound(double s, const RealMatrix& M, int n) {
  if (s < 0) throw std::invalid_argument("kr_bound needs s >= 0");
  double hs = 0;
  for (const auto& row : M)
    for (double v : row) hs += v * v;
  hs = std::sqrt(hs);
  double excess = n * std::expm1(s * std::sqrt(2.0) * hs);
  double rho = 1 + excess;
  return rho + std::sqrt(excess * (rho + 1));
}

KRPotential make_kr_potential(const RationalFn& phi, const VarSetPtr& vars, double box_half) {
  int n = vars->n();
  KRPotential out;
  out.phi = lift(vars, phi);
  out.vars = vars;
  out.box_half = box_half;
  out.exact = true;
  out.M.assign(sz(n), std::vector<double>(sz(n), 0.0));
  int dim = vars->coord_count();
  auto per_axis = static_cast<int>(std::max(5.0, std::floor(std::pow(64.0, 3.0 / dim))));
  for (int j = 1; j <= n; ++j) {
    for (int k = 1; k <= n; ++k) {
      RationalFn w = (op_Z(vars, j) * op_Z(vars, k)).apply(out.phi);
      if (w.is_constant()) {
        out.M[sz(j - 1)][sz(k - 1)] = std::abs(w.constant_value().to_complex());
        continue;
      }
      out.exact = false;
      NumericRational f(w);
      std::vector<int> idx(sz(dim), 0);
      std::vector<double> pt(sz(dim));
      double sup = 0;
      while (true) {
        for (int a = 0; a < dim; ++a) pt[sz(a)] = -box_half + 2 * box_half * idx[sz(a)] / (per_axis - 1);
        sup = std::max(sup, std::abs(f(pt, 0.0)));
        int a = 0;
        while (a < dim && ++idx[sz(a)] == per_axis) idx[sz(a++)] = 0;
        if (a == dim) break;
      }
      out.M[sz(j - 1)][sz(k - 1)] = sup;
    }
  }
  return out;
}

namespace {

using State = std::vector<double>;

State flow_rhs(const NumericField& V, const State& y) {
  int d = V.dim();
  std::span<const double> p(y.data(), sz(d));
  State out = V.value(p);
  RealMatrix dv = V.jacobian(p);
  out.resize(sz(d + d * d), 0.0);
  for (int i = 0; i < d; ++i)
    for (int c = 0; c < d; ++c) {
      double s = 0;
      for (int a = 0; a < d; ++a) s += dv[sz(i)][sz(a)] * y[sz(d + a * d + c)];
      out[sz(d + i * d + c)] = s;
    }
  return out;
}

State initial_state(std::span<const double> p0) {
  auto d = p0.size();
  State y(p0.begin(), p0.end());
  y.resize(d + d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) y[d + i * d + i] = 1.0;
  return y;
}

State integrate_state(const NumericField& V, std::span<const double> p0, double s_end, double step,
                      const std::function<void(double, const State&)>& observe = {}) {
  return rk4_integrate([&](const State& y) { return flow_rhs(V, y); }, initial_state(p0), s_end, step, observe);
}

}  // namespace

FlowTrace integrate_flow(const NumericField& V, std::span<const double> p0, const FlowConfig& cfg) {
  cfg.validate();
  int d = V.dim();
  if (static_cast<int>(p0.size()) != d) throw DimensionMismatch("start point dimension differs from the field");
  FlowTrace trace;
  trace.start.assign(p0.begin(), p0.end());
  long step_index = 0;
  auto steps = static_cast<long>(std::ceil(cfg.s_max / cfg.step - 1e-9));
  auto observe = [&](double s, const State& y) {
    for (int i = 0; i < d; ++i)
      if (!(std::abs(y[sz(i)]) <= cfg.box_half + 1e-12))
        throw FlowError("trajectory from " + point_text(p0) + " leaves the box at s = " + fmt(s));
    bool keep = step_index % cfg.sample_stride == 0 || step_index == steps;
    ++step_index;
    if (!keep) return;
    FlowSample smp;
    smp.s = s;
    smp.point.assign(y.begin(), y.begin() + d);
    smp.jacobian.assign(sz(d), std::vector<double>(sz(d)));
    for (int i = 0; i < d; ++i)
      for (int c = 0; c < d; ++c) smp.jacobian[sz(i)][sz(c)] = y[sz(d + i * d + c)];
    smp.frame = horizontal_frame_matrix(smp.jacobian, p0);
    smp.distortion = distortion(smp.frame);
    smp.contact_residual = contact_residual(smp.jacobian, p0, smp.point);
    trace.samples.push_back(std::move(smp));
  };
  State full = integrate_state(V, p0, cfg.s_max, cfg.step, observe);
  State half = integrate_state(V, p0, cfg.s_max, cfg.step / 2);
  double err = 0;
  for (std::size_t i = 0; i < full.size(); ++i) err = std::max(err, std::abs(full[i] - half[i]) / std::max(1.0, std::abs(half[i])));
  trace.halving_error = err;
  if (err > cfg.tolerance)
    throw FlowError("step halving changes the endpoint from " + point_text(p0) + " by " + fmt(err));
  return trace;
}

double rk4_observed_order(const NumericField& V, std::span<const double> p0, double s_max, double step) {
  State a = integrate_state(V, p0, s_max, step);
  State b = integrate_state(V, p0, s_max, step / 2);
  State c = integrate_state(V, p0, s_max, step / 4);
  double e1 = 0, e2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    e1 = std::max(e1, std::abs(a[i] - b[i]));
    e2 = std::max(e2, std::abs(b[i] - c[i]));
  }
  return std::log2(e1 / e2);
}

std::vector<std::vector<double>> default_kr_grid(int n, double box_half) {
  int dim = 2 * n + 1;
  std::vector<std::vector<double>> grid;
  std::vector<int> idx(sz(dim), 0);
  while (true) {
    std::vector<double> p;
    for (int a = 0; a < dim; ++a) p.push_back((idx[sz(a)] - 1) * box_half / 2);
    grid.push_back(std::move(p));
    int a = dim - 1;
    while (a >= 0 && ++idx[sz(a)] == 3) idx[sz(a--)] = 0;
    if (a < 0) break;
  }
  return grid;
}

KRResult kr_experiment(const KRPotential& phi, const FlowConfig& cfg) {
  cfg.validate();
  int n = phi.vars->n();
  KRResult out{Report("kr_experiment"), {}};
  Report& r = out.report;
  double hs = 0;
  for (const auto& row : phi.M)
    for (double v : row) hs += v * v;
  r.with("phi", phi.phi.to_string()).with("n", std::to_string(n)).with("box", fmt(phi.box_half));
  r.with("s_max", fmt(cfg.s_max)).with("step", fmt(cfg.step)).with("slack", fmt(cfg.bound_slack));
  r.with("contact_tol", fmt(cfg.contact_tolerance)).with("M_HS", fmt(std::sqrt(hs)));
  r.with("M", phi.exact ? "exact" : "estimate").with("scope", "local/empirical, differential distortion proxy");

  NumericField V(kr_vector_field(phi.phi, phi.vars));
  std::vector<std::vector<double>> grid = cfg.grid.empty() ? default_kr_grid(n, phi.box_half) : cfg.grid;
  // An exact M holds everywhere; only a grid estimate confines trajectories to its box.
  FlowConfig run = cfg;
  run.box_half = phi.exact ? INFINITY : phi.box_half;
  std::vector<FlowTrace> traces(grid.size());
  std::vector<std::string> errors(grid.size());
  parallel_for(grid.size(), cfg.jobs, [&](std::size_t i) {
    try {
      traces[i] = integrate_flow(V, grid[i], run);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  double excess = -INFINITY, contact = 0, halving = 0, kmax = 1;
  long samples = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!errors[i].empty()) {
      r.add_flag("trajectory@" + std::to_string(i + 1), false, errors[i]);
      continue;
    }
    for (auto& smp : traces[i].samples) {
      smp.bound = kr_bound(smp.s, phi.M, n);
      excess = std::max(excess, smp.distortion - smp.bound);
      contact = std::max(contact, smp.contact_residual);
      kmax = std::max(kmax, smp.distortion);
      ++samples;
    }
    halving = std::max(halving, traces[i].halving_error);
  }
  r.with("traces", std::to_string(grid.size())).with("samples", std::to_string(samples));
  r.add_numeric("K<=K(s)", std::max(0.0, excess), cfg.bound_slack,
                "max K_meas " + fmt(kmax) + ", max K_meas - K(s) " + fmt(excess));
  r.add_numeric("contact", contact, cfg.contact_tolerance);
  r.add_numeric("step.halving", halving, cfg.tolerance);
  out.traces = std::move(traces);
  return out;
}

}  // namespace heis

#include "heis/replay.hpp"

#include <atomic>
#include <random>
#include <sstream>
#include <thread>

namespace heis {

namespace {

std::string idx(std::string_view base, int a) { return std::string(base) + "(" + std::to_string(a) + ")"; }
std::string idx(std::string_view base, int a, int b) {
  return std::string(base) + "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

RationalFn rat(long p, long q) { return RationalFn(Scalar(mpq_class(p, q))); }

Report start(const char* check, const PotentialAssignment& a) {
  Report r(check);
  r.with("map", a.map->name()).with("n", std::to_string(a.map->n())).with("field", a.label());
  return r;
}

// W~ g_m o F for m = 1..2n.
std::vector<RationalFn> mirror_pullbacks(const PotentialAssignment& a) {
  const ContactMap& F = *a.map;
  const ContactMap& G = F.inverse();
  DiffOp w = mirror_field(a.field, a.index, F.vars());
  std::vector<RationalFn> out;
  for (int m = 1; m <= 2 * F.n(); ++m) out.push_back(F.pull(w.apply(G.f(m))));
  return out;
}

}  // namespace

DiffOp mirror_field(Mirror field, int index, const VarSetPtr& vars) {
  switch (field) {
    case Mirror::T: return op_T(vars);
    case Mirror::X: return op_Xtilde(vars, index);
    case Mirror::Y: return op_Ytilde(vars, index);
  }
  throw std::invalid_argument("unknown mirror field");
}

std::string mirror_label(Mirror field, int index) {
  switch (field) {
    case Mirror::T: return "T~";
    case Mirror::X: return "X~" + std::to_string(index);
    case Mirror::Y: return "Y~" + std::to_string(index);
  }
  return "?";
}

Report frame_brackets(int n) {
  if (n < 1) throw std::invalid_argument("frame_brackets needs n >= 1");
  Report r("frame_brackets");
  r.with("n", std::to_string(n));
  VarSetPtr vars = make_varset(n);
  DiffOp T = op_T(vars);
  auto expect = [&](const std::string& id, const DiffOp& got, const DiffOp& want) {
    r.add_flag(id, got == want, got == want ? "" : got.to_string().substr(0, 120));
  };
  DiffOp zero(vars);
  for (int j = 1; j <= n; ++j) {
    for (int k = 1; k <= n; ++k) {
      expect(idx("[X,Y]", j, k), commutator(op_X(vars, j), op_Y(vars, k)), j == k ? RationalFn(-4) * T : zero);
      if (j < k) {
        expect(idx("[X,X]", j, k), commutator(op_X(vars, j), op_X(vars, k)), zero);
        expect(idx("[Y,Y]", j, k), commutator(op_Y(vars, j), op_Y(vars, k)), zero);
      }
    }
    expect(idx("[X,T]", j), commutator(op_X(vars, j), T), zero);
    expect(idx("[Y,T]", j), commutator(op_Y(vars, j), T), zero);
  }
  for (int a = 1; a <= 2 * n; ++a) {
    for (int b = 1; b <= 2 * n; ++b)
      expect(idx("[W~,X]", a, b), commutator(op_horizontal_mirror(vars, a), op_horizontal(vars, b)), zero);
    expect(idx("[W~,T]", a), commutator(op_horizontal_mirror(vars, a), T), zero);
  }
  return r;
}

Report complexified_identities(int n) {
  if (n < 1) throw std::invalid_argument("complexified_identities needs n >= 1");
  Report r("complexified_identities");
  r.with("n", std::to_string(n));
  VarSetPtr vars = make_varset(n);
  RationalFn i(Scalar::i());
  for (int j = 1; j <= n; ++j) {
    for (int k = 1; k <= n; ++k) {
      DiffOp re = op_X(vars, j) * op_X(vars, k) - op_Y(vars, j) * op_Y(vars, k);
      DiffOp im = op_X(vars, j) * op_Y(vars, k) + op_Y(vars, j) * op_X(vars, k);
      r.add_flag(idx("4ZZ", j, k), RationalFn(4) * (op_Z(vars, j) * op_Z(vars, k)) == re - i * im);
      r.add_flag(idx("4ZbarZbar", j, k), RationalFn(4) * (op_Zbar(vars, j) * op_Zbar(vars, k)) == re + i * im);
    }
    r.add_flag(idx("conj(Z)", j), op_Z(vars, j).conj() == op_Zbar(vars, j));
  }
  DiffOp sum(vars);
  for (int j = 1; j <= n; ++j) sum += op_Z(vars, j) * op_Zbar(vars, j) + op_Zbar(vars, j) * op_Z(vars, j);
  r.add_flag("Delta0/2", rat(1, 2) * op_Delta0(vars) == sum);
  return r;
}

Report random_operator_identities(int n, std::uint64_t seed, int count) {
  if (n < 1) throw std::invalid_argument("random_operator_identities needs n >= 1");
  Report r("random_operator_identities");
  r.with("n", std::to_string(n)).with("seed", std::to_string(seed)).with("count", std::to_string(count));
  VarSetPtr vars = make_varset(n);
  std::vector<std::pair<std::string, DiffOp>> pool{{"T", op_T(vars)}, {"Delta0", op_Delta0(vars)}};
  for (int j = 1; j <= n; ++j) {
    std::string s = std::to_string(j);
    pool.emplace_back("X" + s, op_X(vars, j));
    pool.emplace_back("Y" + s, op_Y(vars, j));
    pool.emplace_back("Xt" + s, op_Xtilde(vars, j));
    pool.emplace_back("Yt" + s, op_Ytilde(vars, j));
    pool.emplace_back("Z" + s, op_Z(vars, j));
    pool.emplace_back("Zbar" + s, op_Zbar(vars, j));
  }
  std::mt19937_64 rng(seed);
  auto pick = [&]() -> const auto& { return pool[rng() % pool.size()]; };
  for (int k = 0; k < count; ++k) {
    const auto& [na, a] = pick();
    const auto& [nb, b] = pick();
    const auto& [nc, c] = pick();
    std::string tag = "(" + na + "," + nb + "," + nc + ")";
    r.add_flag("assoc" + tag, (a * b) * c == a * (b * c));
    r.add_flag("jacobi" + tag,
               (commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b))).is_zero());
  }
  return r;
}

Report factorization_identity(int n) {
  if (n < 1) throw std::invalid_argument("factorization_identity needs n >= 1");
  Report r("factorization_identity");
  r.with("n", std::to_string(n));
  VarSetPtr vars = make_varset(n, {"c"});
  DiffOp delta = op_Delta0(vars);
  DiffOp t2 = op_T(vars) * op_T(vars);
  DiffOp delta2 = rat(1, 16) * (delta * delta);

  DiffOp sum(vars);
  for (int j = 1; j <= n; ++j) {
    for (int k = 1; k <= n; ++k) {
      DiffOp zz = op_Z(vars, j) * op_Z(vars, k);
      DiffOp bb = op_Zbar(vars, j) * op_Zbar(vars, k);
      sum += bb * zz + zz * bb;
    }
  }
  DiffOp lhs = rat(1, 2) * sum;
  DiffOp rhs = delta2 - RationalFn(static_cast<long>(n) * (n + 2)) * t2;
  DiffOp diff = lhs - rhs;
  r.add_flag("sum.ZZ", diff.is_zero(), diff.is_zero() ? "" : diff.to_string().substr(0, 120));

  RationalFn c = RationalFn::var(vars, "c");
  DiffOp lc = op_L(vars, -c) * op_L(vars, c);
  DiffOp ldiff = lc - (delta2 - c * c * t2);
  r.add_flag("L(-c)L(c)", ldiff.is_zero(), ldiff.is_zero() ? "" : ldiff.to_string().substr(0, 120));

  // the first identity is the instance c^2 = n(n+2) of the second
  DiffOp inst = (delta2 - RationalFn(static_cast<long>(n) * (n + 2)) * t2) - lhs;
  r.add_flag("instance", inst.is_zero());
  return r;
}

PotentialAssignment potential_for(Mirror field, int index, const ContactMap& F, int ytilde_sign) {
  if (field != Mirror::T && (index < 1 || index > F.n()))
    throw std::out_of_range("mirror index " + std::to_string(index) + " outside 1.." + std::to_string(F.n()));
  RationalFn inv = lambda(F).inverse();
  PotentialAssignment a;
  a.field = field;
  a.index = field == Mirror::T ? 0 : index;
  a.map = std::make_shared<const ContactMap>(F);
  switch (field) {
    case Mirror::T: a.psi = rat(-1, 4) * inv; break;
    case Mirror::X: a.psi = F.f(F.n() + index) * inv; break;
    case Mirror::Y: a.psi = RationalFn(static_cast<long>(ytilde_sign)) * F.f(index) * inv; break;
  }
  return a;
}

namespace {

Report gradient_relation(const PotentialAssignment& a, const std::vector<RationalFn>& u) {
  Report r = start("verify_gradient_relation", a);
  const ContactMap& F = *a.map;
  int n = F.n();
  r.add_flag("psi.real", a.psi.is_real());
  for (int l = 1; l <= n; ++l) {
    r.add_symbolic(idx("grad", l), u[static_cast<std::size_t>(l - 1)] - op_horizontal(F.vars(), n + l).apply(a.psi));
    r.add_symbolic(idx("grad", n + l), u[static_cast<std::size_t>(n + l - 1)] + op_horizontal(F.vars(), l).apply(a.psi));
  }
  if (a.field == Mirror::T) {
    RationalFn lg = F.pull(lambda(F.inverse()));
    for (int l = 1; l <= n; ++l) {
      r.add_symbolic(idx("T.lambdaG", n + l),
                     u[static_cast<std::size_t>(n + l - 1)] - rat(1, 4) * op_horizontal(F.vars(), l).apply(lg));
      r.add_symbolic(idx("T.lambdaG", l),
                     u[static_cast<std::size_t>(l - 1)] + rat(1, 4) * op_horizontal(F.vars(), n + l).apply(lg));
    }
  }
  return r;
}

Report missing_inverse(const char* check, const PotentialAssignment& a) {
  Report r = start(check, a);
  r.add_flag("inverse.available", false, "no closed-form inverse attached");
  return r;
}

}  // namespace

Report verify_gradient_relation(const PotentialAssignment& a) {
  if (!a.map->has_inverse()) return missing_inverse("verify_gradient_relation", a);
  return gradient_relation(a, mirror_pullbacks(a));
}

Report verify_zz(const PotentialAssignment& a) {
  Report r = start("verify_zz", a);
  const VarSetPtr& vars = a.map->vars();
  int n = a.map->n();
  r.with("psi.constant", a.psi.is_constant() ? "yes" : "no");
  for (int k = 1; k <= n; ++k) {
    for (int l = 1; l <= n; ++l) {
      DiffOp zz = op_Z(vars, k) * op_Z(vars, l);
      RationalFn v = zz.apply(a.psi);
      r.add_symbolic(idx("ZZ", k, l), v);
      RationalFn w = zz.conj().apply(a.psi);
      r.add_symbolic(idx("ZbarZbar", k, l), w);
      if (a.psi.is_real()) r.add_symbolic(idx("conj", k, l), w - v.conj());
    }
  }
  return r;
}

Report verify_final_step(const ContactMap& F) {
  Report r("verify_final_step");
  int n = F.n();
  r.with("map", F.name()).with("n", std::to_string(n));
  const VarSetPtr& vars = F.vars();
  const RationalFn& top = F.f(2 * n + 1);
  RationalFn div_grad;
  RationalFn div_rest;
  for (int k = 1; k <= 2 * n; ++k) {
    DiffOp xk = op_horizontal(vars, k);
    RationalFn rest;
    for (int j = 1; j <= n; ++j) rest += F.f(j) * xk.apply(F.f(n + j)) - F.f(n + j) * xk.apply(F.f(j));
    rest *= RationalFn(2);
    RationalFn grad = xk.apply(top);
    r.add_symbolic(idx("contact", k), grad + rest);
    div_grad += xk.apply(grad);
    div_rest += xk.apply(rest);
  }
  RationalFn kohn = op_Delta0(vars).apply(top);
  r.add_symbolic("div.grad-Delta0", div_grad - kohn);
  // Delta0 of the last component written through the horizontal ones
  r.add_symbolic("Delta0+div.rest", kohn + div_rest);
  return r;
}

Report kronecker_identity(const ContactMap& F) {
  Report r("kronecker_identity");
  int n = F.n();
  r.with("map", F.name()).with("n", std::to_string(n));
  if (!F.has_inverse()) {
    r.add_flag("inverse.available", false, "no closed-form inverse attached");
    return r;
  }
  HorizontalMatrix mf = horizontal_jacobian(F);
  HorizontalMatrix mg = horizontal_jacobian(F.inverse());
  std::vector<std::vector<RationalFn>> pulled(static_cast<std::size_t>(2 * n));
  for (int k = 1; k <= 2 * n; ++k)
    for (int m = 1; m <= 2 * n; ++m) pulled[static_cast<std::size_t>(k - 1)].push_back(F.pull(mg(k, m)));
  for (int k = 1; k <= 2 * n; ++k) {
    for (int l = 1; l <= 2 * n; ++l) {
      RationalFn s;
      for (int m = 1; m <= 2 * n; ++m) s += pulled[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(m - 1)] * mf(m, l);
      if (k == l) s -= RationalFn(1);
      r.add_symbolic(idx("delta", k, l), s);
    }
  }
  return r;
}

namespace {

Report matrix_flow(const PotentialAssignment& a, const std::vector<RationalFn>& u) {
  Report r = start("matrix_flow_consistency", a);
  const ContactMap& F = *a.map;
  int n = F.n();
  const VarSetPtr& vars = F.vars();
  auto X = [&](int k) { return op_horizontal(vars, k); };
  auto U = [&](int m) -> const RationalFn& { return u[static_cast<std::size_t>(m - 1)]; };
  for (int k = 1; k <= n; ++k) {
    for (int l = 1; l <= n; ++l) {
      // entries from the time derivatives (X_k h_l)' = X_k(W~ g_l o F)
      RationalFn kl = k == l ? X(k).apply(U(k)) - X(n + k).apply(U(n + k)) : X(l).apply(U(k)) + X(k).apply(U(l));
      RationalFn kn = X(n + l).apply(U(k)) + X(k).apply(U(n + l));
      DiffOp op_kl = X(l) * X(n + k) + X(n + l) * X(k);
      DiffOp op_kn = X(n + k) * X(n + l) - X(k) * X(l);
      RationalFn pkl = op_kl.apply(a.psi);
      RationalFn pkn = op_kn.apply(a.psi);
      r.add_symbolic(idx("m'.forms", k, l), kl - pkl);
      r.add_symbolic(idx("m'.forms", k, n + l), kn - pkn);
      r.add_symbolic(idx("m'", k, l), pkl);
      r.add_symbolic(idx("m'", k, n + l), pkn);
      DiffOp link = RationalFn(4) * (op_Z(vars, k) * op_Z(vars, l)) + op_kn + RationalFn(Scalar::i()) * op_kl;
      r.add_flag(idx("4ZZ", k, l), link.is_zero());
    }
  }
  return r;
}

}  // namespace

Report matrix_flow_consistency(const PotentialAssignment& a) {
  if (!a.map->has_inverse()) return missing_inverse("matrix_flow_consistency", a);
  return matrix_flow(a, mirror_pullbacks(a));
}

int resolve_ytilde_sign(int n) {
  ContactMap id = corpus::identity(make_varset(n));
  for (int sign : {-1, 1}) {
    bool ok = true;
    for (int l = 1; l <= n && ok; ++l) ok = verify_gradient_relation(potential_for(Mirror::Y, l, id, sign)).pass();
    if (ok) return sign;
  }
  return 0;
}

bool Bundle::pass() const {
  if (ytilde_sign == 0) return false;
  for (const auto& r : reports)
    if (!r.pass()) return false;
  return true;
}

std::string Bundle::first_failure() const {
  if (ytilde_sign == 0) return "ytilde_sign";
  for (const auto& r : reports) {
    if (r.pass()) continue;
    std::string where = r.check();
    for (const auto& [k, v] : r.context())
      if (k == "map") where = v + "/" + where;
    return where + "/" + r.first_failure();
  }
  return {};
}

std::string Bundle::to_text() const {
  std::ostringstream out;
  out << "replay n=" << n << " ytilde_sign=" << ytilde_sign << " reports=" << reports.size() << ' '
      << (pass() ? "PASS" : "FAIL") << '\n';
  for (const auto& r : reports) out << r.to_text();
  return out.str();
}

std::vector<std::string> default_replay_maps(int n) {
  if (n == 1) return corpus::names();
  return {"identity", "translation", "dilation", "rotation"};
}

namespace {

std::vector<Report> replay_map(const ContactMap& F, int ytilde_sign, const ReplayOptions& opts) {
  std::vector<Report> out;
  out.push_back(is_contact(F));
  if (!out.back().pass()) return out;
  out.push_back(is_conformal(F, opts.positivity));
  out.push_back(cr_check(F));
  out.push_back(lambda_nu_check(F));
  out.push_back(inverse_identities(F));
  std::vector<PotentialAssignment> families{potential_for(Mirror::T, 0, F)};
  for (int l = 1; l <= F.n(); ++l) families.push_back(potential_for(Mirror::X, l, F));
  for (int l = 1; l <= F.n(); ++l) families.push_back(potential_for(Mirror::Y, l, F, ytilde_sign == 0 ? -1 : ytilde_sign));
  for (const auto& a : families) {
    if (!F.has_inverse()) {
      out.push_back(missing_inverse("verify_gradient_relation", a));
      continue;
    }
    std::vector<RationalFn> u = mirror_pullbacks(a);
    out.push_back(gradient_relation(a, u));
    out.push_back(verify_zz(a));
    out.push_back(matrix_flow(a, u));
  }
  out.push_back(kronecker_identity(F));
  out.push_back(verify_final_step(F));
  return out;
}

}  // namespace

Bundle replay_maps(int n, const std::vector<ContactMap>& maps, const ReplayOptions& opts) {
  Bundle b;
  b.n = n;
  b.ytilde_sign = resolve_ytilde_sign(n);
  b.reports.push_back(factorization_identity(n));
  std::vector<std::vector<Report>> per_map(maps.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < maps.size(); i = next++) per_map[i] = replay_map(maps[i], b.ytilde_sign, opts);
  };
  int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(maps.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (auto& reports : per_map)
    for (auto& r : reports) b.reports.push_back(std::move(r));
  return b;
}

Bundle replay_all(int n, const ReplayOptions& opts) {
  if (n < 1 || n > 3) throw std::invalid_argument("replay_all supports n in 1..3");
  std::vector<ContactMap> maps;
  for (const auto& name : default_replay_maps(n)) maps.push_back(corpus::by_name(name, n));
  return replay_maps(n, maps, opts);
}

}  // namespace heis

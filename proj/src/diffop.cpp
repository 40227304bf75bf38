#include "heis/diffop.hpp"

#include <mutex>
#include <sstream>

#include "parser_core.hpp"

namespace heis {

namespace {

class DerivativeCache {
 public:
  DerivativeCache(const RationalFn& f, int coord_count) : coord_count_(coord_count) { cache_.emplace(DiffOp::Index{}, f); }

  const RationalFn& get(const DiffOp::Index& alpha) {
    auto it = cache_.find(alpha);
    if (it != cache_.end()) return it->second;
    int k = 0;
    while (alpha[k] == 0) ++k;
    if (k >= coord_count_) throw std::logic_error("derivative index outside coordinates");
    DiffOp::Index lower = alpha;
    lower.set(k, alpha[k] - 1);
    RationalFn d = get(lower).partial(k);
    return cache_.emplace(alpha, std::move(d)).first->second;
  }

 private:
  int coord_count_;
  std::map<DiffOp::Index, RationalFn> cache_;
};

long binomial(unsigned n, unsigned k) {
  long r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * static_cast<long>(n - k + i) / static_cast<long>(i);
  return r;
}

// Calls fn(gamma, multinomial weight) for every gamma <= alpha componentwise.
template <class Fn>
void for_each_subindex(const DiffOp::Index& alpha, int coord_count, Fn&& fn) {
  DiffOp::Index gamma;
  while (true) {
    long weight = 1;
    for (int k = 0; k < coord_count; ++k) weight *= binomial(alpha[k], gamma[k]);
    fn(gamma, weight);
    int k = 0;
    while (k < coord_count && gamma[k] == alpha[k]) {
      gamma.set(k, 0);
      ++k;
    }
    if (k == coord_count) return;
    gamma.set(k, gamma[k] + 1);
  }
}

int coord_count_of(const VarSetPtr& vars) { return vars ? vars->coord_count() : 0; }

}  // namespace

DiffOp DiffOp::multiplication(const RationalFn& f) {
  DiffOp op(f.vars());
  op.add_term(Index{}, f);
  return op;
}

DiffOp DiffOp::derivative(const VarSetPtr& vars, int coord) {
  if (!vars || coord < 0 || coord >= vars->coord_count()) throw UnknownVariable("derivative: not a coordinate");
  DiffOp op(vars);
  op.add_term(Index::var(coord), RationalFn(1));
  return op;
}

unsigned DiffOp::order() const {
  unsigned d = 0;
  for (const auto& [alpha, c] : terms_) d = std::max(d, alpha.degree());
  return d;
}

RationalFn DiffOp::coefficient(const Index& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? RationalFn(0) : it->second;
}

void DiffOp::add_term(const Index& alpha, const RationalFn& coef) {
  if (coef.is_zero()) return;
  vars_ = common_vars(vars_, coef.vars());
  auto it = terms_.find(alpha);
  if (it == terms_.end()) {
    terms_.emplace(alpha, coef);
    return;
  }
  it->second += coef;
  if (it->second.is_zero()) terms_.erase(it);
}

DiffOp DiffOp::operator-() const {
  DiffOp r = *this;
  for (auto& [alpha, c] : r.terms_) c = -c;
  return r;
}

DiffOp operator+(const DiffOp& a, const DiffOp& b) {
  DiffOp r = a;
  r.vars_ = common_vars(a.vars_, b.vars_);
  for (const auto& [alpha, c] : b.terms_) r.add_term(alpha, c);
  return r;
}

DiffOp operator-(const DiffOp& a, const DiffOp& b) { return a + (-b); }

DiffOp operator*(const RationalFn& f, const DiffOp& a) {
  DiffOp r(common_vars(f.vars(), a.vars_));
  for (const auto& [alpha, c] : a.terms_) r.add_term(alpha, f * c);
  return r;
}

DiffOp operator*(const DiffOp& a, const DiffOp& b) {
  // (a d^alpha) o (b d^beta) = sum_{gamma <= alpha} C(alpha,gamma) a (d^gamma b) d^{alpha-gamma+beta}
  DiffOp r(common_vars(a.vars_, b.vars_));
  const int coords = coord_count_of(r.vars_);
  for (const auto& [beta, bc] : b.terms_) {
    DerivativeCache db(bc, coords);
    for (const auto& [alpha, ac] : a.terms_) {
      for_each_subindex(alpha, coords, [&](const DiffOp::Index& gamma, long weight) {
        const RationalFn& d = db.get(gamma);
        if (d.is_zero()) return;
        r.add_term((alpha / gamma) * beta, ac * d * RationalFn(weight));
      });
    }
  }
  return r;
}

DiffOp compose(const DiffOp& a, const DiffOp& b) { return a * b; }

DiffOp commutator(const DiffOp& a, const DiffOp& b) { return a * b - b * a; }

RationalFn differentiate(const RationalFn& f, const DiffOp::Index& alpha, int coord_count) {
  DerivativeCache cache(f, coord_count);
  return cache.get(alpha);
}

RationalFn DiffOp::apply(const RationalFn& f) const {
  VarSetPtr vars = common_vars(vars_, f.vars());
  DerivativeCache cache(f, coord_count_of(vars));
  RationalFn sum;
  for (const auto& [alpha, c] : terms_) sum += c * cache.get(alpha);
  return sum;
}

DiffOp DiffOp::conj() const {
  DiffOp r = *this;
  for (auto& [alpha, c] : r.terms_) c = c.conj();
  return r;
}

DiffOp DiffOp::pow(unsigned k) const {
  DiffOp r = multiplication(RationalFn(vars_, Polynomial(1)));
  for (unsigned i = 0; i < k; ++i) r = r * *this;
  return r;
}

std::string DiffOp::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [alpha, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    out << "(" << c.to_string() << ")";
    for (int k = 0; vars_ && k < vars_->coord_count(); ++k) {
      if (alpha[k] == 0) continue;
      out << "*d" << vars_->name(k);
      if (alpha[k] > 1) out << "^" << alpha[k];
    }
  }
  return out.str();
}

// ---------------------------------------------------------------- builtins

namespace {

RationalFn coord(const VarSetPtr& vars, int index) { return RationalFn::var(vars, index); }

}  // namespace

DiffOp op_X(const VarSetPtr& vars, int j) {
  return DiffOp::derivative(vars, vars->x(j)) + (2 * coord(vars, vars->y(j))) * DiffOp::derivative(vars, vars->t());
}

DiffOp op_Y(const VarSetPtr& vars, int j) {
  return DiffOp::derivative(vars, vars->y(j)) - (2 * coord(vars, vars->x(j))) * DiffOp::derivative(vars, vars->t());
}

DiffOp op_T(const VarSetPtr& vars) { return DiffOp::derivative(vars, vars->t()); }

DiffOp op_Xtilde(const VarSetPtr& vars, int j) { return op_X(vars, j) - (4 * coord(vars, vars->y(j))) * op_T(vars); }

DiffOp op_Ytilde(const VarSetPtr& vars, int j) { return op_Y(vars, j) + (4 * coord(vars, vars->x(j))) * op_T(vars); }

DiffOp op_Z(const VarSetPtr& vars, int j) {
  return RationalFn(Scalar(mpq_class(1, 2))) * (op_X(vars, j) - RationalFn(Scalar::i()) * op_Y(vars, j));
}

DiffOp op_Zbar(const VarSetPtr& vars, int j) {
  return RationalFn(Scalar(mpq_class(1, 2))) * (op_X(vars, j) + RationalFn(Scalar::i()) * op_Y(vars, j));
}

DiffOp op_Delta0(const VarSetPtr& vars) {
  DiffOp sum(vars);
  for (int j = 1; j <= vars->n(); ++j) {
    DiffOp x = op_X(vars, j);
    DiffOp y = op_Y(vars, j);
    sum += x * x + y * y;
  }
  return sum;
}

DiffOp op_L(const VarSetPtr& vars, const RationalFn& c) {
  return RationalFn(Scalar(mpq_class(-1, 4))) * op_Delta0(vars) + c * op_T(vars);
}

DiffOp op_horizontal(const VarSetPtr& vars, int k) {
  int n = vars->n();
  if (k < 1 || k > 2 * n) throw std::out_of_range("horizontal index out of range 1..2n");
  return k <= n ? op_X(vars, k) : op_Y(vars, k - n);
}

DiffOp op_horizontal_mirror(const VarSetPtr& vars, int k) {
  int n = vars->n();
  if (k < 1 || k > 2 * n) throw std::out_of_range("horizontal index out of range 1..2n");
  return k <= n ? op_Xtilde(vars, k) : op_Ytilde(vars, k - n);
}

DiffOp builtin(Builtin name, int j, const VarSetPtr& vars, const RationalFn& c) {
  if (!vars) throw std::invalid_argument("builtin operator needs a variable set");
  switch (name) {
    case Builtin::X: return op_X(vars, j);
    case Builtin::Y: return op_Y(vars, j);
    case Builtin::T: return op_T(vars);
    case Builtin::Xtilde: return op_Xtilde(vars, j);
    case Builtin::Ytilde: return op_Ytilde(vars, j);
    case Builtin::Z: return op_Z(vars, j);
    case Builtin::Zbar: return op_Zbar(vars, j);
    case Builtin::Delta0: return op_Delta0(vars);
    case Builtin::L: return op_L(vars, c);
  }
  throw std::invalid_argument("unknown builtin operator");
}

// ------------------------------------------------------------------ parser

const std::vector<std::string>& operator_names(int n) {
  static std::mutex mutex;
  static std::map<int, std::vector<std::string>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::string> names{"T", "Delta0", "L"};
  for (int j = 1; j <= n; ++j)
    for (const char* stem : {"X", "Y", "Z", "Zbar", "Xt", "Yt"}) names.push_back(stem + std::to_string(j));
  return cache.emplace(n, std::move(names)).first->second;
}

namespace {

struct OperatorBuilder {
  using Value = DiffOp;
  VarSetPtr vars;

  Value scalar(const RationalFn& f) { return DiffOp::multiplication(RationalFn(vars, f.num(), f.den())); }

  Value number(Scalar s) { return scalar(RationalFn(std::move(s))); }

  static bool indexed(const std::string& name, const std::string& stem, int& j) {
    if (name.size() <= stem.size() || name.compare(0, stem.size(), stem) != 0) return false;
    for (std::size_t k = stem.size(); k < name.size(); ++k)
      if (name[k] < '0' || name[k] > '9') return false;
    j = std::stoi(name.substr(stem.size()));
    return true;
  }

  Value identifier(const std::string& name, std::size_t pos) {
    if (name == "i") return scalar(RationalFn(Scalar::i()));
    if (name == "T") return op_T(vars);
    if (name == "Delta0") return op_Delta0(vars);
    if (auto idx = vars->find(name)) return scalar(RationalFn::var(vars, *idx));
    int j = 0;
    const std::pair<const char*, Builtin> stems[] = {{"Zbar", Builtin::Zbar}, {"Xt", Builtin::Xtilde},
                                                     {"Yt", Builtin::Ytilde}, {"X", Builtin::X},
                                                     {"Y", Builtin::Y},       {"Z", Builtin::Z}};
    for (const auto& [stem, kind] : stems) {
      if (!indexed(name, stem, j)) continue;
      if (j < 1 || j > vars->n()) throw ParseError("operator index out of range in '" + name + "'", pos);
      return builtin(kind, j, vars);
    }
    throw ParseError("unknown identifier '" + name + "'", pos);
  }

  bool is_function(const std::string& name) const { return name == "L"; }

  RationalFn order_zero(const DiffOp& op, std::size_t pos, const char* what) {
    if (op.order() > 0) throw ParseError(std::string(what) + " must be a scalar expression", pos);
    return op.coefficient(DiffOp::Index{});
  }

  Value call(const std::string&, Value arg, std::size_t pos) { return op_L(vars, order_zero(arg, pos, "argument of L")); }
  Value bracket(Value a, Value b, std::size_t) { return commutator(a, b); }
  Value add(Value a, Value b) { return a + b; }
  Value sub(Value a, Value b) { return a - b; }
  Value mul(Value a, Value b) { return a * b; }
  Value div(Value a, Value b, std::size_t pos) {
    RationalFn d = order_zero(b, pos, "divisor");
    if (d.is_zero()) throw ParseError("division by zero", pos);
    return d.inverse() * a;
  }
  Value neg(Value a) { return -a; }
  Value pow(Value a, int e, std::size_t pos) {
    if (e >= 0) return a.pow(static_cast<unsigned>(e));
    RationalFn base = order_zero(a, pos, "base of a negative power");
    if (base.is_zero()) throw ParseError("negative power of zero", pos);
    return scalar(base.pow(e));
  }
};

}  // namespace

DiffOp parse_operator(std::string_view text, const VarSetPtr& vars) {
  if (!vars) throw std::invalid_argument("parse_operator needs a variable set");
  OperatorBuilder builder{vars};
  detail::Parser<OperatorBuilder> parser(text, builder);
  return parser.parse();
}

}  // namespace heis
